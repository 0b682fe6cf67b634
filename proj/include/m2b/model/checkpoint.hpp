// Copyright 2026 The m2b Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <torch/torch.h>

#include <filesystem>

#include "m2b/config/json_reader.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/model/model.hpp"

namespace m2b::model {

inline constexpr int kCheckpointSchema = 1;

// One archive holding every named parameter and buffer, the NetConfig, the
// AudioConfig and free-form metadata.
void save_checkpoint(const std::filesystem::path& path, BinauralNetImpl& model,
                     const dsp::AudioConfig& audio, const config::Json& meta = config::Json::object());

struct LoadedModel {
  BinauralNet model{nullptr};
  NetConfig net;
  dsp::AudioConfig audio;
  config::Json meta;
};

LoadedModel load_checkpoint(const std::filesystem::path& path);

// Named tensors of a module (parameters then buffers), detached.
std::vector<std::pair<std::string, torch::Tensor>> named_state(const torch::nn::Module& m);

// Copies tensors into matching module entries; throws on missing names or
// shape mismatches.
void load_state(torch::nn::Module& m,
                const std::vector<std::pair<std::string, torch::Tensor>>& state);

// Residual trunk weights exported from a standard ResNet18 state dict
// (see tools/convert_resnet18.py).
void load_visual_asset(VisualNetImpl& visual, const std::filesystem::path& path);

}  // namespace m2b::model
