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

#include <filesystem>
#include <span>
#include <string>

#include "m2b/config/json_reader.hpp"
#include "m2b/data/clip_record.hpp"
#include "m2b/data/image.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/infer/inference_config.hpp"
#include "m2b/losses/losses.hpp"
#include "m2b/model/net_config.hpp"
#include "m2b/train/train_config.hpp"

namespace m2b::train {

enum class DataSource { Manifest, FairPlay, Asmr };

std::string to_string(DataSource s);
DataSource data_source_from_string(const std::string& s);

struct DataConfig {
  DataSource source = DataSource::Manifest;
  std::filesystem::path root;  // manifest file, or dataset root directory
  int split = 1;               // FAIR-Play split id
  double train_fraction = 0.8; // manifests without split fields
  double val_fraction = 0.1;
  void validate() const;
  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

// Everything a run needs; one JSON object with one block per component.
struct RunConfig {
  dsp::AudioConfig audio;
  data::FramePreprocess frames;
  model::NetConfig net;
  TrainConfig train;
  losses::LossWeights loss_weights;
  infer::InferenceConfig inference;
  DataConfig data;
  // Validates every block and the shapes shared between them.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

config::Json to_json(const DataConfig& c);
DataConfig data_config_from_json(const config::Json& j, const std::string& prefix = "data");
config::Json to_json(const RunConfig& c);
// Missing blocks and keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const config::Json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& c);

// Applies "block.key=value" overrides to the full JSON form of a config. The
// value is parsed as JSON when possible and kept as a string otherwise. The
// key must name an existing field.
RunConfig apply_overrides(const RunConfig& base, std::span<const std::string> overrides);

data::DatasetSplits load_splits(const DataConfig& c);

}  // namespace m2b::train
