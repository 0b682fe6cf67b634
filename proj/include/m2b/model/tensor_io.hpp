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

#include <span>

#include "m2b/data/image.hpp"
#include "m2b/data/scene_sample.hpp"
#include "m2b/dsp/spectrogram.hpp"

namespace m2b::model {

// Full-bin spectrogram -> [2, bins-1, frames] with the lowest bin cropped.
torch::Tensor spectrogram_to_tensor(const dsp::ComplexSpectrogram& s,
                                    torch::Dtype dtype = torch::kFloat32);

// [2, F, T] mask -> full-bin ComplexMask whose lowest row is zero.
dsp::ComplexMask mask_from_tensor(const torch::Tensor& mask);

// [2, F, T] spectrogram -> full-bin spectrogram whose lowest row is zero.
dsp::ComplexSpectrogram spectrogram_from_tensor(const torch::Tensor& spec,
                                                const dsp::AudioConfig& cfg);

// HWC image -> [3, H, W].
torch::Tensor image_to_tensor(const data::Image& img, torch::Dtype dtype = torch::kFloat32);

struct Batch {
  torch::Tensor frames;     // [B,3,H,W]
  torch::Tensor mono;       // S_m
  torch::Tensor binaural;   // (S_l', S_r') as [B,4,F,T]
  torch::Tensor left;       // S_l
  torch::Tensor right;      // S_r
  torch::Tensor diff;       // S_D = (S_l - S_r) / 2
  torch::Tensor indicator;  // y in {0,1}, [B]

  int64_t size() const { return mono.size(0); }
  Batch to(const torch::Device& device, torch::Dtype dtype) const;
};

Batch make_batch(std::span<const data::SceneSample> samples, torch::Dtype dtype = torch::kFloat32);

}  // namespace m2b::model
