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

#include <string>
#include <utility>

#include "m2b/config/json_reader.hpp"

namespace m2b::model {

// Sizes of the five subnetworks. Spectrogram inputs are (real, imag) planes of
// freq_bins x frames with the lowest bin already cropped.
struct NetConfig {
  int freq_bins = 256;
  int frames = 64;
  int frame_height = 224;
  int frame_width = 448;

  int visual_channels = 512;
  bool use_pretrained_visual = false;
  std::string pretrained_visual_path;
  int attention_hidden_channels = 128;
  bool use_attention = true;

  int unet_depth = 5;
  int base_channels = 64;
  int visual_reduce_channels = 8;  // 1x1 reduction of f_vb before flattening
  int visual_embedding = 512;      // channels tiled over the bottleneck

  int apnet_channels = 64;
  int association_copies = 4;  // weighted copies per decoder level

  int classifier_channels = 128;

  static constexpr int kBackboneInput = 2;
  static constexpr int kBackboneOutput = 2;
  static constexpr int kApnetOutput = 4;
  static constexpr int kBinauralInput = 4;

  void validate() const;

  int encoder_channels(int level) const;
  std::pair<int, int> visual_grid() const;      // (h, w) of f_v
  std::pair<int, int> bottleneck_grid() const;  // spectrogram grid at depth

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

config::Json to_json(const NetConfig& c);
NetConfig net_config_from_json(const config::Json& j, const std::string& prefix = "net");

}  // namespace m2b::model
