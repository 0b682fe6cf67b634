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

#include "m2b/config/json_reader.hpp"
#include "m2b/dsp/audio_config.hpp"

namespace m2b::infer {

enum class OutputSource { ApnetChannels, BackboneDifference };
enum class OverlapCombine { Average };

std::string to_string(OutputSource s);
OutputSource output_source_from_string(const std::string& s);
std::string to_string(OverlapCombine c);
OverlapCombine overlap_combine_from_string(const std::string& s);

struct InferenceConfig {
  double window_seconds = 0.63;
  double hop_seconds = 0.1;
  OverlapCombine overlap_combine = OverlapCombine::Average;
  OutputSource output_source = OutputSource::ApnetChannels;
  int batch_windows = 16;  // windows per forward pass

  void validate() const;
  std::int64_t window_samples(int sample_rate) const;
  std::int64_t hop_samples(int sample_rate) const;

  friend bool operator==(const InferenceConfig&, const InferenceConfig&) = default;
};

config::Json to_json(const InferenceConfig& c);
InferenceConfig inference_config_from_json(const config::Json& j,
                                           const std::string& prefix = "inference");

}  // namespace m2b::infer
