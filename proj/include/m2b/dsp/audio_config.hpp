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

#include <cstdint>
#include <string>

namespace m2b::dsp {

enum class WindowFunction { Hann };

std::string to_string(WindowFunction w);
WindowFunction window_function_from_string(const std::string& name);

// Sampling and STFT framing parameters shared by every audio path.
struct AudioConfig {
  int sample_rate = 16000;
  int window_size = 512;
  int hop_length = 160;
  double segment_seconds = 0.63;
  WindowFunction window = WindowFunction::Hann;

  // Throws ConfigError unless window_size > hop_length > 0 and the segment
  // length is a whole number of samples.
  void validate() const;

  std::int64_t segment_samples() const;
  int freq_bins() const { return window_size / 2 + 1; }
  // Bins after the lowest one is cropped for the networks.
  int model_bins() const { return window_size / 2; }
  std::int64_t frame_count(std::int64_t samples) const {
    return 1 + samples / hop_length;
  }

  friend bool operator==(const AudioConfig&, const AudioConfig&) = default;
};

}  // namespace m2b::dsp
