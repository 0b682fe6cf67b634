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

#include "m2b/dsp/audio_config.hpp"

#include <cmath>

#include "m2b/error.hpp"

namespace m2b::dsp {

std::string to_string(WindowFunction w) {
  switch (w) {
    case WindowFunction::Hann:
      return "hann";
  }
  return "unknown";
}

WindowFunction window_function_from_string(const std::string& name) {
  if (name == "hann") return WindowFunction::Hann;
  throw ConfigError("unknown window function '" + name + "'", "window_function");
}

void AudioConfig::validate() const {
  if (sample_rate <= 0) throw ConfigError("must be positive", "sample_rate");
  if (hop_length <= 0) throw ConfigError("must be positive", "hop_length");
  if (window_size <= hop_length)
    throw ConfigError("must exceed hop_length", "window_size");
  if (window_size % 2 != 0) throw ConfigError("must be even", "window_size");
  if (!(segment_seconds > 0.0))
    throw ConfigError("must be positive", "segment_seconds");
  const double samples = segment_seconds * sample_rate;
  if (std::abs(samples - std::round(samples)) > 1e-6)
    throw ConfigError("segment_seconds * sample_rate must be an integer",
                      "segment_seconds");
  if (std::llround(samples) < window_size)
    throw ConfigError("segment shorter than one window", "segment_seconds");
}

std::int64_t AudioConfig::segment_samples() const {
  return std::llround(segment_seconds * sample_rate);
}

}  // namespace m2b::dsp
