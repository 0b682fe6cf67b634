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

#include <cstddef>
#include <vector>

namespace m2b::dsp {

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  // Throws on empty or non-finite content.
  void validate() const;
};

struct BinauralClip {
  Waveform left;
  Waveform right;

  std::size_t size() const { return left.size(); }
  int sample_rate() const { return left.sample_rate; }
  // Both channels valid, equal length and rate.
  void validate() const;
};

double rms(const Waveform& w);

}  // namespace m2b::dsp
