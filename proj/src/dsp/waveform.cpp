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

#include "m2b/dsp/waveform.hpp"

#include <cmath>

#include "m2b/error.hpp"

namespace m2b::dsp {

void Waveform::validate() const {
  if (samples.empty()) throw ShapeError("waveform is empty");
  if (sample_rate <= 0) throw ShapeError("waveform sample rate must be positive");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("waveform has non-finite samples");
}

void BinauralClip::validate() const {
  left.validate();
  right.validate();
  if (left.size() != right.size())
    throw ShapeError("binaural channels differ in length");
  if (left.sample_rate != right.sample_rate)
    throw ShapeError("binaural channels differ in sample rate");
}

double rms(const Waveform& w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (double v : w.samples) acc += v * v;
  return std::sqrt(acc / static_cast<double>(w.samples.size()));
}

}  // namespace m2b::dsp
