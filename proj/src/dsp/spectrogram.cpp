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

#include "m2b/dsp/spectrogram.hpp"

#include <cmath>

#include "m2b/error.hpp"

namespace m2b::dsp {

bool ComplexMatrix::all_finite() const noexcept {
  for (const auto& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexSpectrogram crop_lowest_bin(const ComplexSpectrogram& s) {
  if (s.bins() < 2) throw ShapeError("cannot crop a spectrogram with fewer than 2 bins");
  ComplexSpectrogram out{ComplexMatrix(s.bins() - 1, s.frames()), s.config};
  for (std::size_t b = 1; b < s.bins(); ++b)
    for (std::size_t t = 0; t < s.frames(); ++t) out.values(b - 1, t) = s.values(b, t);
  return out;
}

ComplexSpectrogram restore_lowest_bin(const ComplexSpectrogram& s) {
  ComplexSpectrogram out{ComplexMatrix(s.bins() + 1, s.frames()), s.config};
  for (std::size_t b = 0; b < s.bins(); ++b)
    for (std::size_t t = 0; t < s.frames(); ++t) out.values(b + 1, t) = s.values(b, t);
  return out;
}

ComplexMask restore_lowest_bin(const ComplexMask& m, Complex fill) {
  const auto& v = m.values;
  ComplexMask out{ComplexMatrix(v.rows() + 1, v.cols())};
  for (std::size_t t = 0; t < v.cols(); ++t) out.values(0, t) = fill;
  for (std::size_t b = 0; b < v.rows(); ++b)
    for (std::size_t t = 0; t < v.cols(); ++t) out.values(b + 1, t) = v(b, t);
  return out;
}

}  // namespace m2b::dsp
