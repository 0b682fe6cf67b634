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

#include "m2b/dsp/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace m2b::dsp {

std::vector<double> resample(std::span<const double> in, int from_rate,
                             int to_rate) {
  if (from_rate <= 0 || to_rate <= 0)
    throw std::invalid_argument("resample: rates must be positive");
  if (from_rate == to_rate) return {in.begin(), in.end()};

  constexpr double kZeroCrossings = 16.0;
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const double cutoff = std::min(1.0, ratio);
  const double half_width = kZeroCrossings / cutoff;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(in.size()) * ratio));
  const auto n_in = static_cast<std::int64_t>(in.size());

  std::vector<double> out(out_len, 0.0);
  for (std::size_t m = 0; m < out_len; ++m) {
    const double t = static_cast<double>(m) / ratio;
    const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(t - half_width)));
    const auto hi = std::min<std::int64_t>(n_in - 1, static_cast<std::int64_t>(std::floor(t + half_width)));
    double acc = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double x = t - static_cast<double>(k);
      const double arg = std::numbers::pi * cutoff * x;
      const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(arg) / arg;
      const double taper = 0.5 + 0.5 * std::cos(std::numbers::pi * x / half_width);
      acc += in[static_cast<std::size_t>(k)] * cutoff * sinc * taper;
    }
    out[m] = acc;
  }
  return out;
}

}  // namespace m2b::dsp
