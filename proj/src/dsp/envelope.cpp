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

#include "m2b/dsp/envelope.hpp"

#include <cmath>
#include <complex>

#include "m2b/dsp/fft.hpp"

namespace m2b::dsp {

std::vector<double> envelope(const Waveform& w) {
  for (double v : w.samples)
    if (!std::isfinite(v)) throw std::invalid_argument("envelope: non-finite input");
  const std::size_t n = w.size();
  if (n == 0) return {};

  std::vector<std::complex<double>> x(w.samples.begin(), w.samples.end());
  auto spectrum = fft(x);
  // One-sided spectrum: keep DC (and Nyquist for even n), double positives.
  const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) spectrum[k] *= 2.0;
  for (std::size_t k = positive_end + (n % 2 == 0 ? 1 : 0); k < n; ++k) spectrum[k] = 0.0;
  const auto analytic = ifft(spectrum);

  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(analytic[i]);
  return env;
}

}  // namespace m2b::dsp
