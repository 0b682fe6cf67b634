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

#include <complex>
#include <span>
#include <vector>

namespace m2b::dsp {

// Thin wrappers over cached FFTW plans. Safe to call from several threads.

// Real-to-complex transform of length n = input.size(); returns n/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> input);

// Complex-to-real inverse of length n, normalized by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> bins,
                          std::size_t n);

// Full complex transforms; inverse is normalized by 1/n.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x);
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x);

}  // namespace m2b::dsp
