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

#include <span>

#include "m2b/dsp/spectrogram.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::dsp {

// Euclidean norm of a - b with complex cells read as (real, imag) pairs.
double l2_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double l2_distance(std::span<const double> a, std::span<const double> b);

// ||gt_l - pred_l|| + ||gt_r - pred_r|| over spectrograms.
double stft_distance(const ComplexSpectrogram& pred_l,
                     const ComplexSpectrogram& pred_r,
                     const ComplexSpectrogram& gt_l,
                     const ComplexSpectrogram& gt_r);

// Same sum over the analytic-signal envelopes of the waveforms.
double env_distance(const Waveform& pred_l, const Waveform& pred_r,
                    const Waveform& gt_l, const Waveform& gt_r);

}  // namespace m2b::dsp
