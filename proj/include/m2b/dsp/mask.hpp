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

#include "m2b/dsp/spectrogram.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::dsp {

// Elementwise complex product s * m.
ComplexSpectrogram apply_complex_mask(const ComplexSpectrogram& s,
                                      const ComplexMask& m);

// (l + r) / 2 sample by sample.
Waveform mix_mono(const Waveform& l, const Waveform& r);

// (l - r) / 2 bin by bin.
ComplexSpectrogram diff_spectrogram(const ComplexSpectrogram& l,
                                    const ComplexSpectrogram& r);

// (l + r) / 2 bin by bin; with diff_spectrogram this gives l = m + d, r = m - d.
ComplexSpectrogram mono_spectrogram(const ComplexSpectrogram& l,
                                    const ComplexSpectrogram& r);

ComplexSpectrogram add(const ComplexSpectrogram& a, const ComplexSpectrogram& b);
ComplexSpectrogram subtract(const ComplexSpectrogram& a,
                            const ComplexSpectrogram& b);

}  // namespace m2b::dsp
