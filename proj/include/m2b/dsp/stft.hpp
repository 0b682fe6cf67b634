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

#include <optional>
#include <vector>

#include "m2b/dsp/audio_config.hpp"
#include "m2b/dsp/spectrogram.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::dsp {

// Periodic window of length n.
std::vector<double> make_window(WindowFunction kind, int n);

// Centered STFT with reflection padding of window_size / 2 on both sides.
// Produces freq_bins() x (1 + len / hop) values. Throws if the signal is
// shorter than one window or its rate differs from cfg.sample_rate.
ComplexSpectrogram stft(const Waveform& w, const AudioConfig& cfg);

// Weighted overlap-add inverse of stft(). With length set, the output is
// trimmed or zero-padded to exactly that many samples; otherwise it has
// (frames - 1) * hop samples. Throws if the window/hop pair cannot be
// inverted (the summed squared window vanishes somewhere).
Waveform istft(const ComplexSpectrogram& s,
               std::optional<std::size_t> length = std::nullopt);

// True when every sample position receives a strictly positive summed
// squared-window weight.
bool satisfies_overlap_add(const AudioConfig& cfg);

}  // namespace m2b::dsp
