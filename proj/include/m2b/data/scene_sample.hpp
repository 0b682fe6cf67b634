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

#include "m2b/data/image.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/dsp/spectrogram.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::data {

// One training example; spectrograms keep all window_size / 2 + 1 bins.
struct SceneSample {
  dsp::ComplexSpectrogram mono_spec;
  dsp::ComplexSpectrogram gt_left_spec;
  dsp::ComplexSpectrogram gt_right_spec;
  dsp::ComplexSpectrogram flipped_left_spec;
  dsp::ComplexSpectrogram flipped_right_spec;
  int flip_indicator = 1;
  Image frame;  // preprocessed
};

// segment: ground-truth binaural audio; swap: whether the classifier input
// is channel-swapped (indicator 0).
SceneSample make_scene_sample(const dsp::BinauralClip& segment, bool swap,
                              Image frame, const dsp::AudioConfig& cfg);

}  // namespace m2b::data
