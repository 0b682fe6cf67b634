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

#include <functional>

#include "m2b/data/image.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/dsp/waveform.hpp"
#include "m2b/infer/inference_config.hpp"
#include "m2b/infer/predictor.hpp"

namespace m2b::infer {

struct FrameProvider {
  std::size_t count = 0;
  double frame_rate = 10.0;
  std::function<data::Image(std::size_t)> load;  // preprocessed frame by index
};

// Window starts 0, hop, 2*hop, ... plus a final window ending at the clip end.
std::vector<std::int64_t> window_starts(std::int64_t length, std::int64_t window,
                                        std::int64_t hop);

// Sliding-window binauralization. Each window is predicted, inverted to a
// waveform of window length, and overlapping samples are averaged. Output
// length equals the input length.
dsp::BinauralClip binauralize(Predictor& predictor, const dsp::Waveform& mono,
                              const FrameProvider& frames, const InferenceConfig& cfg,
                              const dsp::AudioConfig& audio);

}  // namespace m2b::infer
