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

#include "m2b/data/scene_sample.hpp"

#include "m2b/dsp/mask.hpp"
#include "m2b/dsp/stft.hpp"

namespace m2b::data {

SceneSample make_scene_sample(const dsp::BinauralClip& segment, bool swap,
                              Image frame, const dsp::AudioConfig& cfg) {
  segment.validate();
  SceneSample s;
  s.gt_left_spec = dsp::stft(segment.left, cfg);
  s.gt_right_spec = dsp::stft(segment.right, cfg);
  s.mono_spec = dsp::stft(dsp::mix_mono(segment.left, segment.right), cfg);
  s.flip_indicator = swap ? 0 : 1;
  s.flipped_left_spec = swap ? s.gt_right_spec : s.gt_left_spec;
  s.flipped_right_spec = swap ? s.gt_left_spec : s.gt_right_spec;
  s.frame = std::move(frame);
  return s;
}

}  // namespace m2b::data
