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

#include <cstdint>

#include "m2b/data/rng.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::data {

struct SegmentChoice {
  std::int64_t start = 0;       // first sample
  std::int64_t length = 0;      // samples
  double center_seconds = 0.0;  // midpoint timestamp
  std::size_t frame_index = 0;  // nearest video frame
  double frame_timestamp = 0.0;
};

// Uniform start in [0, total - length]; the frame is the one nearest the
// segment center. Throws when the clip is shorter than a segment.
SegmentChoice choose_segment(std::int64_t total_samples, std::int64_t length,
                             int sample_rate, double frame_rate,
                             std::size_t frame_count, Rng& rng);

// Segment at a fixed start (used for deterministic evaluation).
SegmentChoice segment_at(std::int64_t start, std::int64_t length, int sample_rate,
                         double frame_rate, std::size_t frame_count);

dsp::BinauralClip slice(const dsp::BinauralClip& clip, std::int64_t start,
                        std::int64_t length);
dsp::Waveform slice(const dsp::Waveform& w, std::int64_t start, std::int64_t length);

// Flip indicator: 0 when channels were swapped, 1 for the original order.
struct FlipResult {
  dsp::BinauralClip clip;
  int indicator = 1;
};

FlipResult apply_flip(const dsp::BinauralClip& clip, bool swap);

// Swaps the channels with probability 0.5.
FlipResult random_flip(const dsp::BinauralClip& clip, Rng& rng);

}  // namespace m2b::data
