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

#include "m2b/data/sampling.hpp"

#include <string>

#include "m2b/data/frames.hpp"
#include "m2b/error.hpp"

namespace m2b::data {

SegmentChoice segment_at(std::int64_t start, std::int64_t length, int sample_rate,
                         double frame_rate, std::size_t frame_count) {
  SegmentChoice c;
  c.start = start;
  c.length = length;
  c.center_seconds = (static_cast<double>(start) + length / 2.0) / sample_rate;
  c.frame_index = nearest_frame_index(c.center_seconds, frame_rate, frame_count);
  c.frame_timestamp = static_cast<double>(c.frame_index) / frame_rate;
  return c;
}

SegmentChoice choose_segment(std::int64_t total_samples, std::int64_t length,
                             int sample_rate, double frame_rate,
                             std::size_t frame_count, Rng& rng) {
  if (total_samples < length)
    throw DatasetError("clip of " + std::to_string(total_samples) +
                       " samples is shorter than a segment of " + std::to_string(length));
  std::uniform_int_distribution<std::int64_t> dist(0, total_samples - length);
  return segment_at(dist(rng), length, sample_rate, frame_rate, frame_count);
}

dsp::Waveform slice(const dsp::Waveform& w, std::int64_t start, std::int64_t length) {
  if (start < 0 || start + length > static_cast<std::int64_t>(w.size()))
    throw ShapeError("slice out of range");
  return dsp::Waveform{{w.samples.begin() + start, w.samples.begin() + start + length},
                       w.sample_rate};
}

dsp::BinauralClip slice(const dsp::BinauralClip& clip, std::int64_t start,
                        std::int64_t length) {
  return {slice(clip.left, start, length), slice(clip.right, start, length)};
}

FlipResult apply_flip(const dsp::BinauralClip& clip, bool swap) {
  if (swap) return FlipResult{dsp::BinauralClip{clip.right, clip.left}, 0};
  return FlipResult{clip, 1};
}

FlipResult random_flip(const dsp::BinauralClip& clip, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  return apply_flip(clip, coin(rng));
}

}  // namespace m2b::data
