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

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "m2b/data/clip_record.hpp"
#include "m2b/data/frames.hpp"
#include "m2b/data/image.hpp"
#include "m2b/data/rng.hpp"
#include "m2b/data/sampling.hpp"
#include "m2b/data/scene_sample.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::data {

// Read access to a list of clips: decoded audio at the configured rate and
// preprocessed frames. Audio and frames are cached after first use when
// caching is enabled.
class ClipStore {
 public:
  ClipStore(std::vector<ClipRecord> clips, dsp::AudioConfig audio,
            FramePreprocess frames, bool cache = true);

  std::size_t size() const noexcept { return clips_.size(); }
  const ClipRecord& record(std::size_t i) const { return clips_.at(i); }
  const std::vector<ClipRecord>& records() const noexcept { return clips_; }
  const dsp::AudioConfig& audio_config() const noexcept { return audio_; }
  const FramePreprocess& frame_config() const noexcept { return frames_; }

  dsp::BinauralClip audio(std::size_t i) const;
  std::size_t frame_count(std::size_t i) const;
  Image frame(std::size_t i, std::size_t frame_index) const;        // preprocessed
  Image raw_frame(std::size_t i, std::size_t frame_index) const;    // RGB [0, 1]

  // Random segment + random flip, as seen during training.
  SceneSample sample(std::size_t i, Rng& rng) const;
  // Segment starting at start with an explicit flip choice.
  SceneSample sample_at(std::size_t i, std::int64_t start, bool swap) const;

  // Start of the segment centered in the clip.
  std::int64_t center_start(std::size_t i) const;

 private:
  struct Entry {
    std::shared_ptr<const dsp::BinauralClip> audio;
    std::unique_ptr<FrameSource> frames;
    std::map<std::size_t, Image> frame_cache;
  };
  Entry& entry(std::size_t i) const;

  std::vector<ClipRecord> clips_;
  dsp::AudioConfig audio_;
  FramePreprocess frames_;
  bool cache_;
  mutable std::vector<Entry> entries_;
  mutable std::mutex mutex_;
};

}  // namespace m2b::data
