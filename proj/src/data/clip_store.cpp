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

#include "m2b/data/clip_store.hpp"

#include "m2b/dsp/wav_io.hpp"
#include "m2b/error.hpp"

namespace m2b::data {

ClipStore::ClipStore(std::vector<ClipRecord> clips, dsp::AudioConfig audio,
                     FramePreprocess frames, bool cache)
    : clips_(std::move(clips)),
      audio_(audio),
      frames_(frames),
      cache_(cache),
      entries_(clips_.size()) {
  audio_.validate();
  frames_.validate();
}

ClipStore::Entry& ClipStore::entry(std::size_t i) const {
  auto& e = entries_.at(i);
  const auto& rec = clips_[i];
  if (!e.frames) e.frames = std::make_unique<FrameSource>(rec.video_path, rec.frame_rate);
  return e;
}

dsp::BinauralClip ClipStore::audio(std::size_t i) const {
  std::lock_guard lock(mutex_);
  auto& e = entries_.at(i);
  if (e.audio) return *e.audio;
  const auto& rec = clips_[i];
  dsp::BinauralClip clip;
  try {
    clip = dsp::load_binaural(rec.audio_path, audio_.sample_rate);
  } catch (const std::exception& ex) {
    throw DatasetError(std::string("cannot read audio: ") + ex.what(), {rec.audio_path.string()});
  }
  if (cache_) e.audio = std::make_shared<const dsp::BinauralClip>(clip);
  return clip;
}

std::size_t ClipStore::frame_count(std::size_t i) const {
  std::lock_guard lock(mutex_);
  return entry(i).frames->count();
}

Image ClipStore::raw_frame(std::size_t i, std::size_t frame_index) const {
  std::lock_guard lock(mutex_);
  return entry(i).frames->load(frame_index);
}

Image ClipStore::frame(std::size_t i, std::size_t frame_index) const {
  std::lock_guard lock(mutex_);
  auto& e = entry(i);
  if (auto it = e.frame_cache.find(frame_index); it != e.frame_cache.end()) return it->second;
  auto img = frames_.apply(e.frames->load(frame_index));
  if (cache_) e.frame_cache.emplace(frame_index, img);
  return img;
}

std::int64_t ClipStore::center_start(std::size_t i) const {
  const auto total = static_cast<std::int64_t>(audio(i).size());
  return std::max<std::int64_t>(0, (total - audio_.segment_samples()) / 2);
}

SceneSample ClipStore::sample(std::size_t i, Rng& rng) const {
  const auto clip = audio(i);
  const auto seg = choose_segment(static_cast<std::int64_t>(clip.size()), audio_.segment_samples(),
                                  audio_.sample_rate, clips_[i].frame_rate, frame_count(i), rng);
  std::bernoulli_distribution coin(0.5);
  const bool swap = coin(rng);
  return make_scene_sample(slice(clip, seg.start, seg.length), swap, frame(i, seg.frame_index),
                           audio_);
}

SceneSample ClipStore::sample_at(std::size_t i, std::int64_t start, bool swap) const {
  const auto clip = audio(i);
  const auto seg = segment_at(start, audio_.segment_samples(), audio_.sample_rate,
                              clips_[i].frame_rate, frame_count(i));
  return make_scene_sample(slice(clip, seg.start, seg.length), swap, frame(i, seg.frame_index),
                           audio_);
}

}  // namespace m2b::data
