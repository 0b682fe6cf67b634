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

#include "m2b/infer/binauralize.hpp"

#include <map>

#include "m2b/data/frames.hpp"
#include "m2b/data/sampling.hpp"
#include "m2b/dsp/stft.hpp"
#include "m2b/error.hpp"
#include "m2b/log.hpp"

namespace m2b::infer {

std::vector<std::int64_t> window_starts(std::int64_t length, std::int64_t window, std::int64_t hop) {
  if (window <= 0 || hop <= 0) throw ConfigError("window and hop must be positive", "inference");
  if (length < window) throw ShapeError("input shorter than one window");
  std::vector<std::int64_t> starts;
  for (std::int64_t s = 0; s + window <= length; s += hop) starts.push_back(s);
  if (starts.back() + window < length) starts.push_back(length - window);
  return starts;
}

dsp::BinauralClip binauralize(Predictor& predictor, const dsp::Waveform& mono,
                              const FrameProvider& frames, const InferenceConfig& cfg,
                              const dsp::AudioConfig& audio) {
  cfg.validate();
  audio.validate();
  if (mono.sample_rate != audio.sample_rate)
    throw ShapeError("binauralize: mono at " + std::to_string(mono.sample_rate) +
                     " Hz, config at " + std::to_string(audio.sample_rate) + " Hz");
  const auto win = cfg.window_samples(audio.sample_rate);
  const auto hop = cfg.hop_samples(audio.sample_rate);
  if (win < audio.window_size) throw ConfigError("shorter than one STFT window", "window_seconds");
  const auto n = static_cast<std::int64_t>(mono.size());
  if (n < win)
    throw ShapeError("binauralize: input of " + std::to_string(n) +
                     " samples is shorter than one window of " + std::to_string(win));
  if (frames.count == 0 || !frames.load) throw DatasetError("binauralize: no video frames");

  const auto starts = window_starts(n, win, hop);
  std::vector<double> sum_l(n, 0.0), sum_r(n, 0.0), count(n, 0.0);
  std::map<std::size_t, data::Image> frame_cache;
  bool warned = false;

  for (std::size_t first = 0; first < starts.size(); first += cfg.batch_windows) {
    const std::size_t last = std::min(starts.size(), first + cfg.batch_windows);
    std::vector<dsp::ComplexSpectrogram> specs;
    std::vector<const data::Image*> frame_ptrs;
    specs.reserve(last - first);
    for (std::size_t k = first; k < last; ++k) {
      specs.push_back(dsp::stft(data::slice(mono, starts[k], win), audio));
      const double center = (static_cast<double>(starts[k]) + win / 2.0) / audio.sample_rate;
      const auto ideal = std::llround(center * frames.frame_rate);
      const auto idx = data::nearest_frame_index(center, frames.frame_rate, frames.count);
      if (ideal != static_cast<long long>(idx) && !warned) {
        log::warn("frame " + std::to_string(ideal) + " missing; using nearest frame " +
                  std::to_string(idx));
        warned = true;
      }
      auto it = frame_cache.find(idx);
      if (it == frame_cache.end()) it = frame_cache.emplace(idx, frames.load(idx)).first;
      frame_ptrs.push_back(&it->second);
    }
    std::vector<WindowInput> inputs;
    for (std::size_t k = first; k < last; ++k)
      inputs.push_back({&specs[k - first], frame_ptrs[k - first], starts[k], win});
    const auto preds = predictor.predict(inputs);
    if (preds.size() != inputs.size()) throw ShapeError("predictor returned a wrong window count");
    for (std::size_t k = first; k < last; ++k) {
      const auto l = dsp::istft(preds[k - first].left, static_cast<std::size_t>(win));
      const auto r = dsp::istft(preds[k - first].right, static_cast<std::size_t>(win));
      for (std::int64_t i = 0; i < win; ++i) {
        sum_l[starts[k] + i] += l.samples[i];
        sum_r[starts[k] + i] += r.samples[i];
        count[starts[k] + i] += 1.0;
      }
    }
  }
  dsp::BinauralClip out;
  out.left = {std::move(sum_l), audio.sample_rate};
  out.right = {std::move(sum_r), audio.sample_rate};
  for (std::int64_t i = 0; i < n; ++i) {
    out.left.samples[i] /= count[i];
    out.right.samples[i] /= count[i];
  }
  return out;
}

}  // namespace m2b::infer
