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

#include "m2b/dsp/stft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "m2b/dsp/fft.hpp"
#include "m2b/error.hpp"

namespace m2b::dsp {

std::vector<double> make_window(WindowFunction kind, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  switch (kind) {
    case WindowFunction::Hann:
      for (int i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
      break;
  }
  return w;
}

bool satisfies_overlap_add(const AudioConfig& cfg) {
  if (cfg.hop_length <= 0 || cfg.hop_length > cfg.window_size) return false;
  const auto w = make_window(cfg.window, cfg.window_size);
  for (int phase = 0; phase < cfg.hop_length; ++phase) {
    double acc = 0.0;
    for (int i = phase; i < cfg.window_size; i += cfg.hop_length) acc += w[i] * w[i];
    if (acc < 1e-10) return false;
  }
  return true;
}

ComplexSpectrogram stft(const Waveform& w, const AudioConfig& cfg) {
  cfg.validate();
  if (w.sample_rate != cfg.sample_rate)
    throw ShapeError("stft: waveform rate " + std::to_string(w.sample_rate) +
                     " differs from config rate " + std::to_string(cfg.sample_rate));
  const auto len = static_cast<std::int64_t>(w.size());
  const int n = cfg.window_size;
  if (len < n)
    throw ShapeError("stft: signal of " + std::to_string(len) +
                     " samples is shorter than one window (" + std::to_string(n) + ")");

  const int half = n / 2;
  const auto reflect = [&](std::int64_t j) {
    if (j < 0) j = -j;
    if (j >= len) j = 2 * (len - 1) - j;
    return w.samples[static_cast<std::size_t>(j)];
  };

  const auto window = make_window(cfg.window, n);
  const auto frames = cfg.frame_count(len);
  ComplexSpectrogram out{ComplexMatrix(static_cast<std::size_t>(cfg.freq_bins()),
                                       static_cast<std::size_t>(frames)),
                         cfg};
  std::vector<double> frame(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < frames; ++t) {
    const std::int64_t start = t * cfg.hop_length - half;
    for (int i = 0; i < n; ++i) frame[i] = reflect(start + i) * window[i];
    const auto bins = rfft(frame);
    for (std::size_t b = 0; b < bins.size(); ++b)
      out.values(b, static_cast<std::size_t>(t)) = bins[b];
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& s, std::optional<std::size_t> length) {
  const auto& cfg = s.config;
  cfg.validate();
  if (!satisfies_overlap_add(cfg))
    throw ConfigError("window/hop pair cannot be inverted by overlap-add",
                      "hop_length");
  const int n = cfg.window_size;
  if (s.bins() != static_cast<std::size_t>(cfg.freq_bins()))
    throw ShapeError("istft: expected " + std::to_string(cfg.freq_bins()) +
                     " bins, got " + std::to_string(s.bins()));
  const std::size_t frames = s.frames();
  if (frames == 0) throw ShapeError("istft: spectrogram has no frames");

  const auto window = make_window(cfg.window, n);
  const std::size_t hop = static_cast<std::size_t>(cfg.hop_length);
  const std::size_t padded = static_cast<std::size_t>(n) + (frames - 1) * hop;
  std::vector<double> acc(padded, 0.0);
  std::vector<double> norm(padded, 0.0);
  std::vector<Complex> column(s.bins());
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < s.bins(); ++b) column[b] = s.values(b, t);
    const auto frame = irfft(column, static_cast<std::size_t>(n));
    const std::size_t offset = t * hop;
    for (int i = 0; i < n; ++i) {
      acc[offset + i] += frame[i] * window[i];
      norm[offset + i] += window[i] * window[i];
    }
  }

  const std::size_t natural = (frames - 1) * hop;
  const std::size_t out_len = length.value_or(natural);
  Waveform out{std::vector<double>(out_len, 0.0), cfg.sample_rate};
  const std::size_t half = static_cast<std::size_t>(n / 2);
  for (std::size_t i = 0; i < out_len && half + i < padded; ++i) {
    const double d = norm[half + i];
    out.samples[i] = d > 1e-11 ? acc[half + i] / d : 0.0;
  }
  return out;
}

}  // namespace m2b::dsp
