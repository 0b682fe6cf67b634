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

#include "m2b/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "m2b/data/frames.hpp"
#include "m2b/data/loaders.hpp"
#include "m2b/data/manifest.hpp"
#include "m2b/dsp/fft.hpp"
#include "m2b/dsp/wav_io.hpp"
#include "m2b/error.hpp"

namespace m2b::data {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
constexpr double kSourceRms = 0.1;

std::vector<double> noise_band(std::size_t n, int sample_rate, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> white(n);
  for (auto& v : white) v = gauss(rng);
  const double nyquist = sample_rate / 2.0;
  std::uniform_real_distribution<double> lo_dist(150.0, 0.15 * nyquist + 150.0);
  const double lo = lo_dist(rng);
  std::uniform_real_distribution<double> hi_dist(lo + 0.2 * nyquist, 0.9 * nyquist);
  const double hi = hi_dist(rng);

  auto spectrum = dsp::rfft(white);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    if (f < lo || f > hi) spectrum[k] = 0.0;
  }
  return dsp::irfft(spectrum, n);
}

std::vector<double> tone_stack(std::size_t n, int sample_rate, Rng& rng) {
  std::uniform_real_distribution<double> f0_dist(150.0, 450.0);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * kPi);
  const double f0 = f0_dist(rng);
  std::vector<double> out(n, 0.0);
  for (int h = 1; h * f0 < 0.45 * sample_rate; ++h) {
    const double phase = phase_dist(rng);
    const double amp = 1.0 / h;
    for (std::size_t i = 0; i < n; ++i)
      out[i] += amp * std::sin(2.0 * kPi * h * f0 * static_cast<double>(i) / sample_rate + phase);
  }
  return out;
}

std::vector<double> delayed(const std::vector<double>& x, std::int64_t d, double gain) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = static_cast<std::size_t>(d); i < x.size(); ++i)
    out[i] = std::clamp(gain * x[i - d], -1.0, 1.0);
  return out;
}

Image render_frame(const SynthSceneParams& p) {
  Image img(p.image_height, p.image_width);
  const double cx = blob_center_x(p.azimuth, p.image_width, p.blob_radius);
  const double cy = (p.image_height - 1) / 2.0;
  const double r = p.blob_radius;
  for (int y = 0; y < p.image_height; ++y) {
    for (int x = 0; x < p.image_width; ++x) {
      const double base = 0.06 + 0.06 * y / std::max(1, p.image_height - 1);
      const double d = std::hypot(x - cx, y - cy);
      // Solid disk with a one-radius soft rim.
      const double w = d <= r ? 1.0 : std::exp(-0.5 * std::pow((d - r) / (0.35 * r), 2));
      img.at(y, x, 0) = static_cast<float>(base + w * (1.0 - base));
      img.at(y, x, 1) = static_cast<float>(base + w * (0.9 - base));
      img.at(y, x, 2) = static_cast<float>(base + w * (0.6 - base));
    }
  }
  return img;
}

}  // namespace

void SynthSceneParams::validate() const {
  if (!(azimuth >= -kPi / 2 - 1e-12 && azimuth <= kPi / 2 + 1e-12))
    throw ConfigError("azimuth must lie in [-pi/2, pi/2]", "azimuth");
  if (!(itd_max >= 0.0)) throw ConfigError("must be non-negative", "itd_max");
  if (image_height <= 0 || image_width <= 0) throw ConfigError("must be positive", "image_size");
  if (blob_radius <= 0 || 2 * blob_radius >= image_width)
    throw ConfigError("must be positive and fit the image", "blob_radius");
  if (!(duration > 0.0)) throw ConfigError("must be positive", "duration");
  if (!(frame_rate > 0.0)) throw ConfigError("must be positive", "frame_rate");
}

PanGains panning_gains(double azimuth) {
  const double theta = (azimuth + kPi / 2) / 2;
  return {std::cos(theta), std::sin(theta)};
}

std::int64_t itd_samples(double azimuth, double itd_max, int sample_rate) {
  return std::llround(itd_max * std::sin(azimuth) * sample_rate);
}

double blob_center_x(double azimuth, int image_width, int blob_radius) {
  const double u = (azimuth + kPi / 2) / kPi;
  return blob_radius + u * (image_width - 1 - 2.0 * blob_radius);
}

RenderedScene render_scene(const SynthSceneParams& p, int sample_rate, Rng& rng) {
  p.validate();
  const auto n = static_cast<std::size_t>(std::llround(p.duration * sample_rate));
  auto src = p.source == SourceKind::NoiseBand ? noise_band(n, sample_rate, rng)
                                               : tone_stack(n, sample_rate, rng);
  double energy = 0.0;
  for (double v : src) energy += v * v;
  const double scale = energy > 0 ? kSourceRms / std::sqrt(energy / n) : 0.0;
  for (auto& v : src) v *= scale;

  RenderedScene scene;
  scene.gains = panning_gains(p.azimuth);
  const auto itd = itd_samples(p.azimuth, p.itd_max, sample_rate);
  scene.binaural.left = {delayed(src, std::max<std::int64_t>(itd, 0), scene.gains.left), sample_rate};
  scene.binaural.right = {delayed(src, std::max<std::int64_t>(-itd, 0), scene.gains.right), sample_rate};
  scene.source = {std::move(src), sample_rate};
  scene.frame = render_frame(p);
  return scene;
}

ClipRecord synth_scene(const SynthSceneParams& p, const std::string& id,
                       const fs::path& out_dir, int sample_rate, Rng& rng) {
  const auto scene = render_scene(p, sample_rate, rng);
  ClipRecord record;
  record.id = id;
  record.audio_path = fs::absolute(out_dir / "audio" / (id + ".wav"));
  record.video_path = fs::absolute(out_dir / "frames" / id);
  record.duration = static_cast<double>(scene.binaural.size()) / sample_rate;
  record.frame_rate = p.frame_rate;
  record.azimuth = p.azimuth;

  dsp::save_binaural(record.audio_path, scene.binaural, dsp::SampleFormat::Float32);
  const auto frames = static_cast<std::size_t>(std::floor(record.duration * p.frame_rate + 1e-9));
  if (fs::exists(record.video_path)) fs::remove_all(record.video_path);
  write_frame_directory(record.video_path, std::vector<Image>(std::max<std::size_t>(frames, 1), scene.frame));
  return record;
}

DatasetSplits synth_dataset(const SynthDatasetOptions& o, const fs::path& out_dir) {
  std::vector<ClipRecord> clips;
  clips.reserve(o.count);
  char name[32];
  for (std::size_t i = 0; i < o.count; ++i) {
    Rng rng = make_rng(o.seed, "synth-scene", i);
    std::uniform_real_distribution<double> az(-kPi / 2, kPi / 2);
    std::bernoulli_distribution tone(0.5);
    SynthSceneParams p;
    p.azimuth = az(rng);
    p.source = tone(rng) ? SourceKind::ToneStack : SourceKind::NoiseBand;
    p.itd_max = o.itd_max;
    p.image_height = o.image_height;
    p.image_width = o.image_width;
    p.blob_radius = o.blob_radius;
    p.duration = o.duration;
    std::snprintf(name, sizeof(name), "scene_%04zu", i);
    clips.push_back(synth_scene(p, name, out_dir, o.sample_rate, rng));
  }
  auto splits = split_by_hash(clips, {o.train_fraction, o.val_fraction});
  write_split_manifest(out_dir / "manifest.json", splits);
  return splits;
}

}  // namespace m2b::data
