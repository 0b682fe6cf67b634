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

#include <filesystem>
#include <utility>

#include "m2b/data/clip_record.hpp"
#include "m2b/data/image.hpp"
#include "m2b/data/rng.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/dsp/waveform.hpp"

namespace m2b::data {

enum class SourceKind { NoiseBand, ToneStack };

// Parameters of one synthetic audio-visual scene.
struct SynthSceneParams {
  double azimuth = 0.0;  // radians, -pi/2 (hard left) .. pi/2 (hard right)
  SourceKind source = SourceKind::NoiseBand;
  double itd_max = 0.6e-3;  // seconds
  int image_height = 224;
  int image_width = 448;
  int blob_radius = 24;
  double duration = 2.0;  // seconds
  double frame_rate = 10.0;

  void validate() const;
};

struct PanGains {
  double left = 0.0;
  double right = 0.0;
};

// Constant-power law: theta = (azimuth + pi/2) / 2, (cos theta, sin theta).
PanGains panning_gains(double azimuth);

// Whole-sample interaural delay, positive when the left channel lags.
std::int64_t itd_samples(double azimuth, double itd_max, int sample_rate);

// Blob center column for an azimuth.
double blob_center_x(double azimuth, int image_width, int blob_radius);

struct RenderedScene {
  dsp::Waveform source;
  dsp::BinauralClip binaural;
  Image frame;  // RGB in [0, 1]
  PanGains gains;
};

// Mono source generation, panning, optional ITD and the frame image.
RenderedScene render_scene(const SynthSceneParams& p, int sample_rate, Rng& rng);

// Renders and writes <out_dir>/audio/<id>.wav plus <out_dir>/frames/<id>/*.png.
// Returned record paths are absolute.
ClipRecord synth_scene(const SynthSceneParams& p, const std::string& id,
                       const std::filesystem::path& out_dir, int sample_rate,
                       Rng& rng);

struct SynthDatasetOptions {
  std::size_t count = 200;
  std::uint64_t seed = 0;
  int sample_rate = 16000;
  double duration = 2.0;
  double itd_max = 0.0;
  int image_height = 224;
  int image_width = 448;
  int blob_radius = 24;
  double train_fraction = 0.7;
  double val_fraction = 0.1;
};

// Azimuths uniform over [-pi/2, pi/2] and alternating-at-random source kinds;
// writes <out_dir>/manifest.json with relative paths and split fields.
DatasetSplits synth_dataset(const SynthDatasetOptions& options,
                            const std::filesystem::path& out_dir);

}  // namespace m2b::data
