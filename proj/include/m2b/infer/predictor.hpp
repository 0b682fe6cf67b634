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

#include <torch/torch.h>

#include <span>
#include <vector>

#include "m2b/data/image.hpp"
#include "m2b/dsp/spectrogram.hpp"
#include "m2b/dsp/waveform.hpp"
#include "m2b/infer/inference_config.hpp"
#include "m2b/model/model.hpp"

namespace m2b::infer {

struct WindowInput {
  const dsp::ComplexSpectrogram* mono;  // full-bin S_m of the window
  const data::Image* frame;             // preprocessed center frame
  std::int64_t start;                   // first sample of the window in the clip
  std::int64_t length;                  // window length in samples
};

struct WindowPrediction {
  dsp::ComplexSpectrogram left;   // full-bin
  dsp::ComplexSpectrogram right;
};

// Maps mono windows to left/right spectrograms.
class Predictor {
 public:
  virtual ~Predictor() = default;
  // Called before each clip; reference is the ground truth when available.
  virtual void begin_clip(const dsp::BinauralClip* reference) { (void)reference; }
  virtual std::vector<WindowPrediction> predict(std::span<const WindowInput> windows) = 0;
};

// Uses M_l, M_r (apnet_channels) or S_m +/- M_D * S_m (backbone_difference).
class ModelPredictor final : public Predictor {
 public:
  ModelPredictor(model::BinauralNet net, OutputSource source,
                 torch::Device device = torch::kCPU);
  std::vector<WindowPrediction> predict(std::span<const WindowInput> windows) override;

 private:
  model::BinauralNet net_;
  OutputSource source_;
  torch::Device device_;
};

// Emits the masks S_l / S_m and S_r / S_m of the reference clip.
class GroundTruthMaskStub final : public Predictor {
 public:
  explicit GroundTruthMaskStub(const dsp::AudioConfig& audio) : audio_(audio) {}
  void begin_clip(const dsp::BinauralClip* reference) override;
  std::vector<WindowPrediction> predict(std::span<const WindowInput> windows) override;

 private:
  dsp::AudioConfig audio_;
  const dsp::BinauralClip* reference_ = nullptr;
};

// Zero difference mask: both channels copy the mono input.
class MonoCopyStub final : public Predictor {
 public:
  std::vector<WindowPrediction> predict(std::span<const WindowInput> windows) override;
};

}  // namespace m2b::infer
