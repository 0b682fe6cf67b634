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

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "m2b/data/clip_store.hpp"
#include "m2b/dsp/audio_config.hpp"
#include "m2b/infer/evaluate.hpp"
#include "m2b/losses/losses.hpp"
#include "m2b/model/model.hpp"
#include "m2b/model/tensor_io.hpp"
#include "m2b/train/train_config.hpp"

namespace m2b::train {

struct StepLosses {
  double l_d = 0.0;
  double l_c = 0.0;
  double l_cls = 0.0;
  double total = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  StepLosses train;  // means over the epoch's steps
  std::optional<infer::MetricsReport> val;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::filesystem::path best_checkpoint;
  std::filesystem::path last_checkpoint;
  double best_val_stft = std::numeric_limits<double>::infinity();
};

struct ValidationOptions {
  infer::OutputSource output_source = infer::OutputSource::ApnetChannels;
  torch::Device device = torch::kCPU;
  bool accuracy = true;
};

// Centered-segment metrics over a set without gradient updates.
infer::MetricsReport validate(model::BinauralNet net, const data::ClipStore& val,
                              const ValidationOptions& options = {});

torch::Device parse_device(const std::string& name);

class Trainer {
 public:
  Trainer(model::BinauralNet net, TrainConfig cfg, losses::LossWeights weights,
          dsp::AudioConfig audio,
          infer::OutputSource output_source = infer::OutputSource::ApnetChannels);

  // One optimizer update on batch with the given weights.
  StepLosses step(const model::Batch& batch, const losses::LossWeights& weights);

  // Trains for cfg.epochs. With a non-empty out_dir writes history.csv and
  // checkpoints/{best,last}.pt; best is chosen by validation STFT distance.
  TrainResult fit(const data::ClipStore& train, const data::ClipStore* val,
                  const std::filesystem::path& out_dir);

  // Samples for one step of an epoch, deterministic in (seed, epoch, step).
  std::vector<data::SceneSample> draw(const data::ClipStore& train, int epoch, int step) const;

  model::BinauralNet& net() { return net_; }
  torch::optim::Adam& optimizer() { return *optimizer_; }
  const TrainConfig& config() const noexcept { return cfg_; }
  int steps_per_epoch(std::size_t clips) const;

  // Called after each epoch of fit(), once its record is complete.
  std::function<void(const EpochRecord&)> on_epoch;

 private:
  losses::LossWeights stage_weights(int epoch) const;
  void set_visual_frozen(bool frozen);

  model::BinauralNet net_;
  TrainConfig cfg_;
  losses::LossWeights weights_;
  dsp::AudioConfig audio_;
  infer::OutputSource output_source_;
  torch::Device device_;
  std::unique_ptr<torch::optim::Adam> optimizer_;
};

struct CalibrationSettings {
  losses::CalibrationOptions options;
  int batch_size = 8;
  int batches = 4;  // distinct batches cycled during each task
  std::uint64_t seed = 0;
  torch::Device device = torch::kCPU;
};

// Gradient matching between generation (L_D + L_C) and classification on the
// shared visual parameters: lambda_1 = lambda_2 = g_cls / g_gen, lambda_3 = 1.
losses::LossWeights calibrate_weights(model::BinauralNet net, const data::ClipStore& data,
                                      const CalibrationSettings& settings,
                                      losses::CalibrationResult* detail = nullptr);

}  // namespace m2b::train
