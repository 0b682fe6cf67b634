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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "m2b/config/json_reader.hpp"

namespace m2b::losses {

struct LossWeights {
  double difference = 44.0;      // lambda_1
  double channels = 44.0;        // lambda_2
  double classification = 1.0;   // lambda_3

  void validate() const;
  friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

config::Json to_json(const LossWeights& w);
LossWeights loss_weights_from_json(const config::Json& j, const std::string& prefix = "loss_weights");

// Squared L2 over (real, imag, F, T), averaged over the batch. [B,2,F,T] inputs.
torch::Tensor loss_difference(const torch::Tensor& pred, const torch::Tensor& gt);

torch::Tensor loss_channels(const torch::Tensor& pred_left, const torch::Tensor& pred_right,
                            const torch::Tensor& gt_left, const torch::Tensor& gt_right);

inline constexpr double kProbabilityClamp = 1e-7;

// Binary cross-entropy, batch mean. Throws std::invalid_argument unless every
// label is 0 or 1.
torch::Tensor loss_classification(const torch::Tensor& prob, const torch::Tensor& label);

// Weighted sum; undefined tensors count as zero.
torch::Tensor loss_total(const torch::Tensor& l_d, const torch::Tensor& l_c,
                         const torch::Tensor& l_cls, const LossWeights& w);
double loss_total(double l_d, double l_c, double l_cls, const LossWeights& w);

struct CalibrationTask {
  std::string name;
  std::function<torch::Tensor()> loss;
};

struct CalibrationOptions {
  int steps = 200;
  double tail_fraction = 0.2;  // final share of steps whose gradients are averaged
  double learning_rate = 1e-3;
};

struct CalibrationResult {
  std::vector<double> mean_gradients;  // per task, mean |grad| on the shared tensors
  std::vector<double> weights;         // equalize weight * gradient; last task = 1
};

// Trains each task alone from the same starting point with Adam over
// trainable, recording the mean absolute gradient of shared over the tail.
// Restores trainable afterwards. Throws TrainingError naming a task whose
// gradients vanish.
CalibrationResult calibrate_tasks(std::span<const CalibrationTask> tasks,
                                  const std::vector<torch::Tensor>& trainable,
                                  const std::vector<torch::Tensor>& shared,
                                  const CalibrationOptions& options);

}  // namespace m2b::losses
