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

#include "m2b/losses/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "m2b/error.hpp"

namespace m2b::losses {
namespace {

void require_same(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.sizes() != b.sizes())
    throw ShapeError(std::string(what) + ": shapes " + c10::str(a.sizes()) + " and " +
                     c10::str(b.sizes()));
  if (a.dim() < 1) throw ShapeError(std::string(what) + ": expected a batch dimension");
}

}  // namespace

void LossWeights::validate() const {
  if (!(difference >= 0.0) || !std::isfinite(difference)) throw ConfigError("must be >= 0", "difference");
  if (!(channels >= 0.0) || !std::isfinite(channels)) throw ConfigError("must be >= 0", "channels");
  if (!(classification >= 0.0) || !std::isfinite(classification))
    throw ConfigError("must be >= 0", "classification");
}

config::Json to_json(const LossWeights& w) {
  return config::Json{{"difference", w.difference},
                      {"channels", w.channels},
                      {"classification", w.classification}};
}

LossWeights loss_weights_from_json(const config::Json& j, const std::string& prefix) {
  LossWeights w;
  config::JsonReader r(j, prefix);
  r.get("difference", w.difference).get("channels", w.channels).get("classification", w.classification);
  r.finish();
  config::validate_in(prefix, [&] { w.validate(); });
  return w;
}

torch::Tensor loss_difference(const torch::Tensor& pred, const torch::Tensor& gt) {
  require_same(pred, gt, "loss_difference");
  const auto d = pred - gt;
  return d.square().reshape({d.size(0), -1}).sum(1).mean();
}

torch::Tensor loss_channels(const torch::Tensor& pred_left, const torch::Tensor& pred_right,
                            const torch::Tensor& gt_left, const torch::Tensor& gt_right) {
  return loss_difference(pred_left, gt_left) + loss_difference(pred_right, gt_right);
}

torch::Tensor loss_classification(const torch::Tensor& prob, const torch::Tensor& label) {
  require_same(prob, label, "loss_classification");
  if (!((label == 0) | (label == 1)).all().item<bool>())
    throw std::invalid_argument("loss_classification: labels must be 0 or 1");
  const auto p = prob.clamp(kProbabilityClamp, 1.0 - kProbabilityClamp);
  return -(label * p.log() + (1 - label) * (1 - p).log()).mean();
}

torch::Tensor loss_total(const torch::Tensor& l_d, const torch::Tensor& l_c,
                         const torch::Tensor& l_cls, const LossWeights& w) {
  w.validate();
  torch::Tensor total;
  const auto add = [&](const torch::Tensor& l, double weight) {
    if (!l.defined()) return;
    auto term = l * weight;
    total = total.defined() ? total + term : term;
  };
  add(l_d, w.difference);
  add(l_c, w.channels);
  add(l_cls, w.classification);
  return total.defined() ? total : torch::zeros({});
}

double loss_total(double l_d, double l_c, double l_cls, const LossWeights& w) {
  w.validate();
  return w.difference * l_d + w.channels * l_c + w.classification * l_cls;
}

CalibrationResult calibrate_tasks(std::span<const CalibrationTask> tasks,
                                  const std::vector<torch::Tensor>& trainable,
                                  const std::vector<torch::Tensor>& shared,
                                  const CalibrationOptions& options) {
  if (tasks.empty()) throw ConfigError("no tasks", "calibration");
  if (options.steps < 1) throw ConfigError("must be >= 1", "steps");
  if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0))
    throw ConfigError("must lie in (0, 1]", "tail_fraction");
  if (shared.empty()) throw ConfigError("no shared tensors", "calibration");

  std::vector<torch::Tensor> initial;
  {
    torch::NoGradGuard guard;
    for (const auto& p : trainable) initial.push_back(p.detach().clone());
  }
  const auto restore = [&] {
    torch::NoGradGuard guard;
    for (std::size_t i = 0; i < trainable.size(); ++i) trainable[i].copy_(initial[i]);
  };
  const int tail = std::max(1, static_cast<int>(std::lround(options.steps * options.tail_fraction)));

  CalibrationResult out;
  for (const auto& task : tasks) {
    restore();
    torch::optim::Adam opt(trainable, torch::optim::AdamOptions(options.learning_rate));
    double acc = 0.0;
    for (int step = 0; step < options.steps; ++step) {
      opt.zero_grad();
      auto loss = task.loss();
      if (!loss.requires_grad())
        throw TrainingError("calibration task '" + task.name + "' has no gradient path");
      loss.backward();
      if (step >= options.steps - tail) {
        double sum = 0.0;
        int64_t count = 0;
        for (const auto& s : shared) {
          count += s.numel();
          if (s.grad().defined()) sum += s.grad().abs().sum().item<double>();
        }
        acc += sum / static_cast<double>(std::max<int64_t>(count, 1));
      }
      opt.step();
    }
    const double mean = acc / tail;
    if (!(mean > 1e-20) || !std::isfinite(mean))
      throw TrainingError("calibration task '" + task.name +
                          "' produced zero gradients on the shared parameters");
    out.mean_gradients.push_back(mean);
  }
  restore();
  for (double g : out.mean_gradients) out.weights.push_back(out.mean_gradients.back() / g);
  return out;
}

}  // namespace m2b::losses
