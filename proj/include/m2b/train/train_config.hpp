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

#include <cstdint>
#include <string>

#include "m2b/config/json_reader.hpp"

namespace m2b::train {

// Joint: all tasks every step. TwoStage: generation tasks for the first half
// of the epochs, then the classification task with the visual net frozen.
enum class Schedule { Joint, TwoStage };

// Which binaural pair the flip discriminator sees: the flipped ground truth
// or the flipped generated channels.
enum class ClassifierInput { GroundTruth, Generated };

std::string to_string(Schedule s);
Schedule schedule_from_string(const std::string& s);
std::string to_string(ClassifierInput c);
ClassifierInput classifier_input_from_string(const std::string& s);

struct TrainConfig {
  int batch_size = 16;
  int epochs = 1000;
  double lr_slow = 1e-4;  // visual net, attention nets, classifier
  double lr_fast = 1e-3;  // backbone, APNet, binaural encoder
  std::uint64_t seed = 0;
  int checkpoint_every = 10;
  std::string device = "cpu";
  int steps_per_epoch = 0;  // 0: one pass over the training clips
  int validate_every = 1;
  Schedule schedule = Schedule::Joint;
  ClassifierInput classifier_input = ClassifierInput::GroundTruth;
  int threads = 1;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

config::Json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const config::Json& j, const std::string& prefix = "train");

}  // namespace m2b::train
