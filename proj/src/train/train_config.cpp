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

#include "m2b/train/train_config.hpp"

#include <cmath>

#include "m2b/error.hpp"

namespace m2b::train {

std::string to_string(Schedule s) { return s == Schedule::Joint ? "joint" : "two_stage"; }

Schedule schedule_from_string(const std::string& s) {
  if (s == "joint") return Schedule::Joint;
  if (s == "two_stage") return Schedule::TwoStage;
  throw ConfigError("unknown schedule '" + s + "'", "schedule");
}

std::string to_string(ClassifierInput c) {
  return c == ClassifierInput::GroundTruth ? "ground_truth" : "generated";
}

ClassifierInput classifier_input_from_string(const std::string& s) {
  if (s == "ground_truth") return ClassifierInput::GroundTruth;
  if (s == "generated") return ClassifierInput::Generated;
  throw ConfigError("unknown classifier input '" + s + "'", "classifier_input");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("must be >= 1", "batch_size");
  if (epochs < 1) throw ConfigError("must be >= 1", "epochs");
  if (!(lr_slow > 0.0) || !std::isfinite(lr_slow)) throw ConfigError("must be > 0", "lr_slow");
  if (!(lr_fast > 0.0) || !std::isfinite(lr_fast)) throw ConfigError("must be > 0", "lr_fast");
  if (checkpoint_every < 1) throw ConfigError("must be >= 1", "checkpoint_every");
  if (steps_per_epoch < 0) throw ConfigError("must be >= 0", "steps_per_epoch");
  if (validate_every < 1) throw ConfigError("must be >= 1", "validate_every");
  if (threads < 1) throw ConfigError("must be >= 1", "threads");
  if (device != "cpu" && device.rfind("cuda", 0) != 0)
    throw ConfigError("must be 'cpu' or 'cuda[:N]'", "device");
  if (schedule == Schedule::TwoStage && epochs < 2)
    throw ConfigError("two_stage needs at least 2 epochs", "epochs");
}

config::Json to_json(const TrainConfig& c) {
  return config::Json{{"batch_size", c.batch_size},
                      {"epochs", c.epochs},
                      {"lr_slow", c.lr_slow},
                      {"lr_fast", c.lr_fast},
                      {"seed", c.seed},
                      {"checkpoint_every", c.checkpoint_every},
                      {"device", c.device},
                      {"steps_per_epoch", c.steps_per_epoch},
                      {"validate_every", c.validate_every},
                      {"schedule", to_string(c.schedule)},
                      {"classifier_input", to_string(c.classifier_input)},
                      {"threads", c.threads}};
}

TrainConfig train_config_from_json(const config::Json& j, const std::string& prefix) {
  TrainConfig c;
  config::JsonReader r(j, prefix);
  std::string schedule = to_string(c.schedule), input = to_string(c.classifier_input);
  r.get("batch_size", c.batch_size)
      .get("epochs", c.epochs)
      .get("lr_slow", c.lr_slow)
      .get("lr_fast", c.lr_fast)
      .get("seed", c.seed)
      .get("checkpoint_every", c.checkpoint_every)
      .get("device", c.device)
      .get("steps_per_epoch", c.steps_per_epoch)
      .get("validate_every", c.validate_every)
      .get("schedule", schedule)
      .get("classifier_input", input)
      .get("threads", c.threads);
  r.finish();
  config::validate_in(prefix, [&] {
    c.schedule = schedule_from_string(schedule);
    c.classifier_input = classifier_input_from_string(input);
    c.validate();
  });
  return c;
}

}  // namespace m2b::train
