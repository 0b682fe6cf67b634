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
#include <span>
#include <string>
#include <vector>

#include "m2b/data/clip_record.hpp"
#include "m2b/infer/evaluate.hpp"
#include "m2b/train/run_config.hpp"

namespace m2b::train {

struct AblationRow {
  std::string name;
  std::string description;
  losses::LossWeights weights;
  bool use_attention = true;
  Schedule schedule = Schedule::Joint;
  ClassifierInput classifier_input = ClassifierInput::GroundTruth;
  infer::OutputSource output_source = infer::OutputSource::ApnetChannels;
};

// The seven comparison rows, derived from the configured full weights.
std::vector<AblationRow> ablation_rows(const losses::LossWeights& full);

// root with the row's weights, attention flag, schedule and output source.
RunConfig row_config(const RunConfig& root, const AblationRow& row);

struct AblationResult {
  AblationRow row;
  infer::MetricsReport report;  // full-clip test metrics plus flip accuracy
  std::filesystem::path run_dir;
};

// Trains and evaluates each selected row (all when names is empty) on the
// same splits with the same seed. Writes <out_dir>/<row>/ runs and
// <out_dir>/ablation.{csv,json} after every row, so a failing row leaves the
// completed ones on disk before the error propagates.
std::vector<AblationResult> ablation_suite(const RunConfig& root, const data::DatasetSplits& splits,
                                           std::span<const std::string> names,
                                           const std::filesystem::path& out_dir);

void write_ablation_table(const std::filesystem::path& out_dir,
                          std::span<const AblationResult> results);

}  // namespace m2b::train
