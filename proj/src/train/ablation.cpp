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

#include "m2b/train/ablation.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "json.hpp"
#include "m2b/data/clip_store.hpp"
#include "m2b/error.hpp"
#include "m2b/infer/predictor.hpp"
#include "m2b/log.hpp"
#include "m2b/model/checkpoint.hpp"
#include "m2b/train/trainer.hpp"

namespace m2b::train {

namespace fs = std::filesystem;

std::vector<AblationRow> ablation_rows(const losses::LossWeights& full) {
  const double l1 = full.difference, l2 = full.channels, l3 = full.classification;
  std::vector<AblationRow> rows(7);
  rows[0] = {"backbone_only", "backbone with the difference loss only", {l1, 0.0, 0.0}};
  rows[0].output_source = infer::OutputSource::BackboneDifference;
  rows[1] = {"apnet", "backbone and APNet, generation losses only", {l1, l2, 0.0}};
  rows[2] = {"two_stage", "generation first, then classification", full};
  rows[2].schedule = Schedule::TwoStage;
  rows[3] = {"classify_generated", "classifier sees generated channels", full};
  rows[3].classifier_input = ClassifierInput::Generated;
  rows[4] = {"multitask_unweighted_no_attention", "all losses weight 1, no attention", {1.0, 1.0, 1.0}};
  rows[4].use_attention = false;
  rows[5] = {"multitask_weighted_no_attention", "calibrated weights, no attention", {l1, l2, l3}};
  rows[5].use_attention = false;
  rows[6] = {"full", "calibrated weights with attention", full};
  return rows;
}

RunConfig row_config(const RunConfig& root, const AblationRow& row) {
  RunConfig c = root;
  c.loss_weights = row.weights;
  c.net.use_attention = row.use_attention;
  c.train.schedule = row.schedule;
  c.train.classifier_input = row.classifier_input;
  c.inference.output_source = row.output_source;
  c.validate();
  return c;
}

void write_ablation_table(const fs::path& out_dir, std::span<const AblationResult> results) {
  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "ablation.csv");
  csv << std::setprecision(10) << "row,stft_distance,env_distance,accuracy,clips\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    csv << r.row.name << ',' << r.report.mean_stft_distance << ',' << r.report.mean_env_distance << ','
        << (r.report.accuracy ? std::to_string(*r.report.accuracy) : "") << ',' << r.report.per_clip.size()
        << '\n';
    rows.push_back({{"row", r.row.name},
                    {"description", r.row.description},
                    {"stft_distance", r.report.mean_stft_distance},
                    {"env_distance", r.report.mean_env_distance},
                    {"accuracy", r.report.accuracy ? nlohmann::ordered_json(*r.report.accuracy) : nullptr},
                    {"run_dir", r.run_dir.string()}});
  }
  std::ofstream(out_dir / "ablation.json") << nlohmann::ordered_json{{"rows", rows}}.dump(2) << '\n';
}

std::vector<AblationResult> ablation_suite(const RunConfig& root, const data::DatasetSplits& splits,
                                           std::span<const std::string> names, const fs::path& out_dir) {
  root.validate();
  if (out_dir.empty()) throw ConfigError("ablation needs an output directory", "out_dir");
  auto rows = ablation_rows(root.loss_weights);
  if (!names.empty()) {
    std::vector<AblationRow> picked;
    for (const auto& n : names) {
      const auto it = std::ranges::find(rows, n, &AblationRow::name);
      if (it == rows.end()) throw ConfigError("unknown ablation row '" + n + "'", "rows");
      picked.push_back(*it);
    }
    rows = std::move(picked);
  }
  if (splits.train.empty() || splits.test.empty())
    throw DatasetError("ablation needs non-empty train and test splits");

  data::ClipStore train(splits.train, root.audio, root.frames);
  data::ClipStore val(splits.val, root.audio, root.frames);
  data::ClipStore test(splits.test, root.audio, root.frames);
  const auto device = parse_device(root.train.device);

  std::vector<AblationResult> results;
  for (const auto& row : rows) {
    try {
      const auto cfg = row_config(root, row);
      const auto dir = out_dir / row.name;
      save_run_config(dir / "effective_config.json", cfg);
      log::info("ablation row " + row.name);
      auto net = model::make_model(cfg.net, cfg.train.seed);
      Trainer trainer(net, cfg.train, cfg.loss_weights, cfg.audio, cfg.inference.output_source);
      const auto fit = trainer.fit(train, val.size() ? &val : nullptr, dir);
      auto best = net;
      if (!fit.best_checkpoint.empty()) best = model::load_checkpoint(fit.best_checkpoint).model;
      best->to(device);
      infer::ModelPredictor predictor(best, cfg.inference.output_source, device);
      AblationResult r{row, infer::evaluate(predictor, test, cfg.inference), dir};
      r.report.accuracy = infer::flip_accuracy(*best, test, device);
      infer::write_report_json(dir / "report.json", r.report);
      infer::write_report_csv(dir / "report.csv", r.report);
      results.push_back(std::move(r));
      write_ablation_table(out_dir, results);
    } catch (const std::exception& e) {
      write_ablation_table(out_dir, results);
      log::warn("ablation row " + row.name + " failed; " + std::to_string(results.size()) +
                " completed rows saved in " + out_dir.string());
      throw;
    }
  }
  return results;
}

}  // namespace m2b::train
