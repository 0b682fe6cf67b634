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

#include "support/catch_torch.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <string>

#include "m2b/data/clip_store.hpp"
#include "m2b/data/synth.hpp"
#include "m2b/error.hpp"
#include "m2b/model/checkpoint.hpp"
#include "m2b/model/model.hpp"
#include "m2b/train/ablation.hpp"
#include "m2b/train/run_config.hpp"
#include "m2b/train/trainer.hpp"
#include "support/temp_dir.hpp"
#include "support/tiny_config.hpp"
#include "support/tiny_data.hpp"

using namespace m2b;
using namespace m2b::train;
using m2b::testing::TempDir;
namespace fs = std::filesystem;

namespace {

TrainConfig tiny_train() {
  TrainConfig t;
  t.batch_size = 4;
  t.epochs = 2;
  t.steps_per_epoch = 2;
  t.checkpoint_every = 1;
  t.seed = 3;
  return t;
}

std::vector<torch::Tensor> snapshot(const std::vector<torch::Tensor>& params) {
  std::vector<torch::Tensor> out;
  for (const auto& p : params) out.push_back(p.detach().clone());
  return out;
}

bool unchanged(const std::vector<torch::Tensor>& params, const std::vector<torch::Tensor>& before) {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!torch::equal(params[i].detach(), before[i])) return false;
  return true;
}

// Synthetic clips with fixed azimuths, all in one list.
std::vector<data::ClipRecord> fixed_scenes(const fs::path& dir, std::vector<double> azimuths,
                                           std::uint64_t seed) {
  std::vector<data::ClipRecord> out;
  for (std::size_t i = 0; i < azimuths.size(); ++i) {
    data::SynthSceneParams p;
    p.azimuth = azimuths[i];
    p.duration = 0.5;
    p.image_height = 32;
    p.image_width = 64;
    p.blob_radius = 5;
    p.source = i % 2 ? data::SourceKind::ToneStack : data::SourceKind::NoiseBand;
    auto rng = data::make_rng(seed, "train-test", i);
    out.push_back(data::synth_scene(p, "fixed_" + std::to_string(i), dir, 8000, rng));
  }
  return out;
}

RunConfig tiny_run() {
  RunConfig c;
  c.audio = m2b::testing::tiny_audio_config();
  c.frames = m2b::testing::tiny_frames();
  c.net = m2b::testing::tiny_net_config();
  c.train = tiny_train();
  c.train.steps_per_epoch = 1;
  c.train.batch_size = 2;
  c.inference = m2b::testing::tiny_inference();
  return c;
}

int csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) rows += !line.empty();
  return rows;
}

struct Fixture {
  TempDir tmp;
  data::DatasetSplits splits;
  std::unique_ptr<data::ClipStore> train, val;
  explicit Fixture(const std::string& name, std::size_t count = 10) : tmp(name) {
    auto o = m2b::testing::tiny_synth(count, 17);
    o.train_fraction = 0.6;
    o.val_fraction = 0.4;
    splits = data::synth_dataset(o, tmp.path);
    const auto a = m2b::testing::tiny_audio_config();
    const auto f = m2b::testing::tiny_frames();
    train = std::make_unique<data::ClipStore>(splits.train, a, f);
    val = std::make_unique<data::ClipStore>(splits.val, a, f);
  }
};

}  // namespace

TEST_CASE("train config validation", "[trainer][config]") {
  TrainConfig canonical;
  CHECK(canonical.batch_size == 16);
  CHECK(canonical.epochs == 1000);
  CHECK(canonical.lr_slow == 1e-4);
  CHECK(canonical.lr_fast == 1e-3);
  CHECK_NOTHROW(canonical.validate());
  CHECK(train_config_from_json(to_json(canonical)) == canonical);

  auto bad = canonical;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = canonical;
  bad.lr_fast = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = canonical;
  bad.lr_slow = -1e-4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = canonical;
  bad.device = "tpu";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(schedule_from_string("two_stage") == Schedule::TwoStage);
  CHECK_THROWS_AS(classifier_input_from_string("both"), ConfigError);
}

TEST_CASE("run config blocks, overrides and cross-checks", "[trainer][config]") {
  RunConfig c;
  c.net.frames = 64;
  c.net.freq_bins = 256;
  c.net.frame_height = 224;
  c.net.frame_width = 448;
  CHECK_NOTHROW(c.validate());
  CHECK(run_config_from_json(to_json(c)) == c);

  const std::vector<std::string> ok{"train.batch_size=8", "train.device=cpu", "data.root=/tmp/x.json",
                                    "loss_weights.difference=2.5"};
  const auto o = apply_overrides(c, ok);
  CHECK(o.train.batch_size == 8);
  CHECK(o.data.root == fs::path("/tmp/x.json"));
  CHECK(o.loss_weights.difference == 2.5);

  const auto key_of = [&](std::vector<std::string> ov) {
    try {
      apply_overrides(c, ov);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<accepted>");
  };
  CHECK(key_of({"train.batch_size=0"}) == "train.batch_size");
  CHECK(key_of({"train.bogus=1"}) == "train.bogus");
  CHECK(key_of({"nonsense"}) == "nonsense");
  CHECK(key_of({"net.unet_depth=\"deep\""}) == "net.unet_depth");
  CHECK(key_of({"audio.window_size=256"}) == "net.freq_bins");

  auto j = to_json(c);
  j["train"]["extra"] = 1;
  try {
    run_config_from_json(j);
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "train.extra");
  }

  TempDir tmp("run_config");
  save_run_config(tmp.path / "c.json", o);
  CHECK(load_run_config(tmp.path / "c.json") == o);
  CHECK_THROWS_AS(load_splits(DataConfig{}), DatasetError);
  DataConfig missing;
  missing.root = tmp.path / "nothing.json";
  CHECK_THROWS_AS(load_splits(missing), DatasetError);
}

TEST_CASE("optimizer groups partition the parameters", "[trainer][groups]") {
  auto net = model::make_model(m2b::testing::tiny_net_config(), 1);
  Trainer t(net, tiny_train(), {}, m2b::testing::tiny_audio_config());
  auto& groups = t.optimizer().param_groups();
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].params().size() + groups[1].params().size() == net->parameters().size());
  CHECK(groups[0].options().get_lr() == 1e-4);
  CHECK(groups[1].options().get_lr() == 1e-3);
  std::set<const void*> seen;
  for (auto& g : groups)
    for (auto& p : g.params()) CHECK(seen.insert(p.unsafeGetTensorImpl()).second);
}

TEST_CASE("shape mismatch rejected before the first step", "[trainer][errors]") {
  auto net = model::make_model(m2b::testing::tiny_net_config(), 1);
  auto audio = m2b::testing::tiny_audio_config();
  audio.window_size = 256;
  CHECK_THROWS_AS(Trainer(net, tiny_train(), {}, audio), ShapeError);
  audio = m2b::testing::tiny_audio_config();
  audio.hop_length = 40;
  CHECK_THROWS_AS(Trainer(net, tiny_train(), {}, audio), ShapeError);
}

TEST_CASE("training steps", "[trainer][step]") {
  Fixture fx("train_step", 6);
  auto net = model::make_model(m2b::testing::tiny_net_config(), 2);
  Trainer t(net, tiny_train(), {}, m2b::testing::tiny_audio_config());
  const auto samples = t.draw(*fx.train, 1, 0);
  REQUIRE(samples.size() == 4);
  const auto batch = model::make_batch(samples);

  SECTION("all-zero weights change no parameters") {
    const auto before = snapshot(net->parameters());
    const auto l = t.step(batch, {0.0, 0.0, 0.0});
    CHECK(l.total == 0.0);
    CHECK(unchanged(net->parameters(), before));
  }
  SECTION("a weighted step moves both groups") {
    const auto slow = snapshot(net->slow_parameters()), fast = snapshot(net->fast_parameters());
    const auto l = t.step(batch, {44.0, 44.0, 1.0});
    CHECK(l.total == Catch::Approx(44 * l.l_d + 44 * l.l_c + l.l_cls).epsilon(1e-6));
    CHECK(l.l_d > 0.0);
    CHECK(l.l_c > 0.0);
    CHECK(l.l_cls > 0.0);
    CHECK_FALSE(unchanged(net->slow_parameters(), slow));
    CHECK_FALSE(unchanged(net->fast_parameters(), fast));
  }
  SECTION("classification alone leaves the generator untouched") {
    const auto bb = snapshot(net->backbone()->parameters());
    t.step(batch, {0.0, 0.0, 1.0});
    CHECK(unchanged(net->backbone()->parameters(), bb));
  }
  SECTION("non-finite loss aborts") {
    auto poisoned = batch;
    poisoned.mono = poisoned.mono.clone();
    poisoned.mono.index_put_({0, 0, 0, 0}, std::nan(""));
    CHECK_THROWS_AS(t.step(poisoned, {1.0, 1.0, 1.0}), TrainingError);
  }
}

TEST_CASE("classifying generated channels trains the generator", "[trainer][step]") {
  Fixture fx("train_generated", 6);
  auto net = model::make_model(m2b::testing::tiny_net_config(), 2);
  auto cfg = tiny_train();
  cfg.classifier_input = ClassifierInput::Generated;
  Trainer t(net, cfg, {}, m2b::testing::tiny_audio_config());
  const auto batch = model::make_batch(t.draw(*fx.train, 1, 0));
  const auto ap = snapshot(net->apnet()->parameters());
  const auto l = t.step(batch, {0.0, 0.0, 1.0});
  CHECK(l.l_cls > 0.0);
  CHECK_FALSE(unchanged(net->apnet()->parameters(), ap));
}

TEST_CASE("fixed seed gives an identical loss trace", "[trainer][determinism]") {
  Fixture fx("train_determinism", 6);
  const auto trace = [&] {
    auto net = model::make_model(m2b::testing::tiny_net_config(), 4);
    Trainer t(net, tiny_train(), {}, m2b::testing::tiny_audio_config());
    std::vector<double> out;
    for (int s = 0; s < 3; ++s) out.push_back(t.step(model::make_batch(t.draw(*fx.train, 1, s)), {}).total);
    return out;
  };
  const auto a = trace(), b = trace();
  CHECK(a == b);
}

TEST_CASE("fit writes history and checkpoints that reproduce metrics", "[trainer][fit]") {
  Fixture fx("train_fit");
  const auto out = fx.tmp.path / "run";
  auto net = model::make_model(m2b::testing::tiny_net_config(), 5);
  Trainer t(net, tiny_train(), {}, m2b::testing::tiny_audio_config());
  int callbacks = 0;
  t.on_epoch = [&](const EpochRecord& r) { callbacks += r.val.has_value(); };
  const auto result = t.fit(*fx.train, fx.val.get(), out);
  CHECK(callbacks == 2);
  REQUIRE(result.history.size() == 2);
  CHECK(fs::exists(out / "checkpoints" / "best.pt"));
  CHECK(fs::exists(out / "checkpoints" / "last.pt"));

  std::ifstream csv(out / "history.csv");
  std::string header, line;
  std::getline(csv, header);
  CHECK(header == "epoch,l_d,l_c,l_cls,total,val_stft,val_env,val_accuracy");
  int rows = 0;
  while (std::getline(csv, line)) rows += !line.empty();
  CHECK(rows == 2);

  double best = 1e300;
  for (const auto& r : result.history) best = std::min(best, r.val->mean_stft_distance);
  CHECK(result.best_val_stft == best);

  const auto last = model::load_checkpoint(out / "checkpoints" / "last.pt");
  const auto a = validate(net, *fx.val), b = validate(last.model, *fx.val);
  CHECK(a.mean_stft_distance == b.mean_stft_distance);
  CHECK(a.mean_env_distance == b.mean_env_distance);
  CHECK(a.accuracy == b.accuracy);
  CHECK(last.meta.at("epoch").get<int>() == 2);
}

TEST_CASE("two-stage schedule freezes the visual net in stage two", "[trainer][schedule]") {
  Fixture fx("train_two_stage", 6);
  auto net = model::make_model(m2b::testing::tiny_net_config(), 6);
  auto cfg = tiny_train();
  cfg.schedule = Schedule::TwoStage;
  Trainer t(net, cfg, {}, m2b::testing::tiny_audio_config());
  std::vector<torch::Tensor> after_first;
  std::vector<StepLosses> stages;
  t.on_epoch = [&](const EpochRecord& r) {
    stages.push_back(r.train);
    if (r.epoch == 1) after_first = snapshot(net->visual()->parameters());
  };
  t.fit(*fx.train, nullptr, {});
  REQUIRE(stages.size() == 2);
  CHECK(stages[0].l_cls == 0.0);
  CHECK(stages[0].l_d > 0.0);
  CHECK(stages[1].l_d == 0.0);
  CHECK(stages[1].l_cls > 0.0);
  CHECK(unchanged(net->visual()->parameters(), after_first));
  for (const auto& p : net->visual()->parameters()) CHECK(p.requires_grad());
}

TEST_CASE("validation reports", "[trainer][validate]") {
  TempDir tmp("train_validate");
  const auto a = m2b::testing::tiny_audio_config();
  const auto f = m2b::testing::tiny_frames();

  SECTION("untrained classifier is at chance on balanced flips") {
    data::ClipStore store(fixed_scenes(tmp.path, {-1.2, -0.6, 0.3, 0.9, 1.4, -0.2}, 1), a, f);
    auto net = model::make_model(m2b::testing::tiny_net_config(), 7);
    const auto r = validate(net, store);
    REQUIRE(r.accuracy);
    CHECK(*r.accuracy == Catch::Approx(0.5).margin(0.1));
    CHECK(r.per_clip.size() == 6);
    for (const auto& c : r.per_clip) {
      CHECK(std::isfinite(c.stft_distance));
      CHECK(std::isfinite(c.env_distance));
      CHECK(c.stft_distance >= 0.0);
      CHECK(c.env_distance >= 0.0);
    }
    CHECK(r.mean_stft_distance >= 0.0);
  }
  SECTION("mono copy on symmetric scenes scores zero") {
    data::ClipStore store(fixed_scenes(tmp.path, {0.0, 0.0, 0.0}, 2), a, f);
    const auto cfg = m2b::testing::tiny_net_config();
    auto net = model::make_model(cfg, 7);
    {
      torch::NoGradGuard g;
      const auto last = "decoder." + std::to_string(cfg.unet_depth - 1) + ".";
      for (auto& p : net->backbone()->named_parameters())
        if (p.key().starts_with(last)) p.value().zero_();
    }
    const auto r = validate(net, store, {infer::OutputSource::BackboneDifference, torch::kCPU, false});
    CHECK(r.mean_stft_distance < 1e-9);
    CHECK(r.mean_env_distance < 1e-9);
    CHECK_FALSE(r.accuracy);
  }
  SECTION("empty set is rejected") {
    data::ClipStore empty({}, a, f);
    auto net = model::make_model(m2b::testing::tiny_net_config(), 7);
    CHECK_THROWS_AS(validate(net, empty), DatasetError);
  }
}

TEST_CASE("weight calibration on the model", "[trainer][calibration]") {
  Fixture fx("train_calibration", 6);
  auto net = model::make_model(m2b::testing::tiny_net_config(), 8);
  const auto before = snapshot(net->parameters());
  CalibrationSettings s;
  s.options.steps = 10;
  s.batch_size = 2;
  s.batches = 2;
  losses::CalibrationResult detail;
  const auto w = calibrate_weights(net, *fx.train, s, &detail);
  REQUIRE(detail.mean_gradients.size() == 2);
  CHECK(w.difference > 0.0);
  CHECK(w.difference == w.channels);
  CHECK(w.classification == 1.0);
  CHECK(w.difference == Catch::Approx(detail.mean_gradients[1] / detail.mean_gradients[0]));
  CHECK(unchanged(net->parameters(), before));
}

TEST_CASE("one-sample overfit", "[trainer][overfit]") {
  TempDir tmp("train_overfit");
  data::ClipStore store(fixed_scenes(tmp.path, {-0.8}, 4), m2b::testing::tiny_audio_config(),
                        m2b::testing::tiny_frames());
  const auto sample = store.sample_at(0, store.center_start(0), false);
  const auto batch = model::make_batch(std::span(&sample, 1));
  auto nc = m2b::testing::tiny_net_config();
  nc.base_channels = 16;
  nc.apnet_channels = 16;
  auto net = model::make_model(nc, 9);
  auto cfg = tiny_train();
  cfg.batch_size = 1;
  Trainer t(net, cfg, {}, m2b::testing::tiny_audio_config());
  std::vector<double> trace;
  for (int s = 0; s < 500; ++s) trace.push_back(t.step(batch, {}).total);
  CHECK(trace.back() < 0.01 * trace.front());
  std::vector<double> ma;
  for (std::size_t i = 20; i <= trace.size(); ++i)
    ma.push_back(std::accumulate(trace.begin() + i - 20, trace.begin() + i, 0.0) / 20);
  std::size_t rises = 0;
  for (std::size_t i = 1; i < ma.size(); ++i) rises += ma[i] > ma[i - 1];
  CHECK(rises == 0);
}

TEST_CASE("ablation rows", "[ablation]") {
  const losses::LossWeights full{44.0, 44.0, 1.0};
  const auto rows = ablation_rows(full);
  REQUIRE(rows.size() == 7);
  std::set<std::string> names;
  for (const auto& r : rows) names.insert(r.name);
  CHECK(names.size() == 7);
  CHECK(rows[0].weights == losses::LossWeights{44.0, 0.0, 0.0});
  CHECK(rows[0].output_source == infer::OutputSource::BackboneDifference);
  CHECK(rows[1].weights == losses::LossWeights{44.0, 44.0, 0.0});
  CHECK(rows[2].schedule == Schedule::TwoStage);
  CHECK(rows[3].classifier_input == ClassifierInput::Generated);
  CHECK(rows[4].weights == losses::LossWeights{1.0, 1.0, 1.0});
  CHECK_FALSE(rows[4].use_attention);
  CHECK(rows[5].weights == full);
  CHECK_FALSE(rows[5].use_attention);
  CHECK(rows[6].weights == full);
  CHECK(rows[6].use_attention);
  const auto c = row_config(tiny_run(), rows[4]);
  CHECK_FALSE(c.net.use_attention);
  CHECK(c.loss_weights == rows[4].weights);
}

TEST_CASE("ablation suite runs every row on shared data", "[ablation][suite]") {
  Fixture fx("ablation_suite", 12);
  auto splits = fx.splits;
  splits.test = splits.val;
  const auto out = fx.tmp.path / "ablate";
  const auto results = ablation_suite(tiny_run(), splits, {}, out);
  REQUIRE(results.size() == 7);
  for (const auto& r : results) {
    CHECK(r.report.per_clip.size() == splits.test.size());
    CHECK(std::isfinite(r.report.mean_stft_distance));
    CHECK(r.report.accuracy.has_value());
    CHECK(fs::exists(r.run_dir / "report.json"));
    CHECK(load_run_config(r.run_dir / "effective_config.json").train.seed == tiny_run().train.seed);
  }
  CHECK(csv_rows(out / "ablation.csv") == 7);

  SECTION("a failing row keeps the completed ones") {
    auto root = tiny_run();
    root.train.epochs = 1;
    const std::vector<std::string> names{"full", "two_stage"};
    const auto partial = fx.tmp.path / "partial";
    CHECK_THROWS_AS(ablation_suite(root, splits, names, partial), ConfigError);
    CHECK(csv_rows(partial / "ablation.csv") == 1);
    CHECK(fs::exists(partial / "full" / "report.json"));
  }
  SECTION("unknown row names are rejected") {
    const std::vector<std::string> names{"nope"};
    CHECK_THROWS_AS(ablation_suite(tiny_run(), splits, names, fx.tmp.path / "x"), ConfigError);
  }
}
