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

#include "m2b/cli/cli.hpp"

#include <torch/torch.h>

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "m2b/data/clip_store.hpp"
#include "m2b/data/frames.hpp"
#include "m2b/data/synth.hpp"
#include "m2b/dsp/wav_io.hpp"
#include "m2b/error.hpp"
#include "m2b/infer/binauralize.hpp"
#include "m2b/infer/evaluate.hpp"
#include "m2b/infer/predictor.hpp"
#include "m2b/infer/saliency.hpp"
#include "m2b/log.hpp"
#include "m2b/model/checkpoint.hpp"
#include "m2b/train/ablation.hpp"
#include "m2b/train/run_config.hpp"
#include "m2b/train/trainer.hpp"

namespace m2b::cli {
namespace {

namespace fs = std::filesystem;
using config::Json;
using config::JsonReader;

// Options shared by every command that reads a run config.
struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::string> device;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c, bool needs_out_dir = true) {
  app->add_option("--config", c.config, "Run config JSON (defaults when omitted)");
  app->add_option("--seed", c.seed, "Root seed; overrides train.seed");
  auto* o = app->add_option("--out-dir", c.out_dir, "Output directory");
  if (needs_out_dir) o->required();
  app->add_option("--device", c.device, "cpu or cuda; overrides train.device");
  app->add_option("--set", c.sets, "Override a config field, block.key=value")->take_all();
}

train::RunConfig read_base(const Common& c) {
  return c.config.empty() ? train::run_config_from_json(Json::object()) : train::load_run_config(c.config);
}

std::vector<std::string> all_overrides(const Common& c) {
  auto sets = c.sets;
  if (c.seed) sets.push_back("train.seed=" + std::to_string(*c.seed));
  if (c.device) sets.push_back("train.device=\"" + *c.device + "\"");
  return sets;
}

train::RunConfig effective(const Common& c) { return train::apply_overrides(read_base(c), all_overrides(c)); }

// Adopts shapes and audio framing from a checkpoint, then reapplies the flags.
train::RunConfig effective_for(const Common& c, const model::LoadedModel& m) {
  auto base = read_base(c);
  if (base.net != m.net && !c.config.empty())
    log::warn("config net block differs from the checkpoint; using the checkpoint's");
  base.net = m.net;
  base.audio = m.audio;
  base.frames.height = m.net.frame_height;
  base.frames.width = m.net.frame_width;
  base.inference.window_seconds = m.audio.segment_seconds;
  if (m.meta.contains("output_source"))
    base.inference.output_source = infer::output_source_from_string(m.meta.at("output_source"));
  return train::apply_overrides(base, all_overrides(c));
}

void write_json(const fs::path& path, const Json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

data::ClipStore split_store(const train::RunConfig& cfg, const std::string& split) {
  const auto splits = train::load_splits(cfg.data);
  const std::vector<data::ClipRecord>* clips = nullptr;
  if (split == "train") clips = &splits.train;
  else if (split == "val") clips = &splits.val;
  else if (split == "test") clips = &splits.test;
  else throw ConfigError("must be train, val or test", "split");
  if (clips->empty()) throw DatasetError("the " + split + " split of " + cfg.data.root.string() + " is empty");
  return data::ClipStore(*clips, cfg.audio, cfg.frames);
}

// synth-data

Json to_json(const data::SynthDatasetOptions& o) {
  return {{"count", o.count},           {"seed", o.seed},
          {"sample_rate", o.sample_rate}, {"duration", o.duration},
          {"itd_max", o.itd_max},       {"image_height", o.image_height},
          {"image_width", o.image_width}, {"blob_radius", o.blob_radius},
          {"train_fraction", o.train_fraction}, {"val_fraction", o.val_fraction}};
}

data::SynthDatasetOptions synth_from_file(const std::string& path) {
  data::SynthDatasetOptions o;
  if (path.empty()) return o;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path, "config");
  const auto root = Json::parse(in, nullptr, false);
  if (root.is_discarded()) throw ConfigError("malformed JSON", "config");
  JsonReader top(root, "");
  if (top.has("synth")) {
    JsonReader r(top.child("synth"), "synth");
    r.get("count", o.count).get("seed", o.seed).get("sample_rate", o.sample_rate);
    r.get("duration", o.duration).get("itd_max", o.itd_max).get("image_height", o.image_height);
    r.get("image_width", o.image_width).get("blob_radius", o.blob_radius);
    r.get("train_fraction", o.train_fraction).get("val_fraction", o.val_fraction);
    r.finish();
  }
  top.finish();
  return o;
}

struct SynthArgs {
  std::string config, out_dir;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<int> sample_rate, height, width, radius;
  std::optional<double> duration, itd_max, train_fraction, val_fraction;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  auto o = synth_from_file(a.config);
  if (a.count) o.count = *a.count;
  if (a.seed) o.seed = *a.seed;
  if (a.sample_rate) o.sample_rate = *a.sample_rate;
  if (a.height) o.image_height = *a.height;
  if (a.width) o.image_width = *a.width;
  if (a.radius) o.blob_radius = *a.radius;
  if (a.duration) o.duration = *a.duration;
  if (a.itd_max) o.itd_max = *a.itd_max;
  if (a.train_fraction) o.train_fraction = *a.train_fraction;
  if (a.val_fraction) o.val_fraction = *a.val_fraction;
  if (o.count == 0) throw ConfigError("must be >= 1", "synth.count");
  const fs::path dir = a.out_dir;
  for (const auto* sub : {"audio", "frames"}) fs::remove_all(dir / sub);
  const auto splits = data::synth_dataset(o, dir);
  write_json(dir / "effective_config.json", {{"synth", to_json(o)}});
  out << "wrote " << o.count << " scenes (" << splits.train.size() << " train, " << splits.val.size()
      << " val, " << splits.test.size() << " test) to " << (dir / "manifest.json").string() << '\n';
  return kExitOk;
}

// train

struct TrainArgs {
  Common common;
  bool calibrate = false;
  int calibration_steps = 200;
};

losses::LossWeights run_calibration(const train::RunConfig& cfg, const data::ClipStore& store, int steps,
                                    losses::CalibrationResult* detail) {
  auto net = model::make_model(cfg.net, cfg.train.seed);
  train::CalibrationSettings s;
  s.options.steps = steps;
  s.batch_size = cfg.train.batch_size;
  s.seed = data::derive_seed(cfg.train.seed, "calibration");
  s.device = train::parse_device(cfg.train.device);
  return train::calibrate_weights(net, store, s, detail);
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  auto cfg = effective(a.common);
  torch::set_num_threads(cfg.train.threads);
  const fs::path dir = a.common.out_dir;
  const auto splits = train::load_splits(cfg.data);
  if (splits.train.empty()) throw DatasetError("no training clips in " + cfg.data.root.string());
  data::ClipStore train_store(splits.train, cfg.audio, cfg.frames);
  data::ClipStore val_store(splits.val, cfg.audio, cfg.frames);
  if (a.calibrate) {
    cfg.loss_weights = run_calibration(cfg, train_store, a.calibration_steps, nullptr);
    out << "calibrated weights " << losses::to_json(cfg.loss_weights).dump() << '\n';
  }
  train::save_run_config(dir / "effective_config.json", cfg);
  auto net = model::make_model(cfg.net, cfg.train.seed);
  train::Trainer trainer(net, cfg.train, cfg.loss_weights, cfg.audio, cfg.inference.output_source);
  const auto result = trainer.fit(train_store, val_store.size() ? &val_store : nullptr, dir);
  out << "trained " << cfg.train.epochs << " epochs; best val stft " << result.best_val_stft << "; checkpoint "
      << (result.best_checkpoint.empty() ? result.last_checkpoint : result.best_checkpoint).string() << '\n';
  return kExitOk;
}

// infer

struct InferArgs {
  Common common;
  std::string checkpoint, audio, frames, output;
  double fps = 10.0;
};

int cmd_infer(const InferArgs& a, std::ostream& out) {
  auto loaded = model::load_checkpoint(a.checkpoint);
  const auto cfg = effective_for(a.common, loaded);
  const auto device = train::parse_device(cfg.train.device);
  loaded.model->to(device);
  const auto mono = dsp::load_mono(a.audio, cfg.audio.sample_rate);
  if (!fs::exists(a.frames)) throw DatasetError("frames not found", {a.frames});
  const data::FrameSource source(a.frames, a.fps);
  infer::FrameProvider frames{source.count(), a.fps,
                              [&](std::size_t i) { return cfg.frames.apply(source.load(i)); }};
  infer::ModelPredictor predictor(loaded.model, cfg.inference.output_source, device);
  const auto clip = infer::binauralize(predictor, mono, frames, cfg.inference, cfg.audio);
  dsp::save_binaural(a.output, clip);
  fs::path snapshot = a.output;
  snapshot += ".config.json";
  train::save_run_config(snapshot, cfg);
  out << "wrote " << a.output << " (" << clip.size() << " samples at " << cfg.audio.sample_rate << " Hz)\n";
  return kExitOk;
}

// evaluate

struct EvaluateArgs {
  Common common;
  std::string checkpoint, stub, split = "test";
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const fs::path dir = a.common.out_dir;
  std::optional<model::LoadedModel> loaded;
  train::RunConfig cfg;
  if (!a.checkpoint.empty()) {
    loaded = model::load_checkpoint(a.checkpoint);
    cfg = effective_for(a.common, *loaded);
  } else {
    cfg = effective(a.common);
  }
  const auto store = split_store(cfg, a.split);
  std::unique_ptr<infer::Predictor> predictor;
  const auto device = train::parse_device(cfg.train.device);
  if (a.stub == "ground_truth") predictor = std::make_unique<infer::GroundTruthMaskStub>(cfg.audio);
  else if (a.stub == "mono_copy") predictor = std::make_unique<infer::MonoCopyStub>();
  else if (!a.stub.empty()) throw ConfigError("must be ground_truth or mono_copy", "stub");
  else if (loaded) {
    loaded->model->to(device);
    predictor = std::make_unique<infer::ModelPredictor>(loaded->model, cfg.inference.output_source, device);
  } else {
    throw ConfigError("evaluate needs --checkpoint or --stub", "checkpoint");
  }
  auto report = infer::evaluate(*predictor, store, cfg.inference);
  if (loaded && a.stub.empty()) report.accuracy = infer::flip_accuracy(*loaded->model, store, device);
  train::save_run_config(dir / "effective_config.json", cfg);
  infer::write_report_json(dir / "report.json", report);
  infer::write_report_csv(dir / "report.csv", report);
  out << "clips " << report.per_clip.size() << " skipped " << report.skipped.size() << " stft "
      << report.mean_stft_distance << " env " << report.mean_env_distance;
  if (report.accuracy) out << " accuracy " << *report.accuracy;
  out << '\n';
  return kExitOk;
}

// ablate

struct AblateArgs {
  Common common;
  std::vector<std::string> rows;
};

int cmd_ablate(const AblateArgs& a, std::ostream& out) {
  const auto cfg = effective(a.common);
  torch::set_num_threads(cfg.train.threads);
  const fs::path dir = a.common.out_dir;
  train::save_run_config(dir / "effective_config.json", cfg);
  const auto results = train::ablation_suite(cfg, train::load_splits(cfg.data), a.rows, dir);
  for (const auto& r : results)
    out << r.row.name << " stft " << r.report.mean_stft_distance << " env " << r.report.mean_env_distance
        << " accuracy " << r.report.accuracy.value_or(0.0) << '\n';
  return kExitOk;
}

// saliency

struct SaliencyArgs {
  Common common;
  std::string checkpoint, image;
  double alpha = 0.5;
};

int cmd_saliency(const SaliencyArgs& a, std::ostream& out) {
  auto loaded = model::load_checkpoint(a.checkpoint);
  const auto cfg = effective_for(a.common, loaded);
  const auto device = train::parse_device(cfg.train.device);
  loaded.model->to(device);
  const auto frame = data::load_image(a.image);
  const auto r = infer::saliency(*loaded.model, frame, cfg.frames, a.alpha, device);
  const fs::path dir = a.common.out_dir;
  fs::create_directories(dir);
  const auto stem = fs::path(a.image).stem().string();
  data::save_png(dir / (stem + "_overlay.png"), r.overlay);
  data::save_png(dir / (stem + "_heatmap.png"), r.heatmap);
  train::save_run_config(dir / "effective_config.json", cfg);
  out << "wrote " << (dir / (stem + "_overlay.png")).string() << '\n';
  return kExitOk;
}

// calibrate-weights

struct CalibrateArgs {
  Common common;
  int steps = 200;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  auto cfg = effective(a.common);
  torch::set_num_threads(cfg.train.threads);
  const auto store = split_store(cfg, "train");
  losses::CalibrationResult detail;
  cfg.loss_weights = run_calibration(cfg, store, a.steps, &detail);
  const fs::path dir = a.common.out_dir;
  write_json(dir / "weights.json", {{"loss_weights", losses::to_json(cfg.loss_weights)},
                                    {"mean_gradients", {{"generation", detail.mean_gradients[0]},
                                                        {"classification", detail.mean_gradients[1]}}}});
  train::save_run_config(dir / "effective_config.json", cfg);
  out << "loss_weights " << losses::to_json(cfg.loss_weights).dump() << '\n';
  return kExitOk;
}

int report_error(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << "m2b: error [" << kind << "] " << message << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visually guided mono-to-binaural audio", "m2b"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings only");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth-data", "Generate a synthetic audio-visual dataset");
  s->add_option("--config", synth.config, "JSON with a 'synth' block");
  s->add_option("--n", synth.count, "Number of scenes (200)");
  s->add_option("--seed", synth.seed, "Root seed (0)");
  s->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  s->add_option("--sample-rate", synth.sample_rate, "Hz (16000)");
  s->add_option("--duration", synth.duration, "Seconds per scene (2.0)");
  s->add_option("--itd-max", synth.itd_max, "Maximum interaural delay in seconds (0)");
  s->add_option("--height", synth.height, "Frame height (224)");
  s->add_option("--width", synth.width, "Frame width (448)");
  s->add_option("--radius", synth.radius, "Blob radius in pixels (24)");
  s->add_option("--train-fraction", synth.train_fraction, "(0.7)");
  s->add_option("--val-fraction", synth.val_fraction, "(0.1)");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a model");
  add_common(t, tr.common);
  t->add_flag("--calibrate", tr.calibrate, "Calibrate loss weights before training");
  t->add_option("--calibration-steps", tr.calibration_steps, "Steps per task when calibrating");

  InferArgs inf;
  auto* i = app.add_subcommand("infer", "Binauralize a mono recording");
  add_common(i, inf.common, false);
  i->add_option("--checkpoint", inf.checkpoint, "Model checkpoint")->required();
  i->add_option("--audio", inf.audio, "Input WAV, mixed down to mono")->required();
  i->add_option("--frames", inf.frames, "Frame directory or video file")->required();
  i->add_option("--output", inf.output, "Output two-channel WAV")->required();
  i->add_option("--fps", inf.fps, "Frame rate of --frames (10)");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score a model or stub on a dataset split");
  add_common(e, ev.common);
  e->add_option("--checkpoint", ev.checkpoint, "Model checkpoint");
  e->add_option("--stub", ev.stub, "ground_truth or mono_copy instead of a model");
  e->add_option("--split", ev.split, "train, val or test (test)");

  AblateArgs ab;
  auto* b = app.add_subcommand("ablate", "Train and evaluate the ablation rows");
  add_common(b, ab.common);
  b->add_option("--rows", ab.rows, "Subset of rows")->delimiter(',');

  SaliencyArgs sa;
  auto* v = app.add_subcommand("saliency", "Visual feature overlay for one frame");
  add_common(v, sa.common);
  v->add_option("--checkpoint", sa.checkpoint, "Model checkpoint")->required();
  v->add_option("--image", sa.image, "Frame image")->required();
  v->add_option("--alpha", sa.alpha, "Overlay opacity (0.5)");

  CalibrateArgs ca;
  auto* c = app.add_subcommand("calibrate-weights", "Match task gradients on the visual network");
  add_common(c, ca.common);
  c->add_option("--steps", ca.steps, "Steps per task (200)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  log::threshold() = quiet ? log::Level::Warn : verbose ? log::Level::Debug : log::Level::Info;

  try {
    if (s->parsed()) return cmd_synth(synth, out);
    if (t->parsed()) return cmd_train(tr, out);
    if (i->parsed()) return cmd_infer(inf, out);
    if (e->parsed()) return cmd_evaluate(ev, out);
    if (b->parsed()) return cmd_ablate(ab, out);
    if (v->parsed()) return cmd_saliency(sa, out);
    if (c->parsed()) return cmd_calibrate(ca, out);
  } catch (const ConfigError& ex) {
    return report_error(err, "config", ex.what(), kExitUsage);
  } catch (const DatasetError& ex) {
    return report_error(err, "dataset", ex.what(), kExitDataset);
  } catch (const ShapeError& ex) {
    return report_error(err, "shape", ex.what(), kExitShape);
  } catch (const TrainingError& ex) {
    return report_error(err, "training", ex.what(), kExitTraining);
  } catch (const std::exception& ex) {
    return report_error(err, "internal", ex.what(), kExitFailure);
  }
  return kExitUsage;
}

}  // namespace m2b::cli
