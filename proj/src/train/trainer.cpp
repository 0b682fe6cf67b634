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

#include "m2b/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "m2b/data/rng.hpp"
#include "m2b/data/sampling.hpp"
#include "m2b/dsp/metrics.hpp"
#include "m2b/dsp/stft.hpp"
#include "m2b/error.hpp"
#include "m2b/infer/predictor.hpp"
#include "m2b/log.hpp"
#include "m2b/model/checkpoint.hpp"

namespace m2b::train {
namespace {

namespace fs = std::filesystem;

double value(const torch::Tensor& t) { return t.defined() ? t.item<double>() : 0.0; }

std::string format_val(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(10) << *v;
  return s.str();
}

}  // namespace

torch::Device parse_device(const std::string& name) {
  torch::Device d(name);
  if (d.is_cuda() && !torch::cuda::is_available())
    throw ConfigError("CUDA requested but not available", "device");
  return d;
}

infer::MetricsReport validate(model::BinauralNet net, const data::ClipStore& val,
                              const ValidationOptions& options) {
  if (val.size() == 0) throw DatasetError("validate: empty validation set");
  const auto& audio = val.audio_config();
  infer::ModelPredictor predictor(net, options.output_source, options.device);
  infer::MetricsReport report;
  constexpr std::size_t kChunk = 16;
  for (std::size_t first = 0; first < val.size(); first += kChunk) {
    const std::size_t last = std::min(val.size(), first + kChunk);
    std::vector<data::SceneSample> samples;
    std::vector<std::int64_t> starts;
    for (std::size_t i = first; i < last; ++i) {
      starts.push_back(val.center_start(i));
      samples.push_back(val.sample_at(i, starts.back(), false));
    }
    std::vector<infer::WindowInput> inputs;
    for (std::size_t k = 0; k < samples.size(); ++k)
      inputs.push_back({&samples[k].mono_spec, &samples[k].frame, starts[k], audio.segment_samples()});
    const auto preds = predictor.predict(inputs);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto seg = data::slice(val.audio(first + k), starts[k], audio.segment_samples());
      const auto len = static_cast<std::size_t>(audio.segment_samples());
      infer::ClipMetrics m;
      m.id = val.record(first + k).id;
      m.stft_distance = dsp::stft_distance(preds[k].left, preds[k].right, samples[k].gt_left_spec,
                                           samples[k].gt_right_spec);
      m.env_distance = dsp::env_distance(dsp::istft(preds[k].left, len), dsp::istft(preds[k].right, len),
                                         seg.left, seg.right);
      report.per_clip.push_back(std::move(m));
    }
  }
  report.finalize();
  if (options.accuracy) report.accuracy = infer::flip_accuracy(*net, val, options.device);
  return report;
}

Trainer::Trainer(model::BinauralNet net, TrainConfig cfg, losses::LossWeights weights,
                 dsp::AudioConfig audio, infer::OutputSource output_source)
    : net_(std::move(net)),
      cfg_(std::move(cfg)),
      weights_(weights),
      audio_(audio),
      output_source_(output_source),
      device_(torch::kCPU) {
  cfg_.validate();
  weights_.validate();
  audio_.validate();
  device_ = parse_device(cfg_.device);
  torch::set_num_threads(cfg_.threads);

  const auto& nc = net_->config();
  const auto frames = audio_.frame_count(audio_.segment_samples());
  if (nc.freq_bins != audio_.model_bins() || nc.frames != frames)
    throw ShapeError("network expects " + std::to_string(nc.freq_bins) + "x" +
                     std::to_string(nc.frames) + " spectrograms but the audio config yields " +
                     std::to_string(audio_.model_bins()) + "x" + std::to_string(frames));

  net_->to(device_);
  auto slow = net_->slow_parameters(), fast = net_->fast_parameters();
  if (slow.size() + fast.size() != net_->parameters().size())
    throw TrainingError("parameter groups do not cover the model");
  std::vector<torch::optim::OptimizerParamGroup> groups;
  groups.emplace_back(slow, std::make_unique<torch::optim::AdamOptions>(cfg_.lr_slow));
  groups.emplace_back(fast, std::make_unique<torch::optim::AdamOptions>(cfg_.lr_fast));
  optimizer_ = std::make_unique<torch::optim::Adam>(std::move(groups), torch::optim::AdamOptions(cfg_.lr_fast));
}

int Trainer::steps_per_epoch(std::size_t clips) const {
  if (cfg_.steps_per_epoch > 0) return cfg_.steps_per_epoch;
  return static_cast<int>((clips + cfg_.batch_size - 1) / cfg_.batch_size);
}

losses::LossWeights Trainer::stage_weights(int epoch) const {
  if (cfg_.schedule == Schedule::Joint) return weights_;
  if (epoch <= cfg_.epochs / 2) return {weights_.difference, weights_.channels, 0.0};
  return {0.0, 0.0, weights_.classification};
}

void Trainer::set_visual_frozen(bool frozen) {
  for (auto& p : net_->visual()->parameters()) p.set_requires_grad(!frozen);
}

StepLosses Trainer::step(const model::Batch& batch, const losses::LossWeights& w) {
  w.validate();
  net_->train();
  const bool classify = w.classification > 0.0;
  const bool generated = classify && cfg_.classifier_input == ClassifierInput::Generated;
  const bool apnet = w.channels > 0.0 || generated;
  model::ModelInputs in{batch.frames, batch.mono, generated ? torch::Tensor() : batch.binaural};
  auto out = net_->forward(in, {.apnet = apnet, .classifier = classify && !generated});
  if (generated) {
    auto pair = torch::cat({out.pred_left, out.pred_right}, 1);
    out.flip_prob = net_->discriminate(out.visual.classification.features,
                                       model::swap_channels(pair, batch.indicator == 0));
  }

  torch::Tensor l_d, l_c, l_cls;
  if (w.difference > 0.0) l_d = losses::loss_difference(out.pred_diff, batch.diff);
  if (w.channels > 0.0) l_c = losses::loss_channels(out.pred_left, out.pred_right, batch.left, batch.right);
  if (classify) l_cls = losses::loss_classification(out.flip_prob, batch.indicator);
  auto total = losses::loss_total(l_d, l_c, l_cls, w);

  StepLosses s{value(l_d), value(l_c), value(l_cls), value(total)};
  if (!std::isfinite(s.total)) throw TrainingError("non-finite loss");
  optimizer_->zero_grad();
  if (total.requires_grad()) {
    total.backward();
    optimizer_->step();
  }
  return s;
}

std::vector<data::SceneSample> Trainer::draw(const data::ClipStore& train, int epoch, int step) const {
  const auto n = train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto shuffle_rng = data::make_rng(cfg_.seed, "train-shuffle", static_cast<std::uint64_t>(epoch));
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  std::vector<data::SceneSample> samples;
  for (int j = 0; j < cfg_.batch_size; ++j) {
    const auto pos = static_cast<std::uint64_t>(step) * cfg_.batch_size + j;
    auto rng = data::make_rng(cfg_.seed, "train-sample", (static_cast<std::uint64_t>(epoch) << 32) | pos);
    samples.push_back(train.sample(order[pos % n], rng));
  }
  return samples;
}

TrainResult Trainer::fit(const data::ClipStore& train, const data::ClipStore* val, const fs::path& out_dir) {
  if (train.size() == 0) throw DatasetError("train: empty training set");
  if (!(train.audio_config() == audio_)) throw ShapeError("training clips use a different audio config");
  const int steps = steps_per_epoch(train.size());
  const auto dtype = net_->parameters().front().scalar_type();
  const bool write = !out_dir.empty();
  const fs::path ckpt_dir = out_dir / "checkpoints";
  std::ofstream history;
  if (write) {
    fs::create_directories(ckpt_dir);
    history.open(out_dir / "history.csv", std::ios::trunc);
    history << "epoch,l_d,l_c,l_cls,total,val_stft,val_env,val_accuracy\n" << std::setprecision(10);
  }
  const auto save = [&](const fs::path& path, int epoch) {
    model::save_checkpoint(path, *net_, audio_,
                           {{"epoch", epoch}, {"output_source", infer::to_string(output_source_)}});
  };

  TrainResult result;
  for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
    const auto w = stage_weights(epoch);
    set_visual_frozen(cfg_.schedule == Schedule::TwoStage && epoch > cfg_.epochs / 2);
    EpochRecord rec;
    rec.epoch = epoch;
    for (int s = 0; s < steps; ++s) {
      const auto samples = draw(train, epoch, s);
      const auto batch = model::make_batch(samples, dtype).to(device_, dtype);
      StepLosses l;
      try {
        l = step(batch, w);
      } catch (const TrainingError& e) {
        const auto ref = result.last_checkpoint.empty() ? std::string("none") : result.last_checkpoint.string();
        throw TrainingError(std::string(e.what()) + " at epoch " + std::to_string(epoch) + " step " +
                            std::to_string(s) + "; last good checkpoint: " + ref);
      }
      rec.train.l_d += l.l_d / steps;
      rec.train.l_c += l.l_c / steps;
      rec.train.l_cls += l.l_cls / steps;
      rec.train.total += l.total / steps;
    }
    if (val && (epoch % cfg_.validate_every == 0 || epoch == cfg_.epochs)) {
      rec.val = validate(net_, *val, {output_source_, device_, true});
      if (rec.val->mean_stft_distance < result.best_val_stft) {
        result.best_val_stft = rec.val->mean_stft_distance;
        if (write) {
          result.best_checkpoint = ckpt_dir / "best.pt";
          save(result.best_checkpoint, epoch);
        }
      }
    }
    if (write && (epoch % cfg_.checkpoint_every == 0 || epoch == cfg_.epochs)) {
      result.last_checkpoint = ckpt_dir / "last.pt";
      save(result.last_checkpoint, epoch);
    }
    if (write) {
      history << epoch << ',' << rec.train.l_d << ',' << rec.train.l_c << ',' << rec.train.l_cls << ','
              << rec.train.total << ','
              << format_val(rec.val ? std::optional(rec.val->mean_stft_distance) : std::nullopt) << ','
              << format_val(rec.val ? std::optional(rec.val->mean_env_distance) : std::nullopt) << ','
              << format_val(rec.val ? rec.val->accuracy : std::nullopt) << '\n';
      history.flush();
    }
    std::ostringstream msg;
    msg << "epoch " << epoch << "/" << cfg_.epochs << " total " << rec.train.total;
    if (rec.val) msg << " val_stft " << rec.val->mean_stft_distance << " val_acc " << rec.val->accuracy.value_or(0);
    log::info(msg.str());
    if (on_epoch) on_epoch(rec);
    result.history.push_back(std::move(rec));
  }
  set_visual_frozen(false);
  if (result.best_checkpoint.empty() && write) {
    result.best_checkpoint = result.last_checkpoint;
  }
  return result;
}

losses::LossWeights calibrate_weights(model::BinauralNet net, const data::ClipStore& data,
                                      const CalibrationSettings& settings,
                                      losses::CalibrationResult* detail) {
  if (data.size() == 0) throw DatasetError("calibrate_weights: empty data");
  net->to(settings.device);
  net->train();
  const auto dtype = net->parameters().front().scalar_type();
  std::vector<model::Batch> batches;
  for (int b = 0; b < std::max(1, settings.batches); ++b) {
    std::vector<data::SceneSample> samples;
    for (int j = 0; j < settings.batch_size; ++j) {
      const auto pos = static_cast<std::uint64_t>(b) * settings.batch_size + j;
      auto rng = data::make_rng(settings.seed, "calibration", pos);
      samples.push_back(data.sample(pos % data.size(), rng));
    }
    batches.push_back(model::make_batch(samples, dtype).to(settings.device, dtype));
  }
  const auto run = [&](bool generation) {
    return [&, generation, k = std::size_t{0}]() mutable {
      const auto& b = batches[k++ % batches.size()];
      if (generation) {
        auto out = net->forward({b.frames, b.mono, {}}, {.apnet = true, .classifier = false});
        return losses::loss_difference(out.pred_diff, b.diff) +
               losses::loss_channels(out.pred_left, out.pred_right, b.left, b.right);
      }
      const auto v = net->visual_features(b.frames);
      return losses::loss_classification(net->discriminate(v.classification.features, b.binaural),
                                         b.indicator);
    };
  };
  const std::vector<losses::CalibrationTask> tasks{{"generation", run(true)}, {"classification", run(false)}};
  const auto r = losses::calibrate_tasks(tasks, net->parameters(), net->visual()->parameters(), settings.options);
  if (detail) *detail = r;
  return {r.weights[0], r.weights[0], 1.0};
}

}  // namespace m2b::train
