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

#include "m2b/infer/evaluate.hpp"

#include <fstream>
#include <iomanip>

#include "json.hpp"
#include "m2b/dsp/mask.hpp"
#include "m2b/dsp/metrics.hpp"
#include "m2b/dsp/stft.hpp"
#include "m2b/error.hpp"
#include "m2b/log.hpp"
#include "m2b/model/tensor_io.hpp"

namespace m2b::infer {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

}  // namespace

void MetricsReport::finalize() {
  double s = 0.0, e = 0.0;
  for (const auto& c : per_clip) s += c.stft_distance, e += c.env_distance;
  const double n = static_cast<double>(per_clip.size());
  mean_stft_distance = per_clip.empty() ? 0.0 : s / n;
  mean_env_distance = per_clip.empty() ? 0.0 : e / n;
}

void write_report_csv(const fs::path& path, const MetricsReport& r) {
  ensure_parent(path);
  std::ofstream out(path);
  out << std::setprecision(10) << "clip_id,stft_distance,env_distance\n";
  for (const auto& c : r.per_clip) out << c.id << ',' << c.stft_distance << ',' << c.env_distance << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_report_json(const fs::path& path, const MetricsReport& r) {
  ensure_parent(path);
  ordered_json j;
  j["mean_stft_distance"] = r.mean_stft_distance;
  j["mean_env_distance"] = r.mean_env_distance;
  j["accuracy"] = r.accuracy ? ordered_json(*r.accuracy) : ordered_json(nullptr);
  j["clip_count"] = r.per_clip.size();
  j["clips"] = ordered_json::array();
  for (const auto& c : r.per_clip)
    j["clips"].push_back({{"id", c.id}, {"stft_distance", c.stft_distance}, {"env_distance", c.env_distance}});
  j["skipped"] = r.skipped;
  std::ofstream(path) << j.dump(2) << '\n';
}

MetricsReport read_report_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read report", {path.string()});
  const auto j = ordered_json::parse(in);
  MetricsReport r;
  for (const auto& c : j.at("clips"))
    r.per_clip.push_back({c.at("id").get<std::string>(), c.at("stft_distance").get<double>(),
                          c.at("env_distance").get<double>()});
  if (!j.at("accuracy").is_null()) r.accuracy = j.at("accuracy").get<double>();
  r.skipped = j.at("skipped").get<std::vector<std::string>>();
  r.mean_stft_distance = j.at("mean_stft_distance").get<double>();
  r.mean_env_distance = j.at("mean_env_distance").get<double>();
  return r;
}

FrameProvider frame_provider(const data::ClipStore& store, std::size_t clip) {
  return {store.frame_count(clip), store.record(clip).frame_rate,
          [&store, clip](std::size_t idx) { return store.frame(clip, idx); }};
}

MetricsReport evaluate(Predictor& predictor, const data::ClipStore& test, const InferenceConfig& cfg) {
  if (test.size() == 0) throw DatasetError("evaluate: empty test set");
  const auto& audio = test.audio_config();
  MetricsReport report;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& rec = test.record(i);
    try {
      const auto gt = test.audio(i);
      const auto mono = dsp::mix_mono(gt.left, gt.right);
      predictor.begin_clip(&gt);
      const auto pred = binauralize(predictor, mono, frame_provider(test, i), cfg, audio);
      predictor.begin_clip(nullptr);
      ClipMetrics m;
      m.id = rec.id;
      m.stft_distance = dsp::stft_distance(dsp::stft(pred.left, audio), dsp::stft(pred.right, audio),
                                           dsp::stft(gt.left, audio), dsp::stft(gt.right, audio));
      m.env_distance = dsp::env_distance(pred.left, pred.right, gt.left, gt.right);
      report.per_clip.push_back(std::move(m));
    } catch (const DatasetError& e) {
      predictor.begin_clip(nullptr);
      log::warn("skipping clip " + rec.id + ": " + e.what());
      report.skipped.push_back(rec.id + ": " + e.what());
    }
  }
  report.finalize();
  return report;
}

double flip_accuracy(model::BinauralNetImpl& net, const data::ClipStore& clips, torch::Device device) {
  if (clips.size() == 0) throw DatasetError("flip_accuracy: empty set");
  const bool was_training = net.is_training();
  net.eval();
  torch::NoGradGuard guard;
  const auto dtype = net.parameters().front().scalar_type();
  std::size_t correct = 0, total = 0;
  constexpr std::size_t kChunk = 16;
  for (std::size_t first = 0; first < clips.size(); first += kChunk) {
    std::vector<data::SceneSample> samples;
    for (std::size_t i = first; i < std::min(clips.size(), first + kChunk); ++i) {
      const auto start = clips.center_start(i);
      samples.push_back(clips.sample_at(i, start, false));
      samples.push_back(clips.sample_at(i, start, true));
    }
    const auto batch = model::make_batch(samples, dtype).to(device, dtype);
    const auto v = net.visual_features(batch.frames);
    const auto prob = net.discriminate(v.classification.features, batch.binaural);
    const auto pred = (prob > 0.5).to(dtype);
    correct += (pred == batch.indicator).sum().item<int64_t>();
    total += samples.size();
  }
  net.train(was_training);
  return static_cast<double>(correct) / static_cast<double>(total);
}

ChannelOrdering channel_ordering(Predictor& predictor, const data::ClipStore& clips,
                                 const InferenceConfig& cfg,
                                 const std::function<bool(const data::ClipRecord&)>& filter) {
  ChannelOrdering out;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (!filter(clips.record(i))) continue;
    const auto gt = clips.audio(i);
    predictor.begin_clip(&gt);
    const auto pred = binauralize(predictor, dsp::mix_mono(gt.left, gt.right), frame_provider(clips, i),
                                  cfg, clips.audio_config());
    predictor.begin_clip(nullptr);
    const bool gt_left = dsp::rms(gt.left) > dsp::rms(gt.right);
    const bool pred_left = dsp::rms(pred.left) > dsp::rms(pred.right);
    ++out.considered;
    out.matched += gt_left == pred_left;
  }
  return out;
}

}  // namespace m2b::infer
