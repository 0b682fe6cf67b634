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
#include <numbers>
#include <numeric>

#include "m2b/data/clip_store.hpp"
#include "m2b/data/sampling.hpp"
#include "m2b/data/synth.hpp"
#include "m2b/dsp/mask.hpp"
#include "m2b/dsp/stft.hpp"
#include "m2b/error.hpp"
#include "m2b/infer/binauralize.hpp"
#include "m2b/infer/evaluate.hpp"
#include "m2b/infer/predictor.hpp"
#include "m2b/infer/saliency.hpp"
#include "m2b/model/model.hpp"
#include "support/temp_dir.hpp"
#include "support/tiny_config.hpp"
#include "support/tiny_data.hpp"

using namespace m2b;
using namespace m2b::infer;
using m2b::testing::TempDir;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

double relative_error(const dsp::Waveform& a, const dsp::Waveform& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a.samples[i] - b.samples[i]) * (a.samples[i] - b.samples[i]);
    den += b.samples[i] * b.samples[i];
  }
  return std::sqrt(num / den);
}

// Over both channels, so a silent channel is well defined.
double relative_error(const dsp::BinauralClip& a, const dsp::BinauralClip& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::pow(a.left.samples[i] - b.left.samples[i], 2) +
           std::pow(a.right.samples[i] - b.right.samples[i], 2);
    den += std::pow(b.left.samples[i], 2) + std::pow(b.right.samples[i], 2);
  }
  return std::sqrt(num / den);
}

dsp::BinauralClip scene_audio(double azimuth, double seconds, std::uint64_t seed) {
  data::SynthSceneParams p;
  p.azimuth = azimuth;
  p.duration = seconds;
  p.image_height = 32;
  p.image_width = 64;
  p.blob_radius = 5;
  auto rng = data::make_rng(seed, "infer-test");
  return data::render_scene(p, 8000, rng).binaural;
}

FrameProvider blank_frames(double seconds) {
  const auto pre = m2b::testing::tiny_frames();
  return {static_cast<std::size_t>(seconds * 10), 10.0,
          [pre](std::size_t) { return data::Image(pre.height, pre.width, 0.0f); }};
}

// Reference coverage count for the window layout, computed sample by sample.
std::vector<int> scalar_coverage(std::int64_t n, std::int64_t win, std::int64_t hop) {
  std::vector<int> cover(n, 0);
  std::int64_t s = 0;
  std::int64_t last = -1;
  while (s + win <= n) {
    for (std::int64_t i = s; i < s + win; ++i) ++cover[i];
    last = s;
    s += hop;
  }
  if (last + win < n)
    for (std::int64_t i = n - win; i < n; ++i) ++cover[i];
  return cover;
}

// Scales the mono input: left = a * S_m, right = b * S_m.
class GainStub final : public Predictor {
 public:
  GainStub(double a, double b) : a_(a), b_(b) {}
  std::vector<WindowPrediction> predict(std::span<const WindowInput> windows) override {
    std::vector<WindowPrediction> out;
    for (const auto& w : windows) {
      auto l = *w.mono, r = *w.mono;
      for (auto& v : l.values.values()) v *= a_;
      for (auto& v : r.values.values()) v *= b_;
      out.push_back({l, r});
    }
    return out;
  }

 private:
  double a_, b_;
};

}  // namespace

TEST_CASE("inference config validation and json", "[inference][config]") {
  InferenceConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.window_samples(16000) == 10080);
  CHECK(c.hop_samples(16000) == 1600);
  c.hop_seconds = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = InferenceConfig{};
  c.output_source = OutputSource::BackboneDifference;
  CHECK(inference_config_from_json(to_json(c)) == c);
  CHECK(output_source_from_string("apnet_channels") == OutputSource::ApnetChannels);
  CHECK_THROWS_AS(output_source_from_string("nope"), ConfigError);
}

TEST_CASE("window layout covers every sample", "[inference][windows]") {
  for (std::int64_t n : {1200, 1201, 1650, 4000, 4123}) {
    const auto starts = window_starts(n, 1200, 400);
    std::vector<int> cover(n, 0);
    for (auto s : starts)
      for (std::int64_t i = s; i < s + 1200; ++i) ++cover[i];
    CHECK(cover == scalar_coverage(n, 1200, 400));
    CHECK(std::ranges::all_of(cover, [](int c) { return c > 0; }));
    CHECK(starts.back() + 1200 == n);
  }
  CHECK_THROWS_AS(window_starts(1000, 1200, 400), ShapeError);
}

TEST_CASE("binauralize output length and too-short input", "[inference][binauralize]") {
  const auto audio = m2b::testing::tiny_audio_config();
  const auto cfg = m2b::testing::tiny_inference();
  MonoCopyStub stub;
  for (std::size_t n : {1200u, 1333u, 4000u, 4321u}) {
    const auto clip = scene_audio(0.3, 0.6, n);
    dsp::Waveform mono{{clip.left.samples.begin(), clip.left.samples.begin() + n}, 8000};
    const auto out = binauralize(stub, mono, blank_frames(0.6), cfg, audio);
    CHECK(out.left.size() == n);
    CHECK(out.right.size() == n);
    CHECK(relative_error(out.left, mono) < 1e-6);
  }
  dsp::Waveform short_mono{std::vector<double>(1000, 0.1), 8000};
  CHECK_THROWS_AS(binauralize(stub, short_mono, blank_frames(0.6), cfg, audio), ShapeError);
  CHECK_THROWS_AS(binauralize(stub, dsp::Waveform{std::vector<double>(2000, 0.1), 8000},
                              FrameProvider{}, cfg, audio),
                  DatasetError);
}

TEST_CASE("ground-truth mask stub reproduces the binaural clip", "[inference][identity]") {
  const auto audio = m2b::testing::tiny_audio_config();
  const auto cfg = m2b::testing::tiny_inference();
  for (double az : {-kPi / 2, -0.7, 0.0, 0.4, kPi / 2 * 0.95}) {
    const auto gt = scene_audio(az, 1.0, 7);
    GroundTruthMaskStub stub(audio);
    stub.begin_clip(&gt);
    const auto out = binauralize(stub, dsp::mix_mono(gt.left, gt.right), blank_frames(1.0), cfg, audio);
    CHECK(relative_error(out, gt) < 1e-5);
  }
}

TEST_CASE("hard-left clip through the ground-truth stub is louder on the left",
          "[inference][direction]") {
  const auto audio = m2b::testing::tiny_audio_config();
  const auto gt = scene_audio(-kPi / 2 * 0.9, 1.0, 11);
  GroundTruthMaskStub stub(audio);
  stub.begin_clip(&gt);
  const auto out = binauralize(stub, dsp::mix_mono(gt.left, gt.right), blank_frames(1.0),
                               m2b::testing::tiny_inference(), audio);
  CHECK(dsp::rms(out.left) > 5.0 * dsp::rms(out.right));
}

TEST_CASE("hop equal to window concatenates per-window inverses", "[inference][overlap]") {
  const auto audio = m2b::testing::tiny_audio_config();
  auto cfg = m2b::testing::tiny_inference();
  cfg.hop_seconds = cfg.window_seconds;
  const auto gt = scene_audio(0.2, 0.6, 3);
  dsp::Waveform mono{{gt.left.samples.begin(), gt.left.samples.begin() + 4800}, 8000};
  GainStub stub(1.5, -0.5);
  const auto out = binauralize(stub, mono, blank_frames(0.6), cfg, audio);
  REQUIRE(window_starts(4800, 1200, 1200).size() == 4);
  for (std::int64_t s = 0; s < 4800; s += 1200) {
    auto spec = dsp::stft(data::slice(mono, s, 1200), audio);
    for (auto& v : spec.values.values()) v *= 1.5;
    const auto ref = dsp::istft(spec, 1200);
    for (std::int64_t i = 0; i < 1200; ++i) REQUIRE(out.left.samples[s + i] == ref.samples[i]);
  }
}

TEST_CASE("zero difference mask under backbone_difference copies mono", "[inference][model]") {
  const auto net_cfg = m2b::testing::tiny_net_config();
  auto net = model::make_model(net_cfg, 5);
  {
    torch::NoGradGuard g;
    const auto last = "decoder." + std::to_string(net_cfg.unet_depth - 1) + ".";
    for (auto& p : net->backbone()->named_parameters())
      if (p.key().starts_with(last)) p.value().zero_();
  }
  const auto audio = m2b::testing::tiny_audio_config();
  auto cfg = m2b::testing::tiny_inference();
  cfg.output_source = OutputSource::BackboneDifference;
  ModelPredictor predictor(net, cfg.output_source);
  const auto gt = scene_audio(0.5, 0.8, 2);
  const auto mono = dsp::mix_mono(gt.left, gt.right);
  const auto out = binauralize(predictor, mono, blank_frames(0.8), cfg, audio);
  CHECK(relative_error(out.left, mono) < 1e-6);
  CHECK(relative_error(out.right, mono) < 1e-6);

  SECTION("model binauralization is deterministic") {
    ModelPredictor apnet(net, OutputSource::ApnetChannels);
    const auto a = binauralize(apnet, mono, blank_frames(0.8), cfg, audio);
    const auto b = binauralize(apnet, mono, blank_frames(0.8), cfg, audio);
    CHECK(a.left.samples == b.left.samples);
    CHECK(a.right.samples == b.right.samples);
    CHECK(net->is_training());
  }
}

TEST_CASE("evaluate with stubs and report io", "[evaluate]") {
  TempDir tmp("evaluate");
  auto o = m2b::testing::tiny_synth(6, 21);
  o.train_fraction = 1.0;
  o.val_fraction = 0.0;
  auto splits = data::synth_dataset(o, tmp.path);
  REQUIRE(splits.train.size() == 6);
  const auto audio = m2b::testing::tiny_audio_config();
  const auto cfg = m2b::testing::tiny_inference();
  data::ClipStore store(splits.train, audio, m2b::testing::tiny_frames());

  GroundTruthMaskStub gt_stub(audio);
  const auto exact = evaluate(gt_stub, store, cfg);
  REQUIRE(exact.per_clip.size() == 6);
  CHECK(exact.mean_stft_distance < 1e-4);
  CHECK(exact.mean_env_distance < 1e-4);
  CHECK(exact.skipped.empty());

  MonoCopyStub mono_stub;
  const auto copy = evaluate(mono_stub, store, cfg);
  CHECK(copy.mean_stft_distance > 0.1);
  CHECK(copy.mean_env_distance > 0.0);
  for (const auto& c : copy.per_clip) {
    CHECK(std::isfinite(c.stft_distance));
    CHECK(c.env_distance >= 0.0);
  }
  const double s = std::accumulate(copy.per_clip.begin(), copy.per_clip.end(), 0.0,
                                   [](double a, const ClipMetrics& c) { return a + c.stft_distance; });
  CHECK(copy.mean_stft_distance == Catch::Approx(s / 6).epsilon(1e-12));

  SECTION("deterministic") {
    const auto again = evaluate(mono_stub, store, cfg);
    CHECK(again.mean_stft_distance == copy.mean_stft_distance);
  }
  SECTION("json and csv reports") {
    auto r = copy;
    r.accuracy = 0.75;
    write_report_json(tmp.path / "out" / "report.json", r);
    write_report_csv(tmp.path / "out" / "report.csv", r);
    const auto back = read_report_json(tmp.path / "out" / "report.json");
    CHECK(back.per_clip.size() == r.per_clip.size());
    CHECK(back.mean_stft_distance == Catch::Approx(r.mean_stft_distance));
    CHECK(back.accuracy == r.accuracy);
    CHECK(fs::file_size(tmp.path / "out" / "report.csv") > 0);
  }
  SECTION("undecodable clips are skipped and listed") {
    auto records = splits.train;
    records[1].audio_path = tmp.path / "missing.wav";
    data::ClipStore broken(records, audio, m2b::testing::tiny_frames());
    const auto r = evaluate(mono_stub, broken, cfg);
    CHECK(r.per_clip.size() == 5);
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].starts_with(records[1].id));
  }
  SECTION("channel ordering with the ground-truth stub") {
    const auto ord = channel_ordering(gt_stub, store, cfg, [](const data::ClipRecord& r) {
      return std::abs(*r.azimuth) > 0.2;
    });
    CHECK(ord.considered > 0);
    CHECK(ord.rate() == 1.0);
  }
}

TEST_CASE("report aggregate equals the per-clip mean", "[evaluate][report]") {
  MetricsReport r;
  r.per_clip = {{"a", 1.0, 0.5}, {"b", 2.0, 0.25}, {"c", 4.5, 0.0}};
  r.finalize();
  CHECK(r.mean_stft_distance == Catch::Approx(7.5 / 3));
  CHECK(r.mean_env_distance == Catch::Approx(0.25));
}

TEST_CASE("saliency normalization and overlay", "[saliency]") {
  const auto constant = normalize_saliency(torch::full({4, 3, 5}, 2.5));
  CHECK(constant.sizes() == torch::IntArrayRef({3, 5}));
  CHECK(torch::allclose(constant, torch::full({3, 5}, 0.5, constant.options())));

  torch::manual_seed(0);
  const auto f = torch::rand({6, 4, 7});
  const auto n = normalize_saliency(f);
  CHECK(n.min().item<double>() == Catch::Approx(0.0).margin(1e-7));
  CHECK(n.max().item<double>() == Catch::Approx(1.0));
  const auto mean = f.mean(0);
  const auto oracle = (mean - mean.min()) / (mean.max() - mean.min());
  CHECK(torch::allclose(n.to(torch::kFloat64), oracle.to(torch::kFloat64), 1e-6, 1e-6));

  data::Image frame(48, 96, 0.3f);
  const auto flat = saliency_overlay(constant, frame, 0.5);
  CHECK(flat.overlay.height == 48);
  CHECK(flat.overlay.width == 96);
  for (int c = 0; c < 3; ++c) {
    const float v0 = flat.overlay.at(0, 0, c);
    bool uniform = true;
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 96; ++x) uniform = uniform && std::abs(flat.overlay.at(y, x, c) - v0) < 1e-6f;
    CHECK(uniform);
  }

  auto net = model::make_model(m2b::testing::tiny_net_config(), 1);
  const auto res = saliency(*net, frame, m2b::testing::tiny_frames());
  CHECK(res.overlay.height == frame.height);
  CHECK(res.overlay.width == frame.width);
  CHECK(res.heatmap.height == frame.height);
  CHECK(res.heatmap.width == frame.width);
}
