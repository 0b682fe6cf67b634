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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

#include "m2b/dsp/envelope.hpp"
#include "m2b/dsp/mask.hpp"
#include "m2b/dsp/metrics.hpp"
#include "m2b/dsp/resample.hpp"
#include "m2b/dsp/stft.hpp"
#include "m2b/dsp/wav_io.hpp"
#include "m2b/error.hpp"

using namespace m2b::dsp;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Waveform random_wave(std::size_t n, std::uint64_t seed, int rate = 16000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.3);
  Waveform w{std::vector<double>(n), rate};
  for (auto& v : w.samples) v = dist(rng);
  return w;
}

Waveform sine(std::size_t n, double freq, double amp, int rate = 16000) {
  Waveform w{std::vector<double>(n), rate};
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * kPi * freq * static_cast<double>(i) / rate);
  return w;
}

ComplexSpectrogram random_spec(std::size_t bins, std::size_t frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  ComplexSpectrogram s{ComplexMatrix(bins, frames), AudioConfig{}};
  for (auto& v : s.values.values()) v = {dist(rng), dist(rng)};
  return s;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

// Brute-force centered STFT column: reflection padding + Hann + direct DFT.
std::vector<std::complex<double>> dft_column(const Waveform& w, const AudioConfig& cfg,
                                             std::int64_t t) {
  const int n = cfg.window_size;
  const auto len = static_cast<std::int64_t>(w.size());
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) {
      std::int64_t j = t * cfg.hop_length - n / 2 + i;
      if (j < 0) j = -j;
      if (j >= len) j = 2 * (len - 1) - j;
      const double win = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
      acc += w.samples[j] * win * std::polar(1.0, -2.0 * kPi * k * i / n);
    }
    out[k] = acc;
  }
  return out;
}

// Direct O(n^2) analytic-signal magnitude.
std::vector<double> dft_envelope(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spec(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      spec[k] += x[i] * std::polar(1.0, -2.0 * kPi * double(k * i % n) / n);
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n) spec[k] *= 2.0;
    else if (2 * k > n) spec[k] = 0.0;
  }
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += spec[k] * std::polar(1.0, 2.0 * kPi * double(k * i % n) / n);
    env[i] = std::abs(acc / double(n));
  }
  return env;
}

}  // namespace

TEST_CASE("canonical audio configuration is accepted", "[dsp][config]") {
  AudioConfig cfg;
  REQUIRE_NOTHROW(cfg.validate());
  CHECK(cfg.segment_samples() == 10080);
  CHECK(cfg.freq_bins() == 257);
  CHECK(cfg.model_bins() == 256);
  CHECK(cfg.frame_count(10080) == 64);

  AudioConfig bad = cfg;
  bad.hop_length = 512;
  CHECK_THROWS_AS(bad.validate(), m2b::ConfigError);
  bad = cfg;
  bad.segment_seconds = 0.63001;
  CHECK_THROWS_AS(bad.validate(), m2b::ConfigError);
}

TEST_CASE("stft of silence is all zero with canonical shape", "[dsp][stft]") {
  AudioConfig cfg;
  const auto s = stft(Waveform{std::vector<double>(10080, 0.0), 16000}, cfg);
  REQUIRE(s.bins() == 257);
  REQUIRE(s.frames() == 64);
  for (const auto& v : s.values.values()) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("stft matches a brute-force DFT and peaks at the tone bin", "[dsp][stft]") {
  AudioConfig cfg;
  const auto w = sine(10080, 16000.0 * 32 / 512, 0.5);
  const auto s = stft(w, cfg);
  // Frames whose support crosses a reflected edge are covered by the DFT check.
  for (std::size_t t = 2; t + 2 < s.frames(); ++t) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < s.bins(); ++b)
      if (std::abs(s.values(b, t)) > std::abs(s.values(best, t))) best = b;
    CHECK(best == 32);
  }
  for (std::int64_t t : {0, 1, 31, 62, 63}) {
    const auto oracle = dft_column(w, cfg, t);
    for (std::size_t b = 0; b < oracle.size(); ++b)
      REQUIRE(std::abs(oracle[b] - s.values(b, t)) < 1e-9);
  }
}

TEST_CASE("stft rejects short or mismatched signals", "[dsp][stft]") {
  AudioConfig cfg;
  CHECK_THROWS_AS(stft(Waveform{std::vector<double>(511, 0.1), 16000}, cfg), m2b::ShapeError);
  CHECK_THROWS_AS(stft(Waveform{std::vector<double>(1024, 0.1), 8000}, cfg), m2b::ShapeError);
}

TEST_CASE("istft inverts stft", "[dsp][istft]") {
  AudioConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto w = random_wave(10080, seed);
    const auto back = istft(stft(w, cfg), w.size());
    REQUIRE(back.size() == w.size());
    CHECK(relative_l2(back.samples, w.samples) < 1e-6);
  }
  SECTION("lengths that are not a multiple of the hop") {
    const auto w = random_wave(5000 + 37, 99);
    const auto back = istft(stft(w, cfg), w.size());
    CHECK(relative_l2(back.samples, w.samples) < 1e-6);
  }
  SECTION("reduced configuration") {
    AudioConfig small{8000, 128, 80, 0.63, WindowFunction::Hann};
    const auto w = random_wave(5040, 5, 8000);
    const auto s = stft(w, small);
    CHECK(s.bins() == 65);
    CHECK(s.frames() == 64);
    CHECK(relative_l2(istft(s, w.size()).samples, w.samples) < 1e-6);
  }
}

TEST_CASE("istft of zeros and of a tone", "[dsp][istft]") {
  AudioConfig cfg;
  ComplexSpectrogram zero{ComplexMatrix(257, 64), cfg};
  const auto z = istft(zero, 10080);
  for (double v : z.samples) CHECK(v == 0.0);

  const auto tone = sine(10080, 16000.0 * 32 / 512, 0.5);
  const auto again = stft(istft(stft(tone, cfg), tone.size()), cfg);
  for (std::size_t t = 2; t + 2 < again.frames(); ++t) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < again.bins(); ++b)
      if (std::abs(again.values(b, t)) > std::abs(again.values(best, t))) best = b;
    CHECK(best == 32);
  }
}

TEST_CASE("istft rejects spectrograms it cannot invert", "[dsp][istft]") {
  AudioConfig bad;
  bad.hop_length = 600;
  ComplexSpectrogram s{ComplexMatrix(257, 4), bad};
  CHECK_THROWS_AS(istft(s), m2b::ConfigError);
  ComplexSpectrogram wrong_bins{ComplexMatrix(256, 4), AudioConfig{}};
  CHECK_THROWS_AS(istft(wrong_bins), m2b::ShapeError);
}

TEST_CASE("complex mask algebra", "[dsp][mask]") {
  const auto s = random_spec(256, 64, 1);
  const auto one = ComplexMask::constant(256, 64, {1.0, 0.0});
  const auto zero = ComplexMask::constant(256, 64, {0.0, 0.0});
  const auto same = apply_complex_mask(s, one);
  const auto none = apply_complex_mask(s, zero);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    CHECK(std::abs(same.values.values()[i] - s.values.values()[i]) <= 1e-7);
    CHECK(std::abs(none.values.values()[i]) <= 1e-7);
  }

  ComplexSpectrogram cell{ComplexMatrix(1, 1, {2.0, 3.0}), AudioConfig{}};
  const auto rotated = apply_complex_mask(cell, ComplexMask::constant(1, 1, {0.0, 1.0}));
  CHECK(rotated.values(0, 0) == std::complex<double>(-3.0, 2.0));

  SECTION("random inputs agree with std::complex multiplication") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto a = random_spec(32, 16, 10 + seed);
      const auto m = random_spec(32, 16, 20 + seed);
      const auto out = apply_complex_mask(a, ComplexMask{m.values});
      for (std::size_t b = 0; b < 32; ++b)
        for (std::size_t t = 0; t < 16; ++t)
          REQUIRE(std::abs(out.values(b, t) - a.values(b, t) * m.values(b, t)) < 1e-6);
    }
  }

  CHECK_THROWS_AS(apply_complex_mask(s, ComplexMask::constant(255, 64, {1.0, 0.0})),
                  m2b::ShapeError);
}

TEST_CASE("mono mixing", "[dsp][mask]") {
  Waveform l{{1.0, 0.0}, 16000}, r{{0.0, 1.0}, 16000};
  CHECK(mix_mono(l, r).samples == std::vector<double>{0.5, 0.5});
  CHECK(mix_mono(l, l).samples == l.samples);
  Waveform neg{{-1.0, -0.0}, 16000};
  for (double v : mix_mono(l, neg).samples) CHECK(v == 0.0);
  CHECK_THROWS_AS(mix_mono(l, Waveform{{1.0}, 16000}), m2b::ShapeError);
  CHECK_THROWS_AS(mix_mono(l, Waveform{{1.0, 2.0}, 8000}), m2b::ShapeError);
}

TEST_CASE("difference spectrogram and reconstruction identity", "[dsp][mask]") {
  const auto a = random_spec(64, 16, 3);
  const auto self = diff_spectrogram(a, a);
  for (const auto& v : self.values.values()) CHECK(std::abs(v) == 0.0);
  ComplexSpectrogram zero{ComplexMatrix(64, 16), a.config};
  const auto half = diff_spectrogram(a, zero);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(half.values.values()[i] == a.values.values()[i] / 2.0);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto l = random_spec(64, 16, 100 + seed);
    const auto r = random_spec(64, 16, 200 + seed);
    const auto d = diff_spectrogram(l, r);
    const auto m = mono_spectrogram(l, r);
    const auto l2 = add(m, d);
    const auto r2 = subtract(m, d);
    for (std::size_t i = 0; i < l.values.size(); ++i) {
      REQUIRE(std::abs(l2.values.values()[i] - l.values.values()[i]) < 1e-6);
      REQUIRE(std::abs(r2.values.values()[i] - r.values.values()[i]) < 1e-6);
    }
  }
  CHECK_THROWS_AS(diff_spectrogram(a, random_spec(64, 15, 1)), m2b::ShapeError);
}

TEST_CASE("envelope", "[dsp][envelope]") {
  SECTION("silence") {
    for (double v : envelope(Waveform{std::vector<double>(1000, 0.0), 16000})) CHECK(v == 0.0);
  }
  SECTION("sinusoid has a flat envelope at its amplitude") {
    const auto env = envelope(sine(16000, 440.0, 0.7));
    double worst = 0.0;
    for (std::size_t i = 1600; i < 14400; ++i) worst = std::max(worst, std::abs(env[i] - 0.7));
    CHECK(worst < 0.01);
  }
  SECTION("amplitude modulation is tracked") {
    Waveform am{std::vector<double>(16000), 16000};
    std::vector<double> modulator(16000);
    for (std::size_t i = 0; i < am.size(); ++i) {
      const double t = i / 16000.0;
      modulator[i] = 1.0 + 0.5 * std::cos(2.0 * kPi * 2.0 * t);
      am.samples[i] = modulator[i] * std::sin(2.0 * kPi * 440.0 * t);
    }
    const auto env = envelope(am);
    double worst = 0.0;
    for (std::size_t i = 1600; i < 14400; ++i)
      worst = std::max(worst, std::abs(env[i] - modulator[i]) / modulator[i]);
    CHECK(worst < 0.02);
  }
  SECTION("matches a direct analytic-signal construction") {
    for (std::size_t n : {63u, 64u}) {
      const auto w = random_wave(n, n);
      const auto fast = envelope(w);
      const auto slow = dft_envelope(w.samples);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(fast[i] - slow[i]) < 1e-9);
    }
  }
  SECTION("non-negative and sign invariant") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto w = random_wave(2000 + seed, seed);
      const auto e1 = envelope(w);
      for (auto& v : w.samples) v = -v;
      const auto e2 = envelope(w);
      for (std::size_t i = 0; i < e1.size(); ++i) {
        REQUIRE(e1[i] >= 0.0);
        REQUIRE(std::abs(e1[i] - e2[i]) < 1e-12);
      }
    }
  }
  SECTION("non-finite input rejected") {
    CHECK_THROWS(envelope(Waveform{{0.0, NAN}, 16000}));
  }
}

TEST_CASE("stft distance", "[dsp][metrics]") {
  const auto a = random_spec(16, 8, 1);
  const auto b = random_spec(16, 8, 2);
  CHECK(stft_distance(a, b, a, b) == 0.0);

  AudioConfig cfg;
  ComplexSpectrogram one{ComplexMatrix(1, 1, {1.0, 0.0}), cfg};
  ComplexSpectrogram zero{ComplexMatrix(1, 1), cfg};
  CHECK(stft_distance(zero, zero, one, zero) == Approx(1.0));

  const auto c = random_spec(16, 8, 3);
  const auto d = random_spec(16, 8, 4);
  const double forward = stft_distance(a, b, c, d);
  CHECK(forward > 0.0);
  CHECK(forward == Approx(stft_distance(c, d, a, b)).epsilon(1e-12));
  CHECK_THROWS_AS(stft_distance(a, b, random_spec(15, 8, 1), d), m2b::ShapeError);
}

TEST_CASE("envelope distance", "[dsp][metrics]") {
  const auto l = sine(4000, 440.0, 0.3);
  const auto r = sine(4000, 660.0, 0.2);
  CHECK(env_distance(l, r, l, r) == 0.0);

  Waveform doubled = r;
  for (auto& v : doubled.samples) v *= 2.0;
  const auto e = envelope(r);
  double norm = 0.0;
  for (double v : e) norm += v * v;
  CHECK(env_distance(l, doubled, l, r) == Approx(std::sqrt(norm)).epsilon(1e-9));
  CHECK(env_distance(l, doubled, l, r) == Approx(env_distance(l, r, l, doubled)));
  CHECK_THROWS_AS(env_distance(l, r, l, sine(10, 1.0, 1.0)), m2b::ShapeError);
}

TEST_CASE("wav round trip and resampling", "[dsp][wav]") {
  const auto dir = std::filesystem::temp_directory_path() / "m2b_test_dsp";
  std::filesystem::create_directories(dir);
  const auto l = sine(800, 440.0, 0.5);
  const auto r = sine(800, 880.0, 0.25);

  save_binaural(dir / "f32.wav", BinauralClip{l, r}, SampleFormat::Float32);
  const auto info = read_wav_info(dir / "f32.wav");
  CHECK(info.channels == 2);
  CHECK(info.frames == 800);
  CHECK(info.sample_rate == 16000);
  const auto back = load_binaural(dir / "f32.wav", 16000);
  for (std::size_t i = 0; i < 800; ++i) {
    REQUIRE(back.left.samples[i] == Approx(l.samples[i]).margin(1e-7));
    REQUIRE(back.right.samples[i] == Approx(r.samples[i]).margin(1e-7));
  }

  save_binaural(dir / "pcm.wav", BinauralClip{l, r}, SampleFormat::Pcm16);
  const auto pcm = load_binaural(dir / "pcm.wav", 16000);
  for (std::size_t i = 0; i < 800; ++i) REQUIRE(std::abs(pcm.left.samples[i] - l.samples[i]) < 1e-4);

  write_wav(dir / "mono.wav", {l.samples}, 16000);
  CHECK_THROWS(load_binaural(dir / "mono.wav", 16000));
  CHECK(load_mono(dir / "mono.wav", 16000).size() == 800);
  CHECK_THROWS(read_wav(dir / "does_not_exist.wav"));

  SECTION("resampling keeps a tone's frequency") {
    const auto tone = sine(16000, 1000.0, 0.5, 16000);
    const auto down = resample(tone.samples, 16000, 8000);
    REQUIRE(down.size() == 8000);
    const auto ref = sine(8000, 1000.0, 0.5, 8000);
    double worst = 0.0;
    for (std::size_t i = 200; i < 7800; ++i) worst = std::max(worst, std::abs(down[i] - ref.samples[i]));
    CHECK(worst < 1e-2);
  }
  std::filesystem::remove_all(dir);
}
