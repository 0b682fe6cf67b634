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

#include "m2b/infer/predictor.hpp"

#include "m2b/data/sampling.hpp"
#include "m2b/dsp/mask.hpp"
#include "m2b/dsp/stft.hpp"
#include "m2b/error.hpp"
#include "m2b/model/tensor_io.hpp"

namespace m2b::infer {
namespace {

// Restores the module's training flag on scope exit.
class EvalScope {
 public:
  explicit EvalScope(torch::nn::Module& m) : m_(m), was_training_(m.is_training()) { m_.eval(); }
  ~EvalScope() { m_.train(was_training_); }
  EvalScope(const EvalScope&) = delete;
  EvalScope& operator=(const EvalScope&) = delete;

 private:
  torch::nn::Module& m_;
  bool was_training_;
};

dsp::ComplexMask ratio_mask(const dsp::ComplexSpectrogram& num, const dsp::ComplexSpectrogram& den) {
  dsp::ComplexMask m{dsp::ComplexMatrix(den.bins(), den.frames())};
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    const auto d = den.values.values()[i];
    m.values.values()[i] = std::norm(d) > 0.0 ? num.values.values()[i] / d : dsp::Complex{};
  }
  return m;
}

}  // namespace

ModelPredictor::ModelPredictor(model::BinauralNet net, OutputSource source, torch::Device device)
    : net_(std::move(net)), source_(source), device_(device) {}

std::vector<WindowPrediction> ModelPredictor::predict(std::span<const WindowInput> windows) {
  if (windows.empty()) return {};
  EvalScope scope(*net_);
  torch::NoGradGuard guard;
  const auto dtype = net_->parameters().front().scalar_type();
  std::vector<torch::Tensor> monos, frames;
  for (const auto& w : windows) {
    monos.push_back(model::spectrogram_to_tensor(*w.mono, dtype));
    frames.push_back(model::image_to_tensor(*w.frame, dtype));
  }
  model::ModelInputs in{torch::stack(frames).to(device_), torch::stack(monos).to(device_), {}};
  const bool apnet = source_ == OutputSource::ApnetChannels;
  const auto out = net_->forward(in, {.apnet = apnet, .classifier = false});

  std::vector<WindowPrediction> preds;
  preds.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& mono = *windows[i].mono;
    const auto b = static_cast<int64_t>(i);
    if (apnet) {
      preds.push_back({dsp::apply_complex_mask(mono, model::mask_from_tensor(out.mask_left[b])),
                       dsp::apply_complex_mask(mono, model::mask_from_tensor(out.mask_right[b]))});
    } else {
      const auto d = dsp::apply_complex_mask(mono, model::mask_from_tensor(out.mask_diff[b]));
      preds.push_back({dsp::add(mono, d), dsp::subtract(mono, d)});
    }
  }
  return preds;
}

void GroundTruthMaskStub::begin_clip(const dsp::BinauralClip* reference) { reference_ = reference; }

std::vector<WindowPrediction> GroundTruthMaskStub::predict(std::span<const WindowInput> windows) {
  if (!reference_) throw std::logic_error("ground-truth stub used without a reference clip");
  std::vector<WindowPrediction> preds;
  for (const auto& w : windows) {
    const auto seg = data::slice(*reference_, w.start, w.length);
    const auto l = dsp::stft(seg.left, audio_), r = dsp::stft(seg.right, audio_);
    preds.push_back({dsp::apply_complex_mask(*w.mono, ratio_mask(l, *w.mono)),
                     dsp::apply_complex_mask(*w.mono, ratio_mask(r, *w.mono))});
  }
  return preds;
}

std::vector<WindowPrediction> MonoCopyStub::predict(std::span<const WindowInput> windows) {
  std::vector<WindowPrediction> preds;
  for (const auto& w : windows) preds.push_back({*w.mono, *w.mono});
  return preds;
}

}  // namespace m2b::infer
