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

#include "m2b/model/tensor_io.hpp"

#include "m2b/error.hpp"

namespace m2b::model {

torch::Tensor spectrogram_to_tensor(const dsp::ComplexSpectrogram& s, torch::Dtype dtype) {
  const auto bins = static_cast<int64_t>(s.bins()), frames = static_cast<int64_t>(s.frames());
  if (bins < 2) throw ShapeError("spectrogram_to_tensor: need at least two bins");
  auto out = torch::empty({2, bins - 1, frames}, torch::kFloat64);
  auto acc = out.accessor<double, 3>();
  for (int64_t f = 1; f < bins; ++f)
    for (int64_t t = 0; t < frames; ++t) {
      const auto v = s.values(f, t);
      acc[0][f - 1][t] = v.real();
      acc[1][f - 1][t] = v.imag();
    }
  return out.to(dtype);
}

dsp::ComplexMask mask_from_tensor(const torch::Tensor& mask) {
  if (mask.dim() != 3 || mask.size(0) != 2) throw ShapeError("mask_from_tensor: expected [2,F,T]");
  const auto m = mask.detach().to(torch::kCPU, torch::kFloat64).contiguous();
  const auto acc = m.accessor<double, 3>();
  dsp::ComplexMask out{dsp::ComplexMatrix(m.size(1) + 1, m.size(2))};
  for (int64_t f = 0; f < m.size(1); ++f)
    for (int64_t t = 0; t < m.size(2); ++t) out.values(f + 1, t) = {acc[0][f][t], acc[1][f][t]};
  return out;
}

dsp::ComplexSpectrogram spectrogram_from_tensor(const torch::Tensor& spec, const dsp::AudioConfig& cfg) {
  auto m = mask_from_tensor(spec);
  if (static_cast<int>(m.values.rows()) != cfg.freq_bins())
    throw ShapeError("spectrogram_from_tensor: bin count does not match the audio config");
  return {std::move(m.values), cfg};
}

torch::Tensor image_to_tensor(const data::Image& img, torch::Dtype dtype) {
  if (img.pixels.size() != static_cast<std::size_t>(img.height) * img.width * 3)
    throw ShapeError("image_to_tensor: pixel buffer does not match dimensions");
  auto hwc = torch::from_blob(const_cast<float*>(img.pixels.data()), {img.height, img.width, 3},
                              torch::kFloat32);
  return hwc.permute({2, 0, 1}).to(dtype).contiguous();
}

Batch Batch::to(const torch::Device& device, torch::Dtype dtype) const {
  const auto cvt = [&](const torch::Tensor& t) { return t.to(device, dtype); };
  return {cvt(frames), cvt(mono), cvt(binaural), cvt(left), cvt(right), cvt(diff), cvt(indicator)};
}

Batch make_batch(std::span<const data::SceneSample> samples, torch::Dtype dtype) {
  if (samples.empty()) throw ShapeError("make_batch: no samples");
  std::vector<torch::Tensor> frames, mono, bin, left, right;
  std::vector<float> y;
  for (const auto& s : samples) {
    frames.push_back(image_to_tensor(s.frame, dtype));
    mono.push_back(spectrogram_to_tensor(s.mono_spec, dtype));
    bin.push_back(torch::cat({spectrogram_to_tensor(s.flipped_left_spec, dtype),
                              spectrogram_to_tensor(s.flipped_right_spec, dtype)}));
    left.push_back(spectrogram_to_tensor(s.gt_left_spec, dtype));
    right.push_back(spectrogram_to_tensor(s.gt_right_spec, dtype));
    y.push_back(static_cast<float>(s.flip_indicator));
  }
  Batch b;
  b.frames = torch::stack(frames);
  b.mono = torch::stack(mono);
  b.binaural = torch::stack(bin);
  b.left = torch::stack(left);
  b.right = torch::stack(right);
  b.diff = (b.left - b.right) / 2;
  b.indicator = torch::tensor(y).to(dtype);
  return b;
}

}  // namespace m2b::model
