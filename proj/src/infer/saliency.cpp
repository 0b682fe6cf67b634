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

#include "m2b/infer/saliency.hpp"

#include <algorithm>

#include "m2b/error.hpp"
#include "m2b/model/tensor_io.hpp"

namespace m2b::infer {

torch::Tensor normalize_saliency(const torch::Tensor& f_vb) {
  if (f_vb.dim() != 3) throw ShapeError("normalize_saliency: expected [C,h,w]");
  const auto m = f_vb.detach().to(torch::kCPU, torch::kFloat64).mean(0);
  const double lo = m.min().item<double>(), hi = m.max().item<double>();
  if (!(hi - lo > 1e-12 * std::max(1.0, std::abs(hi)))) return torch::full_like(m, 0.5);
  return (m - lo) / (hi - lo);
}

SaliencyResult saliency_overlay(const torch::Tensor& normalized, const data::Image& frame, double alpha) {
  if (normalized.dim() != 2) throw ShapeError("saliency_overlay: expected [h,w]");
  const auto h = static_cast<int>(normalized.size(0)), w = static_cast<int>(normalized.size(1));
  const auto acc = normalized.accessor<double, 2>();
  data::Image small(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) small.at(y, x, c) = static_cast<float>(acc[y][x]);
  SaliencyResult out;
  out.heatmap = data::resize(small, frame.height, frame.width);
  out.overlay = data::Image(frame.height, frame.width);
  const auto a = static_cast<float>(alpha);
  for (int y = 0; y < frame.height; ++y)
    for (int x = 0; x < frame.width; ++x) {
      const float v = std::clamp(out.heatmap.at(y, x, 0), 0.0f, 1.0f);
      const float tint[3] = {v, 0.25f * v, 1.0f - v};
      for (int c = 0; c < 3; ++c)
        out.overlay.at(y, x, c) = (1.0f - a) * frame.at(y, x, c) + a * tint[c];
    }
  return out;
}

SaliencyResult saliency(model::BinauralNetImpl& net, const data::Image& frame,
                        const data::FramePreprocess& preprocess, double alpha, torch::Device device) {
  const bool was_training = net.is_training();
  net.eval();
  torch::NoGradGuard guard;
  const auto dtype = net.parameters().front().scalar_type();
  const auto x = model::image_to_tensor(preprocess.apply(frame), dtype).unsqueeze(0).to(device);
  const auto f_vb = net.visual_features(x).generation.features[0];
  net.train(was_training);
  return saliency_overlay(normalize_saliency(f_vb), frame, alpha);
}

}  // namespace m2b::infer
