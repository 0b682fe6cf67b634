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

#include "m2b/dsp/metrics.hpp"

#include <cmath>

#include "m2b/dsp/envelope.hpp"
#include "m2b/error.hpp"

namespace m2b::dsp {

double l2_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) throw ShapeError("l2_distance: shape mismatch");
  auto x = a.values();
  auto y = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::norm(x[i] - y[i]);
  return std::sqrt(acc);
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("l2_distance: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double stft_distance(const ComplexSpectrogram& pred_l,
                     const ComplexSpectrogram& pred_r,
                     const ComplexSpectrogram& gt_l,
                     const ComplexSpectrogram& gt_r) {
  return l2_distance(gt_l.values, pred_l.values) +
         l2_distance(gt_r.values, pred_r.values);
}

double env_distance(const Waveform& pred_l, const Waveform& pred_r,
                    const Waveform& gt_l, const Waveform& gt_r) {
  if (pred_l.size() != gt_l.size() || pred_r.size() != gt_r.size())
    throw ShapeError("env_distance: length mismatch");
  return l2_distance(envelope(gt_l), envelope(pred_l)) +
         l2_distance(envelope(gt_r), envelope(pred_r));
}

}  // namespace m2b::dsp
