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

#pragma once

#include <torch/torch.h>

#include "m2b/data/image.hpp"
#include "m2b/model/model.hpp"

namespace m2b::infer {

// Channel mean of f_vb [C,h,w] min-max normalized to [0,1]; a constant map
// becomes 0.5 everywhere.
torch::Tensor normalize_saliency(const torch::Tensor& f_vb);

struct SaliencyResult {
  data::Image heatmap;  // normalized map resized to the frame, gray RGB
  data::Image overlay;  // heatmap alpha-blended onto the frame
};

SaliencyResult saliency_overlay(const torch::Tensor& normalized, const data::Image& frame,
                                double alpha = 0.5);

// frame is RGB in [0,1]; it is preprocessed before the forward pass.
SaliencyResult saliency(model::BinauralNetImpl& net, const data::Image& frame,
                        const data::FramePreprocess& preprocess, double alpha = 0.5,
                        torch::Device device = torch::kCPU);

}  // namespace m2b::infer
