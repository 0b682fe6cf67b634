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

#include <vector>

#include "m2b/model/net_config.hpp"
#include "m2b/model/networks.hpp"

namespace m2b::model {

struct ModelInputs {
  torch::Tensor frames;    // [B,3,H,W], preprocessed
  torch::Tensor mono;      // S_m, [B,2,F,T]
  torch::Tensor binaural;  // (S_l', S_r'), [B,4,F,T]; undefined skips the classifier
};

struct VisualFeatures {
  torch::Tensor f_v;
  Attended generation;      // a_b, f_vb
  Attended classification;  // a_f, f_vf
};

struct ModelOutputs {
  VisualFeatures visual;
  torch::Tensor mask_diff, mask_left, mask_right;  // M_D, M_l, M_r
  torch::Tensor pred_diff, pred_left, pred_right;  // masks applied to S_m
  torch::Tensor f_bin;
  torch::Tensor flip_prob;  // [B]
};

struct ForwardOptions {
  bool apnet = true;
  bool classifier = true;
};

// Shared visual net, two attention selectors, backbone + APNet, and the flip
// discriminator.
class BinauralNetImpl : public torch::nn::Module {
 public:
  explicit BinauralNetImpl(const NetConfig& cfg);

  ModelOutputs forward(const ModelInputs& in, ForwardOptions options = {});
  VisualFeatures visual_features(const torch::Tensor& frames);
  torch::Tensor discriminate(const torch::Tensor& f_vf, const torch::Tensor& binaural);

  // Learning-rate groups: visual, attentions and classifier are slow;
  // backbone, APNet and binaural encoder are fast.
  std::vector<torch::Tensor> slow_parameters() const;
  std::vector<torch::Tensor> fast_parameters() const;

  const NetConfig& config() const noexcept { return cfg_; }
  VisualNet& visual() { return visual_; }
  Attention& attention_generation() { return attention_gen_; }
  Attention& attention_classification() { return attention_cls_; }
  Backbone& backbone() { return backbone_; }
  APNet& apnet() { return apnet_; }
  BinauralEncoder& binaural_encoder() { return binaural_encoder_; }
  Classifier& classifier() { return classifier_; }

 private:
  NetConfig cfg_;
  VisualNet visual_{nullptr};
  Attention attention_gen_{nullptr}, attention_cls_{nullptr};
  Backbone backbone_{nullptr};
  APNet apnet_{nullptr};
  BinauralEncoder binaural_encoder_{nullptr};
  Classifier classifier_{nullptr};
};
TORCH_MODULE(BinauralNet);

// Builds the network, loading the residual trunk asset when configured.
BinauralNet make_model(const NetConfig& cfg, std::uint64_t seed);

}  // namespace m2b::model
