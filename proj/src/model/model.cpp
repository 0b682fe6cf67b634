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

#include "m2b/model/model.hpp"

#include "m2b/model/checkpoint.hpp"

namespace m2b::model {
namespace {

std::vector<torch::Tensor> collect(std::initializer_list<const torch::nn::Module*> modules) {
  std::vector<torch::Tensor> out;
  for (const auto* m : modules)
    for (const auto& p : m->parameters()) out.push_back(p);
  return out;
}

}  // namespace

BinauralNetImpl::BinauralNetImpl(const NetConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  visual_ = register_module("visual", VisualNet(cfg_));
  attention_gen_ = register_module("attention_gen", Attention(cfg_));
  attention_cls_ = register_module("attention_cls", Attention(cfg_));
  backbone_ = register_module("backbone", Backbone(cfg_));
  apnet_ = register_module("apnet", APNet(cfg_, backbone_->activation_channels()));
  binaural_encoder_ = register_module("binaural_encoder", BinauralEncoder(cfg_));
  classifier_ = register_module("classifier", Classifier(cfg_));
}

VisualFeatures BinauralNetImpl::visual_features(const torch::Tensor& frames) {
  VisualFeatures v;
  v.f_v = visual_->forward(frames);
  v.generation = attention_gen_->forward(v.f_v);
  v.classification = attention_cls_->forward(v.f_v);
  return v;
}

torch::Tensor BinauralNetImpl::discriminate(const torch::Tensor& f_vf, const torch::Tensor& binaural) {
  return classifier_->forward(f_vf, binaural_encoder_->forward(binaural));
}

ModelOutputs BinauralNetImpl::forward(const ModelInputs& in, ForwardOptions options) {
  ModelOutputs out;
  out.visual = visual_features(in.frames);
  const auto& f_vb = out.visual.generation.features;
  auto bb = backbone_->forward(in.mono, f_vb);
  out.mask_diff = bb.mask;
  out.pred_diff = apply_mask(in.mono, bb.mask);
  if (options.apnet) {
    auto masks = apnet_->forward(bb.activations, f_vb);
    out.mask_left = masks.left;
    out.mask_right = masks.right;
    out.pred_left = apply_mask(in.mono, masks.left);
    out.pred_right = apply_mask(in.mono, masks.right);
  }
  if (options.classifier && in.binaural.defined()) {
    out.f_bin = binaural_encoder_->forward(in.binaural);
    out.flip_prob = classifier_->forward(out.visual.classification.features, out.f_bin);
  }
  return out;
}

std::vector<torch::Tensor> BinauralNetImpl::slow_parameters() const {
  return collect({visual_.get(), attention_gen_.get(), attention_cls_.get(), classifier_.get()});
}

std::vector<torch::Tensor> BinauralNetImpl::fast_parameters() const {
  return collect({backbone_.get(), apnet_.get(), binaural_encoder_.get()});
}

BinauralNet make_model(const NetConfig& cfg, std::uint64_t seed) {
  torch::manual_seed(seed);
  BinauralNet net(cfg);
  if (cfg.use_pretrained_visual) load_visual_asset(*net->visual(), cfg.pretrained_visual_path);
  return net;
}

}  // namespace m2b::model
