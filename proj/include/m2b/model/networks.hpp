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

namespace m2b::model {

// Residual trunk with the classification head and final pooling removed.
class ResNet18TrunkImpl : public torch::nn::Module {
 public:
  ResNet18TrunkImpl();
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr};
  torch::nn::BatchNorm2d bn1_{nullptr};
  torch::nn::Sequential layer1_{nullptr}, layer2_{nullptr}, layer3_{nullptr}, layer4_{nullptr};
};
TORCH_MODULE(ResNet18Trunk);

// Shared visual extractor: [B,3,H,W] -> f_v [B,C_v,ceil(H/32),ceil(W/32)].
class VisualNetImpl : public torch::nn::Module {
 public:
  explicit VisualNetImpl(const NetConfig& cfg);
  torch::Tensor forward(const torch::Tensor& frames);
  bool pretrained() const noexcept { return static_cast<bool>(trunk_); }
  ResNet18Trunk& trunk() { return trunk_; }

 private:
  NetConfig cfg_;
  torch::nn::Sequential stack_{nullptr};
  ResNet18Trunk trunk_{nullptr};
};
TORCH_MODULE(VisualNet);

struct Attended {
  torch::Tensor map;       // a in (0,1), [B,1,h,w]
  torch::Tensor features;  // f_v * a
};

// Task-specific spatial attention: a = sigmoid(conv1x1(relu(conv3x3(f_v)))).
class AttentionImpl : public torch::nn::Module {
 public:
  AttentionImpl(const NetConfig& cfg);
  Attended forward(const torch::Tensor& f_v);
  torch::nn::Conv2d& final_conv() { return conv2_; }
  bool enabled() const noexcept { return enabled_; }

 private:
  bool enabled_;
  torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr};
};
TORCH_MODULE(Attention);

// Bias-free 1x1 reduction of f_vb followed by flattening: [B, r*h*w].
class VisualFlattenImpl : public torch::nn::Module {
 public:
  explicit VisualFlattenImpl(const NetConfig& cfg);
  torch::Tensor forward(const torch::Tensor& f_vb);
  int64_t size() const noexcept { return size_; }

 private:
  torch::nn::Conv2d reduce_{nullptr};
  int64_t size_;
};
TORCH_MODULE(VisualFlatten);

// Strided 4x4 convolutions with LeakyReLU; returns every level's output.
class UNetEncoderImpl : public torch::nn::Module {
 public:
  UNetEncoderImpl(const NetConfig& cfg, int in_channels);
  std::vector<torch::Tensor> forward(const torch::Tensor& x);
  int in_channels() const noexcept { return in_channels_; }

 private:
  int in_channels_;
  torch::nn::ModuleList convs_;
};
TORCH_MODULE(UNetEncoder);

struct BackboneOutput {
  torch::Tensor mask;  // M_D, [B,2,F,T]
  // Decoder activations from the bottleneck (spatial /2^d) up to /2.
  std::vector<torch::Tensor> activations;
};

// Net_E / Net_D with f_vb tiled onto the bottleneck and skip connections.
class BackboneImpl : public torch::nn::Module {
 public:
  explicit BackboneImpl(const NetConfig& cfg);
  BackboneOutput forward(const torch::Tensor& mono, const torch::Tensor& f_vb);
  std::vector<int64_t> activation_channels() const;

 private:
  NetConfig cfg_;
  UNetEncoder encoder_{nullptr};
  VisualFlatten flatten_{nullptr};
  torch::nn::Linear embed_{nullptr};
  torch::nn::ModuleList ups_;
};
TORCH_MODULE(Backbone);

struct ChannelMasks {
  torch::Tensor left;   // M_l, [B,2,F,T]
  torch::Tensor right;  // M_r
};

// Side pyramid associating visual weights with each decoder activation.
class APNetImpl : public torch::nn::Module {
 public:
  APNetImpl(const NetConfig& cfg, std::vector<int64_t> activation_channels);
  ChannelMasks forward(const std::vector<torch::Tensor>& activations, const torch::Tensor& f_vb);
  // k weighted copies of one level's activation, before the fusion conv.
  torch::Tensor associate(std::size_t level, const torch::Tensor& activation,
                          const torch::Tensor& visual_flat);
  torch::Tensor flatten_visual(const torch::Tensor& f_vb) { return flatten_->forward(f_vb); }
  std::size_t levels() const noexcept { return channels_.size(); }

 private:
  NetConfig cfg_;
  std::vector<int64_t> channels_;
  VisualFlatten flatten_{nullptr};
  torch::nn::ModuleList projections_, fusions_, ups_;
  torch::nn::ConvTranspose2d head_{nullptr};
};
TORCH_MODULE(APNet);

// Net_E with four input channels; f_bin is the bottleneck output.
class BinauralEncoderImpl : public torch::nn::Module {
 public:
  explicit BinauralEncoderImpl(const NetConfig& cfg);
  torch::Tensor forward(const torch::Tensor& binaural);

 private:
  UNetEncoder encoder_{nullptr};
};
TORCH_MODULE(BinauralEncoder);

// Pooled f_vf concatenated with f_bin -> conv -> pool -> linear -> sigmoid.
class ClassifierImpl : public torch::nn::Module {
 public:
  explicit ClassifierImpl(const NetConfig& cfg);
  torch::Tensor forward(const torch::Tensor& f_vf, const torch::Tensor& f_bin);  // [B]
  torch::nn::Linear& fc() { return fc_; }

 private:
  NetConfig cfg_;
  torch::nn::Conv2d conv_{nullptr};
  torch::nn::Linear fc_{nullptr};
  int64_t pool_h_, pool_w_;
};
TORCH_MODULE(Classifier);

// Complex product of (real, imag) channel pairs: [B,2,F,T] x [B,2,F,T].
torch::Tensor apply_mask(const torch::Tensor& spec, const torch::Tensor& mask);

// Swaps the (L, R) halves of a [B,4,F,T] tensor where swap[b] is true.
torch::Tensor swap_channels(const torch::Tensor& binaural, const torch::Tensor& swap);

}  // namespace m2b::model
