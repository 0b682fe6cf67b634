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

#include "m2b/model/networks.hpp"

#include <algorithm>

#include "m2b/error.hpp"

namespace m2b::model {
namespace {

namespace nn = torch::nn;

nn::Conv2d conv(int64_t in, int64_t out, int64_t k, int64_t stride, int64_t pad, bool bias = true) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, k).stride(stride).padding(pad).bias(bias));
}

nn::ConvTranspose2d up_conv(int64_t in, int64_t out) {
  return nn::ConvTranspose2d(nn::ConvTranspose2dOptions(in, out, 4).stride(2).padding(1));
}

template <class M>
void kaiming(M& m, double gain_scale = 1.0) {
  torch::NoGradGuard guard;
  nn::init::kaiming_normal_(m->weight, 0.0, torch::kFanIn, torch::kReLU);
  if (gain_scale != 1.0) m->weight.mul_(gain_scale);
  if (m->options.bias()) m->bias.zero_();
}

void require_rank4(const torch::Tensor& x, int64_t channels, const char* what) {
  if (x.dim() != 4 || x.size(1) != channels)
    throw ShapeError(std::string(what) + ": expected [B," + std::to_string(channels) +
                     ",H,W], got " + c10::str(x.sizes()));
}

class BasicBlockImpl : public nn::Module {
 public:
  BasicBlockImpl(int64_t in, int64_t out, int64_t stride)
      : conv1_(register_module("conv1", conv(in, out, 3, stride, 1, false))),
        bn1_(register_module("bn1", nn::BatchNorm2d(out))),
        conv2_(register_module("conv2", conv(out, out, 3, 1, 1, false))),
        bn2_(register_module("bn2", nn::BatchNorm2d(out))) {
    kaiming(conv1_);
    kaiming(conv2_);
    if (stride != 1 || in != out) {
      downsample_ = register_module(
          "downsample", nn::Sequential(conv(in, out, 1, stride, 0, false), nn::BatchNorm2d(out)));
    }
  }

  torch::Tensor forward(const torch::Tensor& x) {
    auto y = torch::relu(bn1_(conv1_(x)));
    y = bn2_(conv2_(y));
    return torch::relu(y + (downsample_ ? downsample_->forward(x) : x));
  }

 private:
  nn::Conv2d conv1_;
  nn::BatchNorm2d bn1_;
  nn::Conv2d conv2_;
  nn::BatchNorm2d bn2_;
  nn::Sequential downsample_{nullptr};
};
TORCH_MODULE(BasicBlock);

nn::Sequential res_layer(int64_t in, int64_t out, int64_t stride) {
  return nn::Sequential(BasicBlock(in, out, stride), BasicBlock(out, out, 1));
}

}  // namespace

ResNet18TrunkImpl::ResNet18TrunkImpl()
    : conv1_(register_module("conv1", conv(3, 64, 7, 2, 3, false))),
      bn1_(register_module("bn1", nn::BatchNorm2d(64))),
      layer1_(register_module("layer1", res_layer(64, 64, 1))),
      layer2_(register_module("layer2", res_layer(64, 128, 2))),
      layer3_(register_module("layer3", res_layer(128, 256, 2))),
      layer4_(register_module("layer4", res_layer(256, 512, 2))) {
  kaiming(conv1_);
}

torch::Tensor ResNet18TrunkImpl::forward(const torch::Tensor& x) {
  auto y = torch::relu(bn1_(conv1_(x)));
  y = torch::max_pool2d(y, 3, 2, 1);
  return layer4_->forward(layer3_->forward(layer2_->forward(layer1_->forward(y))));
}

VisualNetImpl::VisualNetImpl(const NetConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.use_pretrained_visual) {
    trunk_ = register_module("trunk", ResNet18Trunk());
    return;
  }
  // Five stride-2 layers and one stride-1 layer: same /32 grid as the trunk.
  stack_ = nn::Sequential();
  int64_t in = 3;
  for (int i = 0; i < 6; ++i) {
    const int64_t out = std::max<int64_t>(16, cfg_.visual_channels >> (4 - std::min(i, 4)));
    auto c = conv(in, out, 3, i < 5 ? 2 : 1, 1);
    kaiming(c);
    stack_->push_back(c);
    if (i < 5) stack_->push_back(nn::ReLU());
    in = out;
  }
  register_module("stack", stack_);
}

torch::Tensor VisualNetImpl::forward(const torch::Tensor& frames) {
  require_rank4(frames, 3, "visual_forward");
  if (frames.size(2) != cfg_.frame_height || frames.size(3) != cfg_.frame_width)
    throw ShapeError("visual_forward: expected frames of " + std::to_string(cfg_.frame_height) +
                     "x" + std::to_string(cfg_.frame_width) + ", got " + c10::str(frames.sizes()));
  auto y = trunk_ ? trunk_->forward(frames) : stack_->forward(frames);
  return trunk_ ? y : torch::relu(y);
}

AttentionImpl::AttentionImpl(const NetConfig& cfg) : enabled_(cfg.use_attention) {
  if (!enabled_) return;
  conv1_ = register_module("conv1", conv(cfg.visual_channels, cfg.attention_hidden_channels, 3, 1, 1));
  conv2_ = register_module("conv2", conv(cfg.attention_hidden_channels, 1, 1, 1, 0));
  kaiming(conv1_);
  kaiming(conv2_);
}

Attended AttentionImpl::forward(const torch::Tensor& f_v) {
  if (!enabled_) {
    auto ones = torch::ones({f_v.size(0), 1, f_v.size(2), f_v.size(3)}, f_v.options());
    return {ones, f_v};
  }
  auto a = torch::sigmoid(conv2_(torch::relu(conv1_(f_v))));
  return {a, f_v * a};
}

VisualFlattenImpl::VisualFlattenImpl(const NetConfig& cfg)
    : reduce_(register_module("reduce", conv(cfg.visual_channels, cfg.visual_reduce_channels, 1, 1, 0, false))) {
  kaiming(reduce_);
  const auto [h, w] = cfg.visual_grid();
  size_ = static_cast<int64_t>(cfg.visual_reduce_channels) * h * w;
}

torch::Tensor VisualFlattenImpl::forward(const torch::Tensor& f_vb) {
  return reduce_(f_vb).flatten(1);
}

UNetEncoderImpl::UNetEncoderImpl(const NetConfig& cfg, int in_channels) : in_channels_(in_channels) {
  cfg.validate();
  int64_t in = in_channels;
  for (int i = 0; i < cfg.unet_depth; ++i) {
    auto c = conv(in, cfg.encoder_channels(i), 4, 2, 1);
    kaiming(c);
    convs_->push_back(c);
    in = cfg.encoder_channels(i);
  }
  register_module("convs", convs_);
}

std::vector<torch::Tensor> UNetEncoderImpl::forward(const torch::Tensor& x) {
  require_rank4(x, in_channels_, "unet_encoder");
  std::vector<torch::Tensor> levels;
  auto y = x;
  for (const auto& m : *convs_) {
    y = torch::leaky_relu(m->as<nn::Conv2d>()->forward(y), 0.2);
    levels.push_back(y);
  }
  return levels;
}

BackboneImpl::BackboneImpl(const NetConfig& cfg)
    : cfg_(cfg),
      encoder_(register_module("encoder", UNetEncoder(cfg, NetConfig::kBackboneInput))),
      flatten_(register_module("visual_flatten", VisualFlatten(cfg))) {
  embed_ = register_module("visual_embed", nn::Linear(flatten_->size(), cfg.visual_embedding));
  const int d = cfg.unet_depth;
  for (int j = d - 1; j >= 0; --j) {
    const int64_t in = j == d - 1 ? cfg.encoder_channels(d - 1) + cfg.visual_embedding
                                  : 2 * cfg.encoder_channels(j);
    const int64_t out = j > 0 ? cfg.encoder_channels(j - 1) : NetConfig::kBackboneOutput;
    auto u = up_conv(in, out);
    kaiming(u, j == 0 ? 0.1 : 1.0);
    ups_->push_back(u);
  }
  register_module("decoder", ups_);
}

std::vector<int64_t> BackboneImpl::activation_channels() const {
  std::vector<int64_t> out{cfg_.encoder_channels(cfg_.unet_depth - 1) + cfg_.visual_embedding};
  for (int j = cfg_.unet_depth - 1; j >= 1; --j) out.push_back(cfg_.encoder_channels(j - 1));
  return out;
}

BackboneOutput BackboneImpl::forward(const torch::Tensor& mono, const torch::Tensor& f_vb) {
  require_rank4(mono, NetConfig::kBackboneInput, "backbone_forward");
  if (mono.size(2) != cfg_.freq_bins || mono.size(3) != cfg_.frames)
    throw ShapeError("backbone_forward: expected " + std::to_string(cfg_.freq_bins) + "x" +
                     std::to_string(cfg_.frames) + " spectrograms, got " + c10::str(mono.sizes()));
  const auto levels = encoder_->forward(mono);
  const auto& bottom = levels.back();
  const auto b = mono.size(0);
  auto vis = embed_(flatten_(f_vb)).view({b, cfg_.visual_embedding, 1, 1});
  auto x = torch::cat({bottom, vis.expand({b, cfg_.visual_embedding, bottom.size(2), bottom.size(3)})}, 1);

  BackboneOutput out;
  out.activations.push_back(x);
  const int d = cfg_.unet_depth;
  for (int j = d - 1; j >= 0; --j) {
    auto y = ups_[d - 1 - j]->as<nn::ConvTranspose2d>()->forward(x);
    if (j == 0) {
      out.mask = y;
      break;
    }
    y = torch::relu(y);
    out.activations.push_back(y);
    x = torch::cat({y, levels[j - 1]}, 1);
  }
  return out;
}

APNetImpl::APNetImpl(const NetConfig& cfg, std::vector<int64_t> activation_channels)
    : cfg_(cfg),
      channels_(std::move(activation_channels)),
      flatten_(register_module("visual_flatten", VisualFlatten(cfg))) {
  if (channels_.empty()) throw ShapeError("apnet: no decoder levels");
  const int64_t k = cfg.association_copies, a = cfg.apnet_channels;
  for (std::size_t lvl = 0; lvl < channels_.size(); ++lvl) {
    projections_->push_back(nn::Linear(nn::LinearOptions(flatten_->size(), k * channels_[lvl]).bias(false)));
    auto f = conv(k * channels_[lvl], a, 1, 1, 0);
    kaiming(f);
    fusions_->push_back(f);
    if (lvl > 0) {
      auto u = up_conv(a, a);
      kaiming(u);
      ups_->push_back(u);
    }
  }
  register_module("projections", projections_);
  register_module("fusions", fusions_);
  register_module("ups", ups_);
  head_ = register_module("head", up_conv(a, NetConfig::kApnetOutput));
  kaiming(head_, 0.1);
  // Real parts start at one so the initial channel masks copy the mono input.
  torch::NoGradGuard guard;
  head_->bias.index_fill_(0, torch::tensor({0, 2}), 1.0);
}

torch::Tensor APNetImpl::associate(std::size_t level, const torch::Tensor& activation,
                                   const torch::Tensor& visual_flat) {
  const auto b = activation.size(0), c = activation.size(1);
  if (c != channels_.at(level))
    throw ShapeError("apnet: level " + std::to_string(level) + " has " + std::to_string(c) +
                     " channels, expected " + std::to_string(channels_[level]));
  const int64_t k = cfg_.association_copies;
  auto w = projections_[level]->as<nn::Linear>()->forward(visual_flat).view({b, k, c, 1, 1});
  return (activation.unsqueeze(1) * w).reshape({b, k * c, activation.size(2), activation.size(3)});
}

ChannelMasks APNetImpl::forward(const std::vector<torch::Tensor>& activations,
                                const torch::Tensor& f_vb) {
  if (activations.size() != channels_.size())
    throw ShapeError("apnet: got " + std::to_string(activations.size()) +
                     " decoder levels, expected " + std::to_string(channels_.size()));
  const auto vis = flatten_(f_vb);
  torch::Tensor p;
  for (std::size_t lvl = 0; lvl < channels_.size(); ++lvl) {
    auto f = torch::relu(fusions_[lvl]->as<nn::Conv2d>()->forward(associate(lvl, activations[lvl], vis)));
    p = lvl == 0 ? f : torch::relu(ups_[lvl - 1]->as<nn::ConvTranspose2d>()->forward(p)) + f;
  }
  auto out = head_(p);
  return {out.slice(1, 0, 2), out.slice(1, 2, 4)};
}

BinauralEncoderImpl::BinauralEncoderImpl(const NetConfig& cfg)
    : encoder_(register_module("encoder", UNetEncoder(cfg, NetConfig::kBinauralInput))) {}

torch::Tensor BinauralEncoderImpl::forward(const torch::Tensor& binaural) {
  return encoder_->forward(binaural).back();
}

ClassifierImpl::ClassifierImpl(const NetConfig& cfg) : cfg_(cfg) {
  const auto [bh, bw] = cfg.bottleneck_grid();
  pool_h_ = (bh + 1) / 2;
  pool_w_ = (bw + 1) / 2;
  conv_ = register_module("conv", conv(cfg.visual_channels + cfg.encoder_channels(cfg.unet_depth - 1),
                                       cfg.classifier_channels, 3, 1, 1));
  kaiming(conv_);
  fc_ = register_module("fc", nn::Linear(cfg.classifier_channels * pool_h_ * pool_w_, 1));
}

torch::Tensor ClassifierImpl::forward(const torch::Tensor& f_vf, const torch::Tensor& f_bin) {
  auto v = torch::adaptive_avg_pool2d(f_vf, {f_bin.size(2), f_bin.size(3)});
  auto x = torch::relu(conv_(torch::cat({v, f_bin}, 1)));
  x = torch::adaptive_avg_pool2d(x, {pool_h_, pool_w_}).flatten(1);
  return torch::sigmoid(fc_(x)).squeeze(1);
}

torch::Tensor apply_mask(const torch::Tensor& spec, const torch::Tensor& mask) {
  if (spec.sizes() != mask.sizes() || spec.dim() != 4 || spec.size(1) != 2)
    throw ShapeError("apply_mask: shapes " + c10::str(spec.sizes()) + " and " + c10::str(mask.sizes()));
  const auto sr = spec.select(1, 0), si = spec.select(1, 1);
  const auto mr = mask.select(1, 0), mi = mask.select(1, 1);
  return torch::stack({sr * mr - si * mi, sr * mi + si * mr}, 1);
}

torch::Tensor swap_channels(const torch::Tensor& binaural, const torch::Tensor& swap) {
  require_rank4(binaural, 4, "swap_channels");
  auto swapped = torch::cat({binaural.slice(1, 2, 4), binaural.slice(1, 0, 2)}, 1);
  return torch::where(swap.to(torch::kBool).view({-1, 1, 1, 1}), swapped, binaural);
}

}  // namespace m2b::model
