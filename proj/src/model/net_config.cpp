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

#include "m2b/model/net_config.hpp"

#include <algorithm>

#include "m2b/error.hpp"

namespace m2b::model {
namespace {

int halve_ceil(int n, int times) {
  for (int i = 0; i < times; ++i) n = (n + 1) / 2;
  return n;
}

void require_positive(int v, const char* key) {
  if (v <= 0) throw ConfigError("must be positive", key);
}

}  // namespace

void NetConfig::validate() const {
  require_positive(freq_bins, "freq_bins");
  require_positive(frames, "frames");
  require_positive(frame_height, "frame_height");
  require_positive(frame_width, "frame_width");
  require_positive(visual_channels, "visual_channels");
  require_positive(attention_hidden_channels, "attention_hidden_channels");
  require_positive(base_channels, "base_channels");
  require_positive(visual_reduce_channels, "visual_reduce_channels");
  require_positive(visual_embedding, "visual_embedding");
  require_positive(apnet_channels, "apnet_channels");
  require_positive(association_copies, "association_copies");
  require_positive(classifier_channels, "classifier_channels");
  if (unet_depth < 1 || unet_depth > 8) throw ConfigError("must lie in [1, 8]", "unet_depth");
  const int div = 1 << unet_depth;
  if (freq_bins % div != 0)
    throw ConfigError("must be divisible by 2^unet_depth = " + std::to_string(div), "freq_bins");
  if (frames % div != 0)
    throw ConfigError("must be divisible by 2^unet_depth = " + std::to_string(div), "frames");
  if (use_pretrained_visual && visual_channels != 512)
    throw ConfigError("must be 512 with the pretrained residual trunk", "visual_channels");
}

int NetConfig::encoder_channels(int level) const {
  return base_channels << std::min(level, 3);
}

std::pair<int, int> NetConfig::visual_grid() const {
  return {halve_ceil(frame_height, 5), halve_ceil(frame_width, 5)};
}

std::pair<int, int> NetConfig::bottleneck_grid() const {
  return {freq_bins >> unet_depth, frames >> unet_depth};
}

config::Json to_json(const NetConfig& c) {
  return config::Json{{"freq_bins", c.freq_bins},
                      {"frames", c.frames},
                      {"frame_height", c.frame_height},
                      {"frame_width", c.frame_width},
                      {"visual_channels", c.visual_channels},
                      {"use_pretrained_visual", c.use_pretrained_visual},
                      {"pretrained_visual_path", c.pretrained_visual_path},
                      {"attention_hidden_channels", c.attention_hidden_channels},
                      {"use_attention", c.use_attention},
                      {"unet_depth", c.unet_depth},
                      {"base_channels", c.base_channels},
                      {"visual_reduce_channels", c.visual_reduce_channels},
                      {"visual_embedding", c.visual_embedding},
                      {"apnet_channels", c.apnet_channels},
                      {"association_copies", c.association_copies},
                      {"classifier_channels", c.classifier_channels}};
}

NetConfig net_config_from_json(const config::Json& j, const std::string& prefix) {
  NetConfig c;
  config::JsonReader r(j, prefix);
  r.get("freq_bins", c.freq_bins)
      .get("frames", c.frames)
      .get("frame_height", c.frame_height)
      .get("frame_width", c.frame_width)
      .get("visual_channels", c.visual_channels)
      .get("use_pretrained_visual", c.use_pretrained_visual)
      .get("pretrained_visual_path", c.pretrained_visual_path)
      .get("attention_hidden_channels", c.attention_hidden_channels)
      .get("use_attention", c.use_attention)
      .get("unet_depth", c.unet_depth)
      .get("base_channels", c.base_channels)
      .get("visual_reduce_channels", c.visual_reduce_channels)
      .get("visual_embedding", c.visual_embedding)
      .get("apnet_channels", c.apnet_channels)
      .get("association_copies", c.association_copies)
      .get("classifier_channels", c.classifier_channels);
  r.finish();
  config::validate_in(prefix, [&] { c.validate(); });
  return c;
}

}  // namespace m2b::model
