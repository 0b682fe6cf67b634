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

#include "m2b/infer/inference_config.hpp"

#include <cmath>

#include "m2b/error.hpp"

namespace m2b::infer {

std::string to_string(OutputSource s) {
  return s == OutputSource::ApnetChannels ? "apnet_channels" : "backbone_difference";
}

OutputSource output_source_from_string(const std::string& s) {
  if (s == "apnet_channels") return OutputSource::ApnetChannels;
  if (s == "backbone_difference") return OutputSource::BackboneDifference;
  throw ConfigError("unknown output source '" + s + "'", "output_source");
}

std::string to_string(OverlapCombine) { return "average"; }

OverlapCombine overlap_combine_from_string(const std::string& s) {
  if (s == "average") return OverlapCombine::Average;
  throw ConfigError("unknown overlap rule '" + s + "'", "overlap_combine");
}

void InferenceConfig::validate() const {
  if (!(window_seconds > 0.0)) throw ConfigError("must be positive", "window_seconds");
  if (!(hop_seconds > 0.0)) throw ConfigError("must be positive", "hop_seconds");
  if (hop_seconds > window_seconds) throw ConfigError("must not exceed window_seconds", "hop_seconds");
  if (batch_windows < 1) throw ConfigError("must be >= 1", "batch_windows");
}

std::int64_t InferenceConfig::window_samples(int sample_rate) const {
  return std::llround(window_seconds * sample_rate);
}

std::int64_t InferenceConfig::hop_samples(int sample_rate) const {
  return std::max<std::int64_t>(1, std::llround(hop_seconds * sample_rate));
}

config::Json to_json(const InferenceConfig& c) {
  return config::Json{{"window_seconds", c.window_seconds},
                      {"hop_seconds", c.hop_seconds},
                      {"overlap_combine", to_string(c.overlap_combine)},
                      {"output_source", to_string(c.output_source)},
                      {"batch_windows", c.batch_windows}};
}

InferenceConfig inference_config_from_json(const config::Json& j, const std::string& prefix) {
  InferenceConfig c;
  config::JsonReader r(j, prefix);
  std::string combine = to_string(c.overlap_combine), source = to_string(c.output_source);
  r.get("window_seconds", c.window_seconds)
      .get("hop_seconds", c.hop_seconds)
      .get("overlap_combine", combine)
      .get("output_source", source)
      .get("batch_windows", c.batch_windows);
  r.finish();
  config::validate_in(prefix, [&] {
    c.overlap_combine = overlap_combine_from_string(combine);
    c.output_source = output_source_from_string(source);
    c.validate();
  });
  return c;
}

}  // namespace m2b::infer
