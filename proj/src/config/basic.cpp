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

#include "m2b/config/basic.hpp"

namespace m2b::config {

Json to_json(const dsp::AudioConfig& c) {
  return Json{{"sample_rate", c.sample_rate},
              {"window_size", c.window_size},
              {"hop_length", c.hop_length},
              {"segment_seconds", c.segment_seconds},
              {"window", dsp::to_string(c.window)}};
}

dsp::AudioConfig audio_config_from_json(const Json& j, const std::string& prefix) {
  dsp::AudioConfig c;
  JsonReader r(j, prefix);
  std::string window = dsp::to_string(c.window);
  r.get("sample_rate", c.sample_rate)
      .get("window_size", c.window_size)
      .get("hop_length", c.hop_length)
      .get("segment_seconds", c.segment_seconds)
      .get("window", window);
  r.finish();
  validate_in(prefix, [&] {
    c.window = dsp::window_function_from_string(window);
    c.validate();
  });
  return c;
}

Json to_json(const data::FramePreprocess& c) {
  return Json{{"height", c.height},
              {"width", c.width},
              {"mean", c.mean},
              {"stddev", c.stddev}};
}

data::FramePreprocess frame_preprocess_from_json(const Json& j, const std::string& prefix) {
  data::FramePreprocess c;
  JsonReader r(j, prefix);
  r.get("height", c.height).get("width", c.width).get("mean", c.mean).get("stddev", c.stddev);
  r.finish();
  validate_in(prefix, [&] { c.validate(); });
  return c;
}

}  // namespace m2b::config
