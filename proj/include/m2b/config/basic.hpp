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

#include "m2b/config/json_reader.hpp"
#include "m2b/data/image.hpp"
#include "m2b/dsp/audio_config.hpp"

namespace m2b::config {

Json to_json(const dsp::AudioConfig& c);
dsp::AudioConfig audio_config_from_json(const Json& j, const std::string& prefix = "audio");

Json to_json(const data::FramePreprocess& c);
data::FramePreprocess frame_preprocess_from_json(const Json& j,
                                                 const std::string& prefix = "frames");

}  // namespace m2b::config
