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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "m2b/data/clip_store.hpp"
#include "m2b/infer/binauralize.hpp"

namespace m2b::infer {

struct ClipMetrics {
  std::string id;
  double stft_distance = 0.0;
  double env_distance = 0.0;
};

struct MetricsReport {
  std::vector<ClipMetrics> per_clip;
  double mean_stft_distance = 0.0;
  double mean_env_distance = 0.0;
  std::optional<double> accuracy;     // flip classifier, when measured
  std::vector<std::string> skipped;   // clips that failed to decode

  // Recomputes the aggregate means from per_clip.
  void finalize();
};

void write_report_csv(const std::filesystem::path& path, const MetricsReport& r);
void write_report_json(const std::filesystem::path& path, const MetricsReport& r);
MetricsReport read_report_json(const std::filesystem::path& path);

FrameProvider frame_provider(const data::ClipStore& store, std::size_t clip);

// Binauralizes every clip from its mono mix and scores it against the
// reference. Unreadable clips are skipped and listed.
MetricsReport evaluate(Predictor& predictor, const data::ClipStore& test,
                       const InferenceConfig& cfg);

// Flip accuracy on the centered segment of each clip, both orientations.
double flip_accuracy(model::BinauralNetImpl& net, const data::ClipStore& clips,
                     torch::Device device = torch::kCPU);

// Energy-ordering agreement: fraction of clips whose predicted louder
// channel matches the reference's, over clips passing the filter.
struct ChannelOrdering {
  std::size_t considered = 0;
  std::size_t matched = 0;
  double rate() const { return considered ? double(matched) / considered : 0.0; }
};
ChannelOrdering channel_ordering(Predictor& predictor, const data::ClipStore& clips,
                                 const InferenceConfig& cfg,
                                 const std::function<bool(const data::ClipRecord&)>& filter);

}  // namespace m2b::infer
