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

namespace m2b::data {

// One video clip with its two-channel audio.
// video_path is a directory of frame images (sorted by name, one per
// 1/frame_rate seconds) or a video file.
struct ClipRecord {
  std::string id;
  std::filesystem::path video_path;
  std::filesystem::path audio_path;
  double duration = 0.0;
  double frame_rate = 10.0;
  // Ground-truth source azimuth in radians, known for synthetic scenes.
  std::optional<double> azimuth;

  // Throws DatasetError if the duration is below one segment.
  void validate(double segment_seconds) const;

  friend bool operator==(const ClipRecord&, const ClipRecord&) = default;
};

struct DatasetSplits {
  std::vector<ClipRecord> train;
  std::vector<ClipRecord> val;
  std::vector<ClipRecord> test;

  friend bool operator==(const DatasetSplits&, const DatasetSplits&) = default;
};

}  // namespace m2b::data
