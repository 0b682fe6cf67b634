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

#include <cstddef>
#include <filesystem>
#include <vector>

#include "m2b/data/image.hpp"

namespace m2b::data {

// Index of the frame whose timestamp (index / frame_rate) is nearest to
// time_seconds, clamped to [0, count).
std::size_t nearest_frame_index(double time_seconds, double frame_rate,
                                std::size_t count);

// Frames of one clip, either pre-extracted image files or a video decoded
// at frame_rate. Frame i has timestamp i / frame_rate.
class FrameSource {
 public:
  FrameSource(std::filesystem::path video_path, double frame_rate);

  std::size_t count() const noexcept { return count_; }
  double frame_rate() const noexcept { return frame_rate_; }
  double timestamp(std::size_t i) const { return static_cast<double>(i) / frame_rate_; }

  // RGB in [0, 1]; throws DatasetError naming the file on decode failure.
  Image load(std::size_t index) const;

 private:
  std::filesystem::path path_;
  double frame_rate_;
  bool is_directory_ = false;
  std::vector<std::filesystem::path> files_;
  std::size_t count_ = 0;
};

// Writes frames as <dir>/000000.png, 000001.png, ...
void write_frame_directory(const std::filesystem::path& dir,
                           const std::vector<Image>& frames);

}  // namespace m2b::data
