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

#include <array>
#include <filesystem>
#include <vector>

namespace m2b::data {

// Interleaved RGB float image, row-major [height x width x 3].
struct Image {
  int height = 0;
  int width = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(int h, int w, float fill = 0.0f)
      : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, fill) {}

  float& at(int y, int x, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  float at(int y, int x, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  bool empty() const { return pixels.empty(); }
};

// Loads any OpenCV-readable image as RGB in [0, 1].
Image load_image(const std::filesystem::path& path);

// Writes an RGB image with values in [0, 1] (clamped) as 8-bit PNG.
void save_png(const std::filesystem::path& path, const Image& image);

Image resize(const Image& image, int height, int width);

// Fixed frame preprocessing: resize, scale to [0, 1], per-channel normalize.
struct FramePreprocess {
  int height = 224;
  int width = 448;
  std::array<float, 3> mean{0.485f, 0.456f, 0.406f};
  std::array<float, 3> stddev{0.229f, 0.224f, 0.225f};

  void validate() const;
  Image apply(const Image& rgb01) const;

  friend bool operator==(const FramePreprocess&, const FramePreprocess&) = default;
};

}  // namespace m2b::data
