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

#include "m2b/data/image.hpp"

#include <algorithm>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "m2b/error.hpp"

namespace m2b::data {
namespace {

cv::Mat to_mat(const Image& image) {
  cv::Mat m(image.height, image.width, CV_32FC3);
  std::copy(image.pixels.begin(), image.pixels.end(), m.ptr<float>());
  return m;
}

Image from_mat(const cv::Mat& m) {
  Image out(m.rows, m.cols);
  cv::Mat contiguous = m.isContinuous() ? m : m.clone();
  const float* p = contiguous.ptr<float>();
  std::copy(p, p + out.pixels.size(), out.pixels.begin());
  return out;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw DatasetError("cannot decode image", {path.string()});
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  cv::Mat f;
  rgb.convertTo(f, CV_32FC3, 1.0 / 255.0);
  return from_mat(f);
}

void save_png(const std::filesystem::path& path, const Image& image) {
  cv::Mat rgb = to_mat(image);
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  cv::Mat u8;
  bgr.convertTo(u8, CV_8UC3, 255.0);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), u8))
    throw std::runtime_error("cannot write image '" + path.string() + "'");
}

Image resize(const Image& image, int height, int width) {
  if (image.height == height && image.width == width) return image;
  cv::Mat out;
  const int interp = (height < image.height || width < image.width) ? cv::INTER_AREA
                                                                    : cv::INTER_LINEAR;
  cv::resize(to_mat(image), out, cv::Size(width, height), 0, 0, interp);
  return from_mat(out);
}

void FramePreprocess::validate() const {
  if (height <= 0 || width <= 0) throw ConfigError("frame size must be positive", "frame");
  for (float s : stddev)
    if (!(s > 0.0f)) throw ConfigError("stddev entries must be positive", "frame.stddev");
}

Image FramePreprocess::apply(const Image& rgb01) const {
  Image out = resize(rgb01, height, width);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const std::size_t c = i % 3;
    out.pixels[i] = (std::clamp(out.pixels[i], 0.0f, 1.0f) - mean[c]) / stddev[c];
  }
  return out;
}

}  // namespace m2b::data
