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

#include "m2b/data/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>
#include <set>

#include "m2b/error.hpp"

namespace m2b::data {
namespace {

bool is_image_file(const std::filesystem::path& p) {
  static const std::set<std::string> exts{".png", ".jpg", ".jpeg", ".bmp"};
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), ::tolower);
  return exts.count(e) > 0;
}

}  // namespace

std::size_t nearest_frame_index(double time_seconds, double frame_rate,
                                std::size_t count) {
  if (count == 0) throw DatasetError("clip has no frames");
  const double idx = std::round(time_seconds * frame_rate);
  if (idx <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(idx), count - 1);
}

FrameSource::FrameSource(std::filesystem::path video_path, double frame_rate)
    : path_(std::move(video_path)), frame_rate_(frame_rate) {
  if (!(frame_rate_ > 0.0)) throw ConfigError("frame rate must be positive", "frame_rate");
  if (std::filesystem::is_directory(path_)) {
    is_directory_ = true;
    for (const auto& e : std::filesystem::directory_iterator(path_))
      if (e.is_regular_file() && is_image_file(e.path())) files_.push_back(e.path());
    std::sort(files_.begin(), files_.end());
    count_ = files_.size();
  } else if (std::filesystem::is_regular_file(path_)) {
    cv::VideoCapture cap(path_.string());
    if (!cap.isOpened()) throw DatasetError("cannot open video", {path_.string()});
    const double native_fps = cap.get(cv::CAP_PROP_FPS);
    const double native_frames = cap.get(cv::CAP_PROP_FRAME_COUNT);
    const double seconds = native_fps > 0 ? native_frames / native_fps : 0.0;
    count_ = static_cast<std::size_t>(std::floor(seconds * frame_rate_ + 1e-9));
  } else {
    throw DatasetError("frames not found", {path_.string()});
  }
  if (count_ == 0) throw DatasetError("clip has no frames", {path_.string()});
}

Image FrameSource::load(std::size_t index) const {
  if (index >= count_) throw DatasetError("frame index out of range", {path_.string()});
  if (is_directory_) return load_image(files_[index]);

  cv::VideoCapture cap(path_.string());
  if (!cap.isOpened()) throw DatasetError("cannot open video", {path_.string()});
  cap.set(cv::CAP_PROP_POS_MSEC, 1000.0 * timestamp(index));
  cv::Mat bgr;
  if (!cap.read(bgr) || bgr.empty())
    throw DatasetError("cannot decode frame " + std::to_string(index), {path_.string()});
  cv::Mat rgb, f;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  rgb.convertTo(f, CV_32FC3, 1.0 / 255.0);
  Image out(f.rows, f.cols);
  std::copy(f.ptr<float>(), f.ptr<float>() + out.pixels.size(), out.pixels.begin());
  return out;
}

void write_frame_directory(const std::filesystem::path& dir,
                           const std::vector<Image>& frames) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "%06zu.png", i);
    save_png(dir / name, frames[i]);
  }
}

}  // namespace m2b::data
