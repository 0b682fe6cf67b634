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

#include "m2b/data/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "m2b/error.hpp"

namespace m2b::data {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kManifestVersion = 1;

std::string portable_path(const fs::path& p, const fs::path& base) {
  const fs::path abs = fs::absolute(p).lexically_normal();
  const fs::path rel = abs.lexically_relative(fs::absolute(base).lexically_normal());
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return abs.generic_string();
}

ordered_json clip_to_json(const ClipRecord& c, const fs::path& base) {
  ordered_json j;
  j["id"] = c.id;
  j["video_path"] = portable_path(c.video_path, base);
  j["audio_path"] = portable_path(c.audio_path, base);
  j["duration"] = c.duration;
  j["frame_rate"] = c.frame_rate;
  if (c.azimuth) j["azimuth"] = *c.azimuth;
  return j;
}

ClipRecord clip_from_json(const ordered_json& j, const fs::path& base, std::size_t index) {
  const auto where = "clips[" + std::to_string(index) + "]";
  for (const char* key : {"video_path", "audio_path", "duration"})
    if (!j.contains(key)) throw DatasetError(where + " lacks '" + key + "'");
  ClipRecord c;
  const fs::path video = j.at("video_path").get<std::string>();
  const fs::path audio = j.at("audio_path").get<std::string>();
  c.video_path = video.is_absolute() ? video : base / video;
  c.audio_path = audio.is_absolute() ? audio : base / audio;
  c.duration = j.at("duration").get<double>();
  c.frame_rate = j.value("frame_rate", 10.0);
  c.id = j.contains("id") ? j.at("id").get<std::string>() : audio.stem().string();
  if (j.contains("azimuth")) c.azimuth = j.at("azimuth").get<double>();
  return c;
}

ordered_json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("missing dataset manifest", {path.string()});
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw DatasetError("malformed manifest '" + path.string() + "': " + e.what());
  }
}

void write_json(const fs::path& path, const ordered_json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

void ClipRecord::validate(double segment_seconds) const {
  if (duration + 1e-9 < segment_seconds)
    throw DatasetError("clip '" + id + "' is shorter than one segment");
  if (!(frame_rate > 0.0)) throw DatasetError("clip '" + id + "' has no frame rate");
}

std::vector<ClipRecord> read_manifest(const fs::path& path) {
  const auto j = read_json(path);
  if (!j.contains("clips") || !j.at("clips").is_array())
    throw DatasetError("manifest '" + path.string() + "' lacks a clips array");
  const fs::path base = path.parent_path();
  std::vector<ClipRecord> clips;
  std::size_t i = 0;
  for (const auto& c : j.at("clips")) clips.push_back(clip_from_json(c, base, i++));
  return clips;
}

void write_manifest(const fs::path& path, const std::vector<ClipRecord>& clips) {
  ordered_json j;
  j["version"] = kManifestVersion;
  j["clips"] = ordered_json::array();
  for (const auto& c : clips) j["clips"].push_back(clip_to_json(c, path.parent_path()));
  write_json(path, j);
}

void write_split_manifest(const fs::path& path, const DatasetSplits& splits) {
  ordered_json j;
  j["version"] = kManifestVersion;
  j["clips"] = ordered_json::array();
  const auto add = [&](const std::vector<ClipRecord>& clips, const char* split) {
    for (const auto& c : clips) {
      auto e = clip_to_json(c, path.parent_path());
      e["split"] = split;
      j["clips"].push_back(std::move(e));
    }
  };
  add(splits.train, "train");
  add(splits.val, "val");
  add(splits.test, "test");
  write_json(path, j);
}

bool manifest_has_splits(const fs::path& path) {
  const auto j = read_json(path);
  if (!j.contains("clips") || j.at("clips").empty()) return false;
  for (const auto& c : j.at("clips"))
    if (!c.contains("split")) return false;
  return true;
}

DatasetSplits read_split_manifest(const fs::path& path) {
  const auto j = read_json(path);
  DatasetSplits out;
  const fs::path base = path.parent_path();
  std::size_t i = 0;
  for (const auto& c : j.at("clips")) {
    const auto split = c.value("split", std::string{});
    auto record = clip_from_json(c, base, i++);
    if (split == "train") out.train.push_back(std::move(record));
    else if (split == "val") out.val.push_back(std::move(record));
    else if (split == "test") out.test.push_back(std::move(record));
    else throw DatasetError("clip '" + record.id + "' has no valid split field");
  }
  return out;
}

}  // namespace m2b::data
