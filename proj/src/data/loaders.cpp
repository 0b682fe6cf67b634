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

#include "m2b/data/loaders.hpp"

#include <hdf5.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>

#include "m2b/data/manifest.hpp"
#include "m2b/data/rng.hpp"
#include "m2b/dsp/wav_io.hpp"
#include "m2b/error.hpp"

namespace m2b::data {
namespace {

namespace fs = std::filesystem;

// RAII for HDF5 identifiers.
class H5Handle {
 public:
  H5Handle(hid_t id, herr_t (*close)(hid_t)) : id_(id), close_(close) {}
  ~H5Handle() {
    if (id_ >= 0) close_(id_);
  }
  H5Handle(const H5Handle&) = delete;
  H5Handle& operator=(const H5Handle&) = delete;
  hid_t get() const { return id_; }
  explicit operator bool() const { return id_ >= 0; }

 private:
  hid_t id_;
  herr_t (*close_)(hid_t);
};

std::vector<std::string> read_h5_strings(const fs::path& path, const char* dataset) {
  H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);
  H5Handle file(H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
  if (!file) throw DatasetError("cannot open split file", {path.string()});
  H5Handle data(H5Dopen2(file.get(), dataset, H5P_DEFAULT), H5Dclose);
  if (!data) throw DatasetError(std::string("split file lacks dataset '") + dataset + "'", {path.string()});
  H5Handle type(H5Dget_type(data.get()), H5Tclose);
  H5Handle space(H5Dget_space(data.get()), H5Sclose);
  if (H5Tget_class(type.get()) != H5T_STRING)
    throw DatasetError("split dataset is not a string array", {path.string()});
  const auto n = static_cast<std::size_t>(H5Sget_simple_extent_npoints(space.get()));
  std::vector<std::string> out;
  out.reserve(n);

  H5Handle mem(H5Tcopy(H5T_C_S1), H5Tclose);
  if (H5Tis_variable_str(type.get()) > 0) {
    H5Tset_size(mem.get(), H5T_VARIABLE);
    std::vector<char*> buf(n, nullptr);
    if (H5Dread(data.get(), mem.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, buf.data()) < 0)
      throw DatasetError("cannot read split dataset", {path.string()});
    for (char* s : buf) out.emplace_back(s ? s : "");
    H5Dvlen_reclaim(mem.get(), space.get(), H5P_DEFAULT, buf.data());
  } else {
    const std::size_t width = H5Tget_size(type.get());
    H5Tset_size(mem.get(), width);
    std::vector<char> buf(n * width, '\0');
    if (H5Dread(data.get(), mem.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, buf.data()) < 0)
      throw DatasetError("cannot read split dataset", {path.string()});
    for (std::size_t i = 0; i < n; ++i) {
      std::string s(buf.data() + i * width, width);
      s.erase(std::find(s.begin(), s.end(), '\0'), s.end());
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::string> read_text_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace

DatasetSplits split_by_hash(std::span<const ClipRecord> clips, SplitFractions fractions) {
  if (fractions.train < 0 || fractions.val < 0 || fractions.train + fractions.val > 1.0)
    throw ConfigError("invalid split fractions", "split");
  std::vector<std::size_t> order(clips.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ha = stable_hash(clips[a].id), hb = stable_hash(clips[b].id);
    return ha != hb ? ha < hb : clips[a].id < clips[b].id;
  });
  const auto n = static_cast<double>(clips.size());
  const auto n_train = static_cast<std::size_t>(std::llround(n * fractions.train));
  const auto n_val = std::min(clips.size() - n_train,
                              static_cast<std::size_t>(std::llround(n * fractions.val)));
  DatasetSplits out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& c = clips[order[k]];
    if (k < n_train) out.train.push_back(c);
    else if (k < n_train + n_val) out.val.push_back(c);
    else out.test.push_back(c);
  }
  return out;
}

DatasetSplits load_fairplay(const fs::path& root, int split_id) {
  if (!fs::is_directory(root))
    throw DatasetError("missing dataset: FAIR-Play root does not exist", {root.string()});
  const fs::path split_dir = root / "splits" / ("split" + std::to_string(split_id));

  std::vector<std::string> missing;
  const auto list_for = [&](const char* name) -> std::vector<std::string> {
    const fs::path h5 = split_dir / (std::string(name) + ".h5");
    const fs::path txt = split_dir / (std::string(name) + ".txt");
    if (fs::exists(h5)) return read_h5_strings(h5, "audio");
    if (fs::exists(txt)) return read_text_lines(txt);
    missing.push_back(h5.string() + " (or .txt)");
    return {};
  };

  DatasetSplits out;
  const auto resolve = [&](const std::vector<std::string>& entries,
                           std::vector<ClipRecord>& dst) {
    for (const auto& entry : entries) {
      ClipRecord c;
      c.id = fs::path(entry).stem().string();
      c.audio_path = root / "binaural_audios" / (c.id + ".wav");
      const fs::path frames = root / "frames" / c.id;
      const fs::path video = root / "videos" / (c.id + ".mp4");
      c.video_path = fs::is_directory(frames) ? frames : video;
      if (!fs::exists(c.audio_path)) missing.push_back(c.audio_path.string());
      if (!fs::exists(c.video_path)) missing.push_back(frames.string() + " (or " + video.string() + ")");
      if (fs::exists(c.audio_path)) c.duration = dsp::read_wav_info(c.audio_path).duration();
      dst.push_back(std::move(c));
    }
  };
  resolve(list_for("train"), out.train);
  resolve(list_for("val"), out.val);
  resolve(list_for("test"), out.test);
  if (!missing.empty())
    throw DatasetError("missing dataset files under '" + root.string() + "'", missing);
  return out;
}

DatasetSplits load_asmr(const fs::path& root) {
  const fs::path manifest = root / "manifest.json";
  if (!fs::exists(manifest))
    throw DatasetError("missing dataset: no manifest", {manifest.string()});
  const auto clips = read_manifest(manifest);
  std::vector<std::string> missing;
  for (const auto& c : clips) {
    if (!fs::exists(c.audio_path)) missing.push_back(c.audio_path.string());
    if (!fs::exists(c.video_path)) missing.push_back(c.video_path.string());
  }
  if (!missing.empty()) throw DatasetError("missing dataset files", missing);
  return split_by_hash(clips, {0.8, 0.1});
}

DatasetSplits load_manifest_splits(const fs::path& manifest, SplitFractions fractions) {
  if (manifest_has_splits(manifest)) return read_split_manifest(manifest);
  return split_by_hash(read_manifest(manifest), fractions);
}

}  // namespace m2b::data
