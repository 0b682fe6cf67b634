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

#include "m2b/train/run_config.hpp"

#include <fstream>

#include "m2b/config/basic.hpp"
#include "m2b/data/loaders.hpp"
#include "m2b/error.hpp"

namespace m2b::train {

using config::Json;
using config::JsonReader;

std::string to_string(DataSource s) {
  switch (s) {
    case DataSource::Manifest: return "manifest";
    case DataSource::FairPlay: return "fairplay";
    case DataSource::Asmr: return "asmr";
  }
  return "manifest";
}

DataSource data_source_from_string(const std::string& s) {
  if (s == "manifest") return DataSource::Manifest;
  if (s == "fairplay") return DataSource::FairPlay;
  if (s == "asmr") return DataSource::Asmr;
  throw ConfigError("unknown data source '" + s + "' (manifest, fairplay, asmr)", "source");
}

void DataConfig::validate() const {
  if (split < 1) throw ConfigError("must be >= 1", "split");
  if (train_fraction <= 0.0 || val_fraction < 0.0 || train_fraction + val_fraction > 1.0)
    throw ConfigError("fractions must satisfy train > 0, val >= 0, train + val <= 1", "train_fraction");
}

void RunConfig::validate() const {
  config::validate_in("audio", [&] { audio.validate(); });
  config::validate_in("frames", [&] { frames.validate(); });
  config::validate_in("net", [&] { net.validate(); });
  config::validate_in("train", [&] { train.validate(); });
  config::validate_in("loss_weights", [&] { loss_weights.validate(); });
  config::validate_in("inference", [&] { inference.validate(); });
  config::validate_in("data", [&] { data.validate(); });
  if (net.freq_bins != audio.model_bins())
    throw ConfigError("must equal audio.window_size / 2 = " + std::to_string(audio.model_bins()),
                      "net.freq_bins");
  const auto t = audio.frame_count(audio.segment_samples());
  if (net.frames != t)
    throw ConfigError("must equal the segment's STFT frame count " + std::to_string(t), "net.frames");
  if (net.frame_height != frames.height || net.frame_width != frames.width)
    throw ConfigError("must match frames.height x frames.width", "net.frame_height");
  if (inference.window_samples(audio.sample_rate) != audio.segment_samples())
    throw ConfigError("must equal audio.segment_seconds", "inference.window_seconds");
}

Json to_json(const DataConfig& c) {
  return {{"source", to_string(c.source)},
          {"root", c.root.string()},
          {"split", c.split},
          {"train_fraction", c.train_fraction},
          {"val_fraction", c.val_fraction}};
}

DataConfig data_config_from_json(const Json& j, const std::string& prefix) {
  DataConfig c;
  JsonReader r(j, prefix);
  std::string source = to_string(c.source), root;
  r.get("source", source).get("root", root).get("split", c.split);
  r.get("train_fraction", c.train_fraction).get("val_fraction", c.val_fraction);
  r.finish();
  config::validate_in(prefix, [&] { c.source = data_source_from_string(source); });
  c.root = root;
  return c;
}

Json to_json(const RunConfig& c) {
  return {{"audio", config::to_json(c.audio)},
          {"frames", config::to_json(c.frames)},
          {"net", model::to_json(c.net)},
          {"train", to_json(c.train)},
          {"loss_weights", losses::to_json(c.loss_weights)},
          {"inference", infer::to_json(c.inference)},
          {"data", to_json(c.data)}};
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  JsonReader r(j, "");
  if (r.has("audio")) c.audio = config::audio_config_from_json(r.child("audio"));
  if (r.has("frames")) c.frames = config::frame_preprocess_from_json(r.child("frames"));
  if (r.has("net")) c.net = model::net_config_from_json(r.child("net"));
  if (r.has("train")) c.train = train_config_from_json(r.child("train"));
  if (r.has("loss_weights")) c.loss_weights = losses::loss_weights_from_json(r.child("loss_weights"));
  if (r.has("inference")) c.inference = infer::inference_config_from_json(r.child("inference"));
  if (r.has("data")) c.data = data_config_from_json(r.child("data"));
  r.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string(), "config");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "config");
  }
  return run_config_from_json(j);
}

void save_run_config(const std::filesystem::path& path, const RunConfig& c) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << to_json(c).dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

RunConfig apply_overrides(const RunConfig& base, std::span<const std::string> overrides) {
  auto j = to_json(base);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value", o);
    const auto key = o.substr(0, eq), text = o.substr(eq + 1);
    Json* node = &j;
    std::size_t pos = 0;
    while (true) {
      const auto dot = key.find('.', pos);
      const auto part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
      if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown key", key);
      node = &(*node)[part];
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    if (node->is_object()) throw ConfigError("override must name a field, not a block", key);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded() || (node->is_string() && !value.is_string())) value = text;
    *node = value;
  }
  return run_config_from_json(j);
}

data::DatasetSplits load_splits(const DataConfig& c) {
  if (c.root.empty())
    throw DatasetError("no dataset configured; set data.root (e.g. --set data.root=<dir>/manifest.json "
                       "after running 'm2b synth-data')");
  if (!std::filesystem::exists(c.root))
    throw DatasetError("dataset not found; run 'm2b synth-data' or point data.root at a dataset",
                       {c.root.string()});
  switch (c.source) {
    case DataSource::FairPlay: return data::load_fairplay(c.root, c.split);
    case DataSource::Asmr: return data::load_asmr(c.root);
    case DataSource::Manifest: break;
  }
  return data::load_manifest_splits(c.root, {c.train_fraction, c.val_fraction});
}

}  // namespace m2b::train
