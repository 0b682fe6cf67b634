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

#include "m2b/model/checkpoint.hpp"

#include <fstream>
#include <iterator>
#include <map>

#include "m2b/config/basic.hpp"
#include "m2b/error.hpp"

namespace m2b::model {
namespace {

namespace fs = std::filesystem;

std::vector<char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open checkpoint", {path.string()});
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<char>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

c10::IValue lookup(const c10::impl::GenericDict& d, const std::string& key, const fs::path& path) {
  auto it = d.find(key);
  if (it == d.end()) throw ConfigError("checkpoint lacks '" + key + "' (" + path.string() + ")", key);
  return it->value();
}

}  // namespace

std::vector<std::pair<std::string, torch::Tensor>> named_state(const torch::nn::Module& m) {
  std::vector<std::pair<std::string, torch::Tensor>> out;
  for (const auto& p : m.named_parameters()) out.emplace_back(p.key(), p.value().detach());
  for (const auto& b : m.named_buffers()) out.emplace_back(b.key(), b.value().detach());
  return out;
}

void load_state(torch::nn::Module& m,
                const std::vector<std::pair<std::string, torch::Tensor>>& state) {
  std::map<std::string, torch::Tensor> src(state.begin(), state.end());
  torch::NoGradGuard guard;
  std::vector<std::string> missing;
  for (auto& [name, dst] : named_state(m)) {
    auto it = src.find(name);
    if (it == src.end()) {
      missing.push_back(name);
      continue;
    }
    if (it->second.sizes() != dst.sizes())
      throw ShapeError("tensor '" + name + "': stored " + c10::str(it->second.sizes()) +
                       ", expected " + c10::str(dst.sizes()));
    dst.copy_(it->second.to(dst.options()));
  }
  if (!missing.empty()) {
    std::string msg = "missing tensors:";
    for (const auto& n : missing) msg += " " + n;
    throw ShapeError(msg);
  }
}

void save_checkpoint(const fs::path& path, BinauralNetImpl& model,
                     const dsp::AudioConfig& audio, const config::Json& meta) {
  c10::Dict<std::string, at::Tensor> tensors;
  for (const auto& [name, t] : named_state(model))
    tensors.insert(name, t.to(torch::kCPU).contiguous().clone());
  c10::impl::GenericDict root(c10::StringType::get(), c10::AnyType::get());
  root.insert("schema_version", static_cast<int64_t>(kCheckpointSchema));
  root.insert("net_config", to_json(model.config()).dump());
  root.insert("audio_config", config::to_json(audio).dump());
  root.insert("meta", meta.dump());
  root.insert("tensors", tensors);
  write_bytes(path, torch::pickle_save(root));
}

LoadedModel load_checkpoint(const fs::path& path) {
  const auto ivalue = torch::pickle_load(read_bytes(path));
  if (!ivalue.isGenericDict()) throw ConfigError("not a checkpoint archive: " + path.string());
  const auto root = ivalue.toGenericDict();
  const auto version = lookup(root, "schema_version", path).toInt();
  if (version != kCheckpointSchema)
    throw ConfigError("unsupported schema " + std::to_string(version), "schema_version");

  LoadedModel out;
  out.net = net_config_from_json(config::Json::parse(lookup(root, "net_config", path).toStringRef()));
  out.audio = config::audio_config_from_json(
      config::Json::parse(lookup(root, "audio_config", path).toStringRef()));
  out.meta = config::Json::parse(lookup(root, "meta", path).toStringRef());

  std::vector<std::pair<std::string, torch::Tensor>> state;
  for (const auto& e : lookup(root, "tensors", path).toGenericDict())
    state.emplace_back(e.key().toStringRef(), e.value().toTensor());
  out.model = BinauralNet(out.net);
  load_state(*out.model, state);
  return out;
}

void load_visual_asset(VisualNetImpl& visual, const fs::path& path) {
  if (!visual.pretrained()) throw ConfigError("visual net has no residual trunk", "use_pretrained_visual");
  if (path.empty() || !fs::exists(path))
    throw DatasetError("missing pretrained visual asset", {path.string()});
  const auto ivalue = torch::pickle_load(read_bytes(path));
  if (!ivalue.isGenericDict()) throw ConfigError("visual asset is not a tensor dict: " + path.string());
  std::vector<std::pair<std::string, torch::Tensor>> state;
  for (const auto& e : ivalue.toGenericDict()) {
    const auto& name = e.key().toStringRef();
    if (name.rfind("fc.", 0) == 0) continue;
    state.emplace_back(name, e.value().toTensor());
  }
  load_state(*visual.trunk(), state);
}

}  // namespace m2b::model
