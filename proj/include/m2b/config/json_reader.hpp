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

#include <set>
#include <string>

#include "json.hpp"
#include "m2b/error.hpp"

namespace m2b::config {

using Json = nlohmann::ordered_json;

// Strict reader over one JSON object: typed optional fields, and finish()
// rejects any key that was not consumed.
class JsonReader {
 public:
  JsonReader(const Json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ConfigError("expected an object", prefix_);
  }

  template <class T>
  JsonReader& get(const std::string& key, T& out) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) {
      try {
        out = it->template get<T>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("wrong type: ") + e.what(), path(key));
      }
    }
    return *this;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& child(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key", path(it.key()));
  }

 private:
  const Json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

// Re-raises a validation failure with the block prefix prepended to its key.
template <class F>
void validate_in(const std::string& prefix, F&& validate) {
  try {
    validate();
  } catch (const ConfigError& e) {
    if (e.key().empty()) throw ConfigError(e.what(), prefix);
    const std::string what = e.what();
    throw ConfigError(what.substr(e.key().size() + 2), prefix + "." + e.key());
  }
}

}  // namespace m2b::config
