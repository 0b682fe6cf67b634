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

#include <stdexcept>
#include <string>
#include <vector>

namespace m2b {

// Mismatched tensor, spectrogram or waveform dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid configuration value; key() names the offending field when known.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : std::invalid_argument(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Missing or unreadable dataset content. missing() lists every absent file.
class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& message,
                        std::vector<std::string> missing = {})
      : std::runtime_error(format(message, missing)),
        missing_(std::move(missing)) {}

  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  static std::string format(const std::string& message,
                            const std::vector<std::string>& missing) {
    std::string out = message;
    for (const auto& m : missing) out += "\n  missing: " + m;
    return out;
  }

  std::vector<std::string> missing_;
};

// Failure raised from inside the optimization loop.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace m2b
