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

#include <atomic>
#include <iostream>
#include <string_view>

namespace m2b::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

inline std::atomic<Level>& threshold() {
  static std::atomic<Level> level{Level::Info};
  return level;
}

inline void write(Level level, std::string_view tag, std::string_view msg) {
  if (level < threshold().load()) return;
  std::clog << "[m2b] " << tag << ": " << msg << '\n';
}

inline void debug(std::string_view msg) { write(Level::Debug, "debug", msg); }
inline void info(std::string_view msg) { write(Level::Info, "info", msg); }
inline void warn(std::string_view msg) { write(Level::Warn, "warn", msg); }

}  // namespace m2b::log
