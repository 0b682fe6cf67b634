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

#include <filesystem>
#include <vector>

#include "m2b/data/clip_record.hpp"

namespace m2b::data {

// JSON manifest: {"version": 1, "clips": [{"id", "video_path", "audio_path",
// "duration", "frame_rate", "azimuth"?, "split"?}]}. Relative paths resolve
// against the manifest's directory.
std::vector<ClipRecord> read_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ClipRecord>& clips);

// Same format with a "split" field ("train" | "val" | "test") per clip.
void write_split_manifest(const std::filesystem::path& path,
                          const DatasetSplits& splits);
DatasetSplits read_split_manifest(const std::filesystem::path& path);

// True when every clip carries a split field.
bool manifest_has_splits(const std::filesystem::path& path);

}  // namespace m2b::data
