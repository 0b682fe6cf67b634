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
#include <span>

#include "m2b/data/clip_record.hpp"

namespace m2b::data {

// FAIR-Play layout: <root>/binaural_audios/<id>.wav, frames in
// <root>/frames/<id>/ or video in <root>/videos/<id>.mp4, and split lists in
// <root>/splits/split<k>/{train,val,test}.{h5,txt}. The h5 files hold an
// "audio" string dataset of audio paths; the text files hold one path or id
// per line. Every missing file is reported in one DatasetError.
DatasetSplits load_fairplay(const std::filesystem::path& root, int split_id);

// YouTube-ASMR style: <root>/manifest.json partitioned 80/10/10 by a stable
// hash of the clip id, so the result does not depend on manifest order.
DatasetSplits load_asmr(const std::filesystem::path& root);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
};

// Deterministic hash partition; sizes are round(n * fraction) for train and
// val, the remainder goes to test.
DatasetSplits split_by_hash(std::span<const ClipRecord> clips,
                            SplitFractions fractions = {});

// Reads a manifest; uses its "split" fields when present, otherwise
// split_by_hash with the given fractions.
DatasetSplits load_manifest_splits(const std::filesystem::path& manifest,
                                   SplitFractions fractions = {});

}  // namespace m2b::data
