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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "m2b/dsp/waveform.hpp"

namespace m2b::dsp {

enum class SampleFormat { Pcm16, Float32 };

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  std::int64_t frames = 0;
  double duration() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

struct WavData {
  int sample_rate = 0;
  std::vector<std::vector<double>> channels;
};

// Header-only probe; throws std::runtime_error naming the file on failure.
WavInfo read_wav_info(const std::filesystem::path& path);

// Reads 8/16/24/32-bit PCM and 32/64-bit float WAV files.
WavData read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path,
               const std::vector<std::vector<double>>& channels,
               int sample_rate, SampleFormat format = SampleFormat::Float32);

// Loads exactly one channel (mixing down when the file has several) at
// target_rate, resampling when needed.
Waveform load_mono(const std::filesystem::path& path, int target_rate);

// Loads a two-channel file at target_rate. Throws unless it has 2 channels.
BinauralClip load_binaural(const std::filesystem::path& path, int target_rate);

void save_binaural(const std::filesystem::path& path, const BinauralClip& clip,
                   SampleFormat format = SampleFormat::Float32);

}  // namespace m2b::dsp
