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

#include "m2b/dsp/wav_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "m2b/dsp/resample.hpp"

namespace m2b::dsp {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

struct ParsedHeader {
  FormatChunk fmt;
  std::streamoff data_offset = 0;
  std::uint32_t data_bytes = 0;
};

std::uint32_t le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error("wav '" + path.string() + "': " + why);
}

ParsedHeader parse_header(std::ifstream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 12> riff{};
  if (!in.read(reinterpret_cast<char*>(riff.data()), riff.size()))
    fail(path, "truncated header");
  if (std::memcmp(riff.data(), "RIFF", 4) != 0 || std::memcmp(riff.data() + 8, "WAVE", 4) != 0)
    fail(path, "not a RIFF/WAVE file");

  ParsedHeader header;
  bool have_fmt = false;
  for (;;) {
    std::array<unsigned char, 8> chunk{};
    if (!in.read(reinterpret_cast<char*>(chunk.data()), chunk.size()))
      fail(path, "no data chunk");
    const std::uint32_t size = le32(chunk.data() + 4);
    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      std::vector<unsigned char> body(size);
      if (!in.read(reinterpret_cast<char*>(body.data()), size) || size < 16)
        fail(path, "bad fmt chunk");
      header.fmt.format = le16(body.data());
      header.fmt.channels = le16(body.data() + 2);
      header.fmt.sample_rate = le32(body.data() + 4);
      header.fmt.bits = le16(body.data() + 14);
      if (header.fmt.format == kFormatExtensible) {
        if (size < 26) fail(path, "bad extensible fmt chunk");
        header.fmt.format = le16(body.data() + 24);
      }
      if (size & 1u) in.seekg(1, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(chunk.data(), "data", 4) == 0) {
      if (!have_fmt) fail(path, "data chunk before fmt chunk");
      header.data_offset = in.tellg();
      header.data_bytes = size;
      break;
    } else {
      in.seekg(size + (size & 1u), std::ios::cur);
    }
  }

  const auto& f = header.fmt;
  if (f.channels == 0) fail(path, "zero channels");
  if (f.sample_rate == 0) fail(path, "zero sample rate");
  const bool pcm_ok = f.format == kFormatPcm &&
                      (f.bits == 8 || f.bits == 16 || f.bits == 24 || f.bits == 32);
  const bool float_ok = f.format == kFormatFloat && (f.bits == 32 || f.bits == 64);
  if (!pcm_ok && !float_ok)
    fail(path, "unsupported sample format " + std::to_string(f.format) + "/" +
                   std::to_string(f.bits) + " bits");
  return header;
}

double decode_sample(const unsigned char* p, const FormatChunk& f) {
  if (f.format == kFormatFloat) {
    if (f.bits == 32) return std::bit_cast<float>(le32(p));
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return std::bit_cast<double>(v);
  }
  switch (f.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(le16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;
      return v / 8388608.0;
    }
    default:
      return static_cast<std::int32_t>(le32(p)) / 2147483648.0;
  }
}

void put16(std::ofstream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}
void put32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  const auto header = parse_header(in, path);
  const std::uint32_t frame_bytes = header.fmt.channels * (header.fmt.bits / 8);
  return WavInfo{static_cast<int>(header.fmt.sample_rate), header.fmt.channels,
                 static_cast<std::int64_t>(header.data_bytes / frame_bytes)};
}

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  const auto header = parse_header(in, path);
  const auto& f = header.fmt;
  const std::size_t bytes_per_sample = f.bits / 8;
  const std::size_t frame_bytes = f.channels * bytes_per_sample;

  std::vector<unsigned char> raw(header.data_bytes);
  in.read(reinterpret_cast<char*>(raw.data()), header.data_bytes);
  const std::size_t frames = static_cast<std::size_t>(in.gcount()) / frame_bytes;

  WavData data;
  data.sample_rate = static_cast<int>(f.sample_rate);
  data.channels.assign(f.channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i)
    for (std::size_t c = 0; c < f.channels; ++c)
      data.channels[c][i] = decode_sample(raw.data() + i * frame_bytes + c * bytes_per_sample, f);
  return data;
}

void write_wav(const std::filesystem::path& path,
               const std::vector<std::vector<double>>& channels, int sample_rate,
               SampleFormat format) {
  if (channels.empty()) throw std::invalid_argument("write_wav: no channels");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels)
    if (c.size() != frames) throw std::invalid_argument("write_wav: ragged channels");

  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::uint16_t tag = format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat;
  const auto n_channels = static_cast<std::uint16_t>(channels.size());
  const std::uint32_t block = n_channels * (bits / 8);
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * block);

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot create");
  out.write("RIFF", 4);
  put32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(out, 16);
  put16(out, tag);
  put16(out, n_channels);
  put32(out, static_cast<std::uint32_t>(sample_rate));
  put32(out, static_cast<std::uint32_t>(sample_rate) * block);
  put16(out, static_cast<std::uint16_t>(block));
  put16(out, bits);
  out.write("data", 4);
  put32(out, data_bytes);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& c : channels) {
      const double v = std::clamp(c[i], -1.0, 1.0);
      if (format == SampleFormat::Pcm16) {
        const auto q = static_cast<std::int16_t>(std::lround(v * 32767.0));
        put16(out, static_cast<std::uint16_t>(q));
      } else {
        put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }
  if (!out) fail(path, "write failed");
}

Waveform load_mono(const std::filesystem::path& path, int target_rate) {
  auto data = read_wav(path);
  std::vector<double> mono(data.channels.front().size(), 0.0);
  for (const auto& c : data.channels)
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i] += c[i] / data.channels.size();
  return Waveform{resample(mono, data.sample_rate, target_rate), target_rate};
}

BinauralClip load_binaural(const std::filesystem::path& path, int target_rate) {
  auto data = read_wav(path);
  if (data.channels.size() != 2)
    fail(path, "expected 2 channels, found " + std::to_string(data.channels.size()));
  return BinauralClip{
      Waveform{resample(data.channels[0], data.sample_rate, target_rate), target_rate},
      Waveform{resample(data.channels[1], data.sample_rate, target_rate), target_rate}};
}

void save_binaural(const std::filesystem::path& path, const BinauralClip& clip,
                   SampleFormat format) {
  write_wav(path, {clip.left.samples, clip.right.samples}, clip.sample_rate(), format);
}

}  // namespace m2b::dsp
