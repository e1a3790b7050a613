// Copyright 2026 The lpvc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpvc/wav.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "lpvc/error.h"

namespace lpvc {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
  }
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

[[noreturn]] void Unsupported(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": " + what);
}

}  // namespace

Waveform LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    Unsupported(path, "RIFF/WAVE header missing");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) Unsupported(path, "fmt chunk too short");
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == kFormatExtensible && available >= 26) {
        // SubFormat GUID begins with the actual format tag.
        format = ReadU16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = available;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) Unsupported(path, "fmt chunk missing");
  if (format != kFormatPcm) Unsupported(path, "audio_format " + std::to_string(format) + " is not PCM");
  if (channels != 1) Unsupported(path, "num_channels " + std::to_string(channels) + " (mono required)");
  if (bits != 16) Unsupported(path, "bits_per_sample " + std::to_string(bits) + " (16 required)");
  if (rate == 0) Unsupported(path, "sample_rate 0");
  if (data == nullptr) Unsupported(path, "data chunk missing");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(data_size / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(ReadU16(data + 2 * i));
    w.samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return w;
}

void SaveWav(const Waveform& w, const std::filesystem::path& path) {
  if (w.sample_rate <= 0) throw Error(ErrorCode::kIoFailure, "cannot write waveform without a sample rate");
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double x : w.samples) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kIoFailure, "non-finite sample in " + path.string());
    const double q = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot create " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace lpvc
