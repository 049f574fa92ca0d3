// Copyright 2026 The chestsep Authors
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
#include "chestsep/dsp/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(const std::vector<unsigned char>& bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) throw InvalidInput("truncated WAV data");
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

template <typename T>
void AppendLe(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

void AppendTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool TagIs(const std::vector<unsigned char>& bytes, std::size_t offset,
           const char* tag) {
  return offset + 4 <= bytes.size() &&
         std::memcmp(bytes.data() + offset, tag, 4) == 0;
}

}  // namespace

AudioClip DecodeWav(const std::vector<unsigned char>& bytes) {
  if (!TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE")) {
    throw InvalidInput("not a RIFF/WAVE stream");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const auto size = ReadLe<std::uint32_t>(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (TagIs(bytes, pos, "fmt ")) {
      format = ReadLe<std::uint16_t>(bytes, body);
      channels = ReadLe<std::uint16_t>(bytes, body + 2);
      rate = ReadLe<std::uint32_t>(bytes, body + 4);
      bits = ReadLe<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible && size >= 26) {
        format = ReadLe<std::uint16_t>(bytes, body + 24);
      }
      have_fmt = true;
    } else if (TagIs(bytes, pos, "data")) {
      if (!have_fmt) throw InvalidInput("WAV data chunk precedes fmt chunk");
      if (channels != 1) {
        throw InvalidInput("only mono WAV is supported, got " +
                           std::to_string(channels) + " channels");
      }
      const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
      std::vector<double> samples;
      if (format == kFormatPcm && bits == 16) {
        samples.resize(avail / 2);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          samples[i] = ReadLe<std::int16_t>(bytes, body + 2 * i) / 32768.0;
        }
      } else if (format == kFormatFloat && bits == 32) {
        samples.resize(avail / 4);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          samples[i] = ReadLe<float>(bytes, body + 4 * i);
        }
      } else {
        throw InvalidInput("unsupported WAV encoding (format " +
                           std::to_string(format) + ", " +
                           std::to_string(bits) + " bits)");
      }
      return AudioClip(std::move(samples), static_cast<int>(rate));
    }
    pos = body + size + (size & 1u);
  }
  throw InvalidInput("WAV stream has no data chunk");
}

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::vector<unsigned char> EncodeWav(const AudioClip& clip, WavFormat format) {
  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::uint16_t tag = format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat;
  const auto block = static_cast<std::uint16_t>(bits / 8);
  const auto data_size = static_cast<std::uint32_t>(clip.size() * block);
  const auto rate = static_cast<std::uint32_t>(clip.sample_rate());

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  AppendTag(out, "RIFF");
  AppendLe<std::uint32_t>(out, 36 + data_size);
  AppendTag(out, "WAVE");
  AppendTag(out, "fmt ");
  AppendLe<std::uint32_t>(out, 16);
  AppendLe<std::uint16_t>(out, tag);
  AppendLe<std::uint16_t>(out, 1);
  AppendLe<std::uint32_t>(out, rate);
  AppendLe<std::uint32_t>(out, rate * block);
  AppendLe<std::uint16_t>(out, block);
  AppendLe<std::uint16_t>(out, bits);
  AppendTag(out, "data");
  AppendLe<std::uint32_t>(out, data_size);
  for (double s : clip.samples()) {
    if (format == WavFormat::kPcm16) {
      const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
      AppendLe<std::int16_t>(out, static_cast<std::int16_t>(scaled));
    } else {
      AppendLe<float>(out, static_cast<float>(s));
    }
  }
  return out;
}

void WriteWav(const std::filesystem::path& path, const AudioClip& clip,
              WavFormat format) {
  const auto bytes = EncodeWav(clip, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace chestsep
