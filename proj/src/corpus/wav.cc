// Copyright (c) 2026 The fgtts Authors
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

#include "fgtts/corpus/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fgtts/common/error.h"

namespace fgtts::corpus {

namespace {

uint32_t Le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t Le16(const unsigned char* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }

void Put32(std::ofstream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}
void Put16(std::ofstream& out, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw InvalidInput(path + ": not a RIFF/WAVE file");
  }
  int format = 0, channels = 0, bits = 0;
  Waveform wav;
  const unsigned char* pcm = nullptr;
  size_t pcm_bytes = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const unsigned char* chunk = data.data() + pos;
    uint32_t size = Le32(chunk + 4);
    size_t body = pos + 8;
    size_t avail = std::min<size_t>(size, data.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && avail >= 16) {
      format = Le16(chunk + 8);
      channels = Le16(chunk + 10);
      wav.sample_rate_hz = static_cast<int>(Le32(chunk + 12));
      bits = Le16(chunk + 22);
      if (format == 0xFFFE && avail >= 26) format = Le16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = data.data() + body;
      pcm_bytes = avail;
    }
    pos = body + size + (size & 1);
  }
  if (pcm == nullptr || channels <= 0 || wav.sample_rate_hz <= 0) {
    throw InvalidInput(path + ": missing fmt or data chunk");
  }
  const bool is_float = format == 3 && bits == 32;
  if (!(format == 1 && (bits == 16 || bits == 24 || bits == 32)) && !is_float) {
    throw InvalidInput(path + ": unsupported sample format");
  }
  const int bytes = bits / 8;
  const size_t frames = pcm_bytes / (bytes * channels);
  wav.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const unsigned char* p = pcm + (i * channels + c) * bytes;
      double v;
      if (is_float) {
        uint32_t u = Le32(p);
        float f;
        std::memcpy(&f, &u, 4);
        v = f;
      } else if (bits == 16) {
        v = static_cast<int16_t>(Le16(p)) / 32768.0;
      } else if (bits == 24) {
        int32_t s = (p[0] << 8) | (p[1] << 16) | (p[2] << 24);
        v = (s >> 8) / 8388608.0;
      } else {
        v = static_cast<int32_t>(Le32(p)) / 2147483648.0;
      }
      acc += v;
    }
    wav.samples[i] = acc / channels;
  }
  return wav;
}

void WriteWav(const std::string& path, const Waveform& wav) {
  if (wav.sample_rate_hz <= 0) throw InvalidInput("sample rate must be positive");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  const uint32_t data_bytes = static_cast<uint32_t>(wav.samples.size() * 2);
  out.write("RIFF", 4);
  Put32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  Put32(out, 16);
  Put16(out, 1);
  Put16(out, 1);
  Put32(out, static_cast<uint32_t>(wav.sample_rate_hz));
  Put32(out, static_cast<uint32_t>(wav.sample_rate_hz * 2));
  Put16(out, 2);
  Put16(out, 16);
  out.write("data", 4);
  Put32(out, data_bytes);
  for (double s : wav.samples) {
    double c = std::clamp(s, -1.0, 1.0);
    Put16(out, static_cast<uint16_t>(static_cast<int16_t>(std::lround(c * 32767.0))));
  }
  if (!out) throw InvalidInput("write failed for " + path);
}

}  // namespace fgtts::corpus
