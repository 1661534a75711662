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

#include "fgtts/common/feature_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "fgtts/common/error.h"

namespace fgtts {

namespace {

constexpr char kMagic[4] = {'P', 'L', 'F', '1'};

void PutU32(std::vector<char>* buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(const char* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

}  // namespace

void WriteFeatureFile(const std::string& path, const Matrix& m) {
  std::vector<char> buf;
  buf.reserve(16 + 4 * m.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  PutU32(&buf, static_cast<uint32_t>(m.rows()));
  PutU32(&buf, static_cast<uint32_t>(m.cols()));
  PutU32(&buf, 0);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      float f = static_cast<float>(m(r, c));
      uint32_t bits;
      std::memcpy(&bits, &f, 4);
      PutU32(&buf, bits);
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FeatureFileError("cannot write feature file '" + path + "'");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FeatureFileError("short write to '" + path + "'");
}

Matrix ReadFeatureFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FeatureFileError("cannot open feature file '" + path + "'");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw FeatureFileError("'" + path + "' is not a PLF1 feature file");
  }
  uint32_t rows = GetU32(buf.data() + 4);
  uint32_t cols = GetU32(buf.data() + 8);
  uint64_t expected = 16 + 4ull * rows * cols;
  if (buf.size() != expected) {
    throw FeatureFileError("'" + path + "' payload size does not match header");
  }
  Matrix m(rows, cols);
  const char* p = buf.data() + 16;
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      uint32_t bits = GetU32(p);
      p += 4;
      float f;
      std::memcpy(&f, &bits, 4);
      m(r, c) = f;
    }
  }
  return m;
}

}  // namespace fgtts
