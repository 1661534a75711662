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

#include "fgtts/trainer/checkpoint.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "fgtts/common/error.h"
#include "fgtts/common/strings.h"

namespace fgtts::trainer {

namespace fs = std::filesystem;

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

void Fnv(uint64_t* h, const unsigned char* p, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    *h ^= p[i];
    *h *= kFnvPrime;
  }
}

void AppendFloats(const Matrix& m, std::string* out) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    float f = static_cast<float>(m.data()[i]);
    uint32_t u;
    std::memcpy(&u, &f, 4);
    unsigned char b[4] = {static_cast<unsigned char>(u), static_cast<unsigned char>(u >> 8),
                          static_cast<unsigned char>(u >> 16),
                          static_cast<unsigned char>(u >> 24)};
    out->append(reinterpret_cast<const char*>(b), 4);
  }
}

bool HasPrefix(const std::string& name, const std::vector<std::string>& prefixes) {
  if (prefixes.empty()) return true;
  for (const auto& p : prefixes) {
    if (name.compare(0, p.size(), p) == 0) return true;
  }
  return false;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CorruptCheckpoint("missing " + p.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

Checkpoint Checkpoint::FromParameters(const nn::ParameterSet& params, const std::string& stage,
                                      int step, const Config& config) {
  Checkpoint c;
  c.stage = stage;
  c.step = step;
  c.config = config;
  for (const auto& p : params.all()) {
    c.order.push_back(p->name);
    c.tensors[p->name] = p->value;
  }
  return c;
}

const Matrix& Checkpoint::Tensor(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw CorruptCheckpoint("checkpoint has no tensor '" + name + "'");
  return it->second;
}

void Checkpoint::LoadInto(nn::ParameterSet* params,
                          const std::vector<std::string>& prefixes) const {
  for (const auto& p : params->all()) {
    if (!HasPrefix(p->name, prefixes)) continue;
    const Matrix& t = Tensor(p->name);
    if (t.rows() != p->value.rows() || t.cols() != p->value.cols()) {
      throw DimMismatch("tensor '" + p->name + "' is " + std::to_string(t.rows()) + "x" +
                        std::to_string(t.cols()) + " in the checkpoint but " +
                        std::to_string(p->value.rows()) + "x" +
                        std::to_string(p->value.cols()) + " in the model");
    }
    p->value = t;
  }
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& dir) {
  fs::create_directories(dir);
  std::string blob;
  std::ostringstream index;
  index << kCheckpointSchema << "\n";
  for (const auto& name : ckpt.order) {
    const Matrix& m = ckpt.Tensor(name);
    index << name << '\t' << m.rows() << ',' << m.cols() << "\tfloat32\t" << blob.size() << "\n";
    AppendFloats(m, &blob);
  }
  uint64_t h = kFnvOffset;
  Fnv(&h, reinterpret_cast<const unsigned char*>(blob.data()), blob.size());
  index << "#end\t" << blob.size() << '\t' << h << "\n";

  auto write = [&](const char* file, const std::string& data) {
    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    out << data;
    if (!out) throw Error(std::string("cannot write checkpoint file ") + file);
  };
  write("tensors.bin", blob);
  write("tensors.txt", index.str());
  write("config.txt", ckpt.config.Dump());
  write("meta.txt", "stage\t" + ckpt.stage + "\nstep\t" + std::to_string(ckpt.step) + "\n");
  std::ostringstream metrics;
  for (const auto& r : ckpt.metrics) {
    metrics << r.step << '\t' << r.name << '\t' << FormatDouble(r.value) << "\n";
  }
  write("metrics.tsv", metrics.str());
}

Checkpoint LoadCheckpoint(const std::string& dir) {
  if (!fs::is_directory(dir)) throw CorruptCheckpoint("no checkpoint directory at " + dir);
  Checkpoint c;
  const std::string blob = ReadAll(fs::path(dir) / "tensors.bin");
  std::istringstream index(ReadAll(fs::path(dir) / "tensors.txt"));
  std::string line;
  if (!std::getline(index, line) || line != kCheckpointSchema) {
    throw CorruptCheckpoint("unsupported checkpoint version in " + dir);
  }
  bool ended = false;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = Split(line, "\t");
    if (f[0] == "#end") {
      if (f.size() != 3) throw CorruptCheckpoint("malformed index footer");
      uint64_t h = kFnvOffset;
      Fnv(&h, reinterpret_cast<const unsigned char*>(blob.data()), blob.size());
      if (std::to_string(blob.size()) != f[1] || std::to_string(h) != f[2]) {
        throw CorruptCheckpoint("tensor payload size or checksum mismatch in " + dir);
      }
      ended = true;
      break;
    }
    if (f.size() != 4 || f[2] != "float32") throw CorruptCheckpoint("malformed index line '" + line + "'");
    std::vector<std::string> shape = Split(f[1], ",");
    long rows, cols, offset;
    try {
      if (shape.size() != 2) throw std::invalid_argument("shape");
      rows = std::stol(shape[0]);
      cols = std::stol(shape[1]);
      offset = std::stol(f[3]);
    } catch (const std::exception&) {
      throw CorruptCheckpoint("malformed index line '" + line + "'");
    }
    if (rows < 0 || cols < 0 || offset < 0 ||
        static_cast<size_t>(offset) + 4 * rows * cols > blob.size()) {
      throw CorruptCheckpoint("tensor '" + f[0] + "' lies outside the payload");
    }
    Matrix m(rows, cols);
    for (long i = 0; i < rows * cols; ++i) {
      const unsigned char* p = reinterpret_cast<const unsigned char*>(blob.data()) + offset + 4 * i;
      uint32_t u = p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
      float v;
      std::memcpy(&v, &u, 4);
      m.data()[i] = v;
    }
    c.order.push_back(f[0]);
    c.tensors[f[0]] = std::move(m);
  }
  if (!ended) throw CorruptCheckpoint("checkpoint index is truncated in " + dir);

  try {
    c.config = Config::FromString(ReadAll(fs::path(dir) / "config.txt"));
  } catch (const ConfigError& e) {
    throw CorruptCheckpoint(std::string("bad config snapshot: ") + e.what());
  }
  std::istringstream meta(ReadAll(fs::path(dir) / "meta.txt"));
  while (std::getline(meta, line)) {
    std::vector<std::string> f = Split(line, "\t");
    if (f.size() != 2) continue;
    if (f[0] == "stage") c.stage = f[1];
    if (f[0] == "step") c.step = std::atoi(f[1].c_str());
  }
  if (c.stage.empty()) throw CorruptCheckpoint("meta.txt has no stage tag");
  std::ifstream metrics(fs::path(dir) / "metrics.tsv");
  while (std::getline(metrics, line)) {
    std::vector<std::string> f = Split(line, "\t");
    if (f.size() != 3) continue;
    c.metrics.push_back({std::atoi(f[0].c_str()), f[1], std::strtod(f[2].c_str(), nullptr)});
  }
  return c;
}

Checkpoint LoadCheckpoint(const std::string& dir, const std::vector<std::string>& expected) {
  Checkpoint c = LoadCheckpoint(dir);
  for (const auto& e : expected) {
    if (c.stage == e) return c;
  }
  throw StageMismatch("checkpoint at " + dir + " is tagged '" + c.stage + "', expected " +
                      Join(expected, " or "));
}

uint64_t TensorHash(const nn::ParameterSet& params, const std::vector<std::string>& prefixes) {
  std::map<std::string, const Matrix*> sorted;
  for (const auto& p : params.all()) {
    if (HasPrefix(p->name, prefixes)) sorted[p->name] = &p->value;
  }
  uint64_t h = kFnvOffset;
  for (const auto& [name, m] : sorted) {
    std::string bytes = name;
    AppendFloats(*m, &bytes);
    Fnv(&h, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  }
  return h;
}

}  // namespace fgtts::trainer
