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

#ifndef FGTTS_TRAINER_CHECKPOINT_H_
#define FGTTS_TRAINER_CHECKPOINT_H_

#include <map>
#include <string>
#include <vector>

#include "fgtts/common/config.h"
#include "fgtts/common/matrix.h"
#include "fgtts/nn/parameters.h"

namespace fgtts::trainer {

struct MetricRecord {
  int step = 0;
  std::string name;  // e.g. "train.total", "heldout.mcd"
  double value = 0.0;
};

// On disk a checkpoint is a directory:
//   tensors.txt   "#fgtts-checkpoint v1", then "name<TAB>rows,cols<TAB>float32<TAB>offset"
//                 and a final "#end<TAB>bytes<TAB>fnv1a64"
//   tensors.bin   little-endian float32 payload
//   config.txt    resolved config snapshot
//   meta.txt      stage and step
//   metrics.tsv   step<TAB>name<TAB>value
struct Checkpoint {
  std::string stage;
  int step = 0;
  Config config;
  std::vector<std::string> order;  // tensor names in file order
  std::map<std::string, Matrix> tensors;
  std::vector<MetricRecord> metrics;

  static Checkpoint FromParameters(const nn::ParameterSet& params, const std::string& stage,
                                   int step, const Config& config);
  // Copies tensors into same-named parameters. Throws CorruptCheckpoint when
  // a parameter is missing and DimMismatch on shape differences.
  void LoadInto(nn::ParameterSet* params, const std::vector<std::string>& prefixes = {}) const;
  const Matrix& Tensor(const std::string& name) const;
};

inline constexpr const char* kCheckpointSchema = "#fgtts-checkpoint v1";

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& dir);
// Throws CorruptCheckpoint on any inconsistency.
Checkpoint LoadCheckpoint(const std::string& dir);
// Throws StageMismatch unless the stored tag equals one of `expected`.
Checkpoint LoadCheckpoint(const std::string& dir, const std::vector<std::string>& expected);

// FNV-1a over the float32 encoding of every tensor whose name starts with
// one of `prefixes` (all tensors when empty), in name order.
uint64_t TensorHash(const nn::ParameterSet& params, const std::vector<std::string>& prefixes);

}  // namespace fgtts::trainer

#endif  // FGTTS_TRAINER_CHECKPOINT_H_
