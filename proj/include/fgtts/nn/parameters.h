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

#ifndef FGTTS_NN_PARAMETERS_H_
#define FGTTS_NN_PARAMETERS_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fgtts/common/matrix.h"
#include "fgtts/common/random.h"

namespace fgtts::nn {

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  // Frozen parameters never receive gradient and are skipped by optimizers.
  bool frozen = false;
};

// Named, insertion-ordered collection of parameters. Parameter addresses are
// stable for the lifetime of the set, so layers may hold raw pointers.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet&) = delete;
  ParameterSet& operator=(const ParameterSet&) = delete;

  Parameter* Create(const std::string& name, int rows, int cols);
  Parameter* Find(const std::string& name);
  const Parameter* Find(const std::string& name) const;
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;

  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }
  size_t size() const { return params_.size(); }
  size_t NumScalars() const;

  void ZeroGrad();
  // Freezes or unfreezes every parameter whose name starts with `prefix`.
  void SetFrozen(const std::string& prefix, bool frozen);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::map<std::string, size_t> index_;
};

// Rounds every entry to the nearest float32 value. Weights are kept
// float32-representable so checkpoints round-trip exactly.
void RoundToFloat(Matrix* m);

void XavierUniform(Parameter* p, Rng* rng);
void UniformInit(Parameter* p, double scale, Rng* rng);

}  // namespace fgtts::nn

#endif  // FGTTS_NN_PARAMETERS_H_
