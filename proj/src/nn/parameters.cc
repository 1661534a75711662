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

#include "fgtts/nn/parameters.h"

#include <cmath>

#include "fgtts/common/error.h"

namespace fgtts::nn {

Parameter* ParameterSet::Create(const std::string& name, int rows, int cols) {
  if (index_.count(name)) throw Error("duplicate parameter '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Matrix::Zero(rows, cols);
  p->grad = Matrix::Zero(rows, cols);
  index_[name] = params_.size();
  params_.push_back(std::move(p));
  return params_.back().get();
}

Parameter* ParameterSet::Find(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParameterSet::Find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

Parameter& ParameterSet::Get(const std::string& name) {
  Parameter* p = Find(name);
  if (p == nullptr) throw Error("no parameter named '" + name + "'");
  return *p;
}

const Parameter& ParameterSet::Get(const std::string& name) const {
  const Parameter* p = Find(name);
  if (p == nullptr) throw Error("no parameter named '" + name + "'");
  return *p;
}

size_t ParameterSet::NumScalars() const {
  size_t n = 0;
  for (const auto& p : params_) n += static_cast<size_t>(p->value.size());
  return n;
}

void ParameterSet::ZeroGrad() {
  for (auto& p : params_) p->grad.setZero();
}

void ParameterSet::SetFrozen(const std::string& prefix, bool frozen) {
  for (auto& p : params_) {
    if (p->name.compare(0, prefix.size(), prefix) == 0) p->frozen = frozen;
  }
}

void RoundToFloat(Matrix* m) {
  for (Eigen::Index i = 0; i < m->size(); ++i) {
    m->data()[i] = static_cast<double>(static_cast<float>(m->data()[i]));
  }
}

void XavierUniform(Parameter* p, Rng* rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(p->value.rows() + p->value.cols()));
  UniformInit(p, limit, rng);
}

void UniformInit(Parameter* p, double scale, Rng* rng) {
  for (Eigen::Index i = 0; i < p->value.size(); ++i) {
    p->value.data()[i] = rng->Uniform(-scale, scale);
  }
  RoundToFloat(&p->value);
}

}  // namespace fgtts::nn
