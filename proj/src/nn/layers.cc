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

#include "fgtts/nn/layers.h"

#include <cmath>

#include "fgtts/common/error.h"

namespace fgtts::nn {

Linear::Linear(ParameterSet* params, const std::string& name, int in, int out,
               Rng* rng, bool bias)
    : in_(in), out_(out) {
  weight_ = params->Create(name + ".w", in, out);
  XavierUniform(weight_, rng);
  if (bias) bias_ = params->Create(name + ".b", 1, out);
}

Var Linear::operator()(Graph& g, Var x) const {
  Var y = MatMul(x, g.Param(weight_));
  if (bias_ != nullptr) y = Add(y, g.Param(bias_));
  return y;
}

Conv1d::Conv1d(ParameterSet* params, const std::string& name, int in_channels,
               int out_channels, int kernel, int stride, int pad, Rng* rng)
    : proj_(params, name, kernel * in_channels, out_channels, rng),
      kernel_(kernel),
      stride_(stride),
      pad_(pad) {}

Var Conv1d::operator()(Graph& g, Var x) const {
  return proj_(g, Im2Col(x, kernel_, stride_, pad_));
}

Lstm::Lstm(ParameterSet* params, const std::string& name, int in, int hidden,
           Rng* rng)
    : input_(params, name + ".ih", in, 4 * hidden, rng), hidden_(hidden) {
  w_hh_ = params->Create(name + ".hh", hidden, 4 * hidden);
  UniformInit(w_hh_, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
  // Forget-gate bias starts at 1.
  Parameter& b = params->Get(name + ".ih.b");
  b.value.middleCols(hidden, hidden).setOnes();
}

Var Lstm::Project(Graph& g, Var x) const { return input_(g, x); }

LstmState Lstm::ZeroState(Graph& g) const {
  return {g.Constant(Matrix::Zero(1, hidden_)), g.Constant(Matrix::Zero(1, hidden_))};
}

Var Lstm::Run(Graph& g, Var x_proj, const LstmState& state) const {
  return LstmSequence(x_proj, g.Param(w_hh_), state.h, state.c);
}

Var Lstm::Forward(Graph& g, Var x) const {
  Var out = Run(g, Project(g, x), ZeroState(g));
  return SliceCols(out, 0, hidden_);
}

LstmState Lstm::Step(Graph& g, Var x, const LstmState& state) const {
  Var out = Run(g, Project(g, x), state);
  return {SliceCols(out, 0, hidden_), SliceCols(out, hidden_, hidden_)};
}

BiLstm::BiLstm(ParameterSet* params, const std::string& name, int in,
               int hidden, Rng* rng)
    : fwd_(params, name + ".fwd", in, hidden, rng),
      bwd_(params, name + ".bwd", in, hidden, rng) {}

Var BiLstm::Forward(Graph& g, Var x) const {
  Var f = fwd_.Forward(g, x);
  Var b = ReverseRows(bwd_.Forward(g, ReverseRows(x)));
  return ConcatCols({f, b});
}

Embedding::Embedding(ParameterSet* params, const std::string& name, int vocab,
                     int dim, Rng* rng)
    : vocab_(vocab) {
  table_ = params->Create(name, vocab, dim);
  UniformInit(table_, std::sqrt(3.0 / dim), rng);
}

Var Embedding::operator()(Graph& g, const std::vector<int>& ids) const {
  for (int id : ids) {
    if (id < 0 || id >= vocab_) {
      throw InvalidInput("token id " + std::to_string(id) +
                         " outside vocabulary of size " + std::to_string(vocab_));
    }
  }
  return GatherRows(g.Param(table_), ids);
}

}  // namespace fgtts::nn
