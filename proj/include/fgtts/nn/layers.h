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

#ifndef FGTTS_NN_LAYERS_H_
#define FGTTS_NN_LAYERS_H_

#include <string>

#include "fgtts/common/random.h"
#include "fgtts/nn/graph.h"
#include "fgtts/nn/parameters.h"

namespace fgtts::nn {

// Layers own no weights; they register named parameters in a ParameterSet
// at construction and bind them to a Graph on every call.

class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet* params, const std::string& name, int in, int out,
         Rng* rng, bool bias = true);

  Var operator()(Graph& g, Var x) const;
  int in() const { return in_; }
  int out() const { return out_; }

 private:
  Parameter* weight_ = nullptr;
  Parameter* bias_ = nullptr;
  int in_ = 0;
  int out_ = 0;
};

// 1-D convolution over a [T x in_channels] sequence.
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(ParameterSet* params, const std::string& name, int in_channels,
         int out_channels, int kernel, int stride, int pad, Rng* rng);

  Var operator()(Graph& g, Var x) const;
  int OutputLength(int length) const {
    return ConvOutputLength(length, kernel_, stride_, pad_);
  }

 private:
  Linear proj_;
  int kernel_ = 1;
  int stride_ = 1;
  int pad_ = 0;
};

struct LstmState {
  Var h;
  Var c;
};

class Lstm {
 public:
  Lstm() = default;
  Lstm(ParameterSet* params, const std::string& name, int in, int hidden,
       Rng* rng);

  // Full sequence from a zero state; returns hidden outputs [T x H].
  Var Forward(Graph& g, Var x) const;
  // Input projection x W_ih + b, shared by Forward() and Step().
  Var Project(Graph& g, Var x) const;
  // Runs projected inputs from an explicit state; returns [T x 2H] (h, c).
  Var Run(Graph& g, Var x_proj, const LstmState& state) const;
  LstmState ZeroState(Graph& g) const;
  // One step for a single input row.
  LstmState Step(Graph& g, Var x, const LstmState& state) const;

  int hidden() const { return hidden_; }

 private:
  Linear input_;
  Parameter* w_hh_ = nullptr;
  int hidden_ = 0;
};

// Forward and backward LSTMs with outputs concatenated to [T x 2H].
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParameterSet* params, const std::string& name, int in, int hidden,
         Rng* rng);

  Var Forward(Graph& g, Var x) const;

 private:
  Lstm fwd_;
  Lstm bwd_;
};

class Embedding {
 public:
  Embedding() = default;
  Embedding(ParameterSet* params, const std::string& name, int vocab, int dim,
            Rng* rng);

  Var operator()(Graph& g, const std::vector<int>& ids) const;
  int vocab() const { return vocab_; }

 private:
  Parameter* table_ = nullptr;
  int vocab_ = 0;
};

}  // namespace fgtts::nn

#endif  // FGTTS_NN_LAYERS_H_
