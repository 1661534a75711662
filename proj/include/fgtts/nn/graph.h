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

#ifndef FGTTS_NN_GRAPH_H_
#define FGTTS_NN_GRAPH_H_

#include <functional>
#include <unordered_map>
#include <vector>

#include "fgtts/common/matrix.h"
#include "fgtts/nn/parameters.h"

namespace fgtts::nn {

class Graph;

// Handle to a node of a Graph. Cheap to copy; only valid while its graph is
// alive.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  bool valid() const { return graph_ != nullptr; }
  Graph* graph() const { return graph_; }
  int id() const { return id_; }

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }

 private:
  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Reverse-mode automatic differentiation tape. Every op appends a node; the
// node records a closure that propagates its output gradient to its inputs.
// With gradients disabled no closures are stored and the graph is a plain
// evaluator.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, int)>;

  explicit Graph(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool grad_enabled() const { return grad_enabled_; }

  Var Constant(Matrix value);
  // Leaf bound to a parameter. Repeated calls for the same parameter return
  // the same node. Gradients reach p->grad after Backward() unless p is
  // frozen.
  Var Param(Parameter* p);

  // Seeds d(loss)/d(loss) = scale and propagates to every parameter leaf.
  void Backward(Var loss, double scale = 1.0);

  const Matrix& value(int id) const {
    const Node& n = nodes_[id];
    return n.external != nullptr ? *n.external : n.value;
  }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }

  // Gradient buffer of node `id`, zero-initialised on first access.
  Matrix& grad(int id);

  // Appends an op node. `backward` is dropped when no input needs gradient.
  Var AddNode(Matrix value, std::initializer_list<Var> inputs,
              BackwardFn backward);
  Var AddNode(Matrix value, const std::vector<Var>& inputs,
              BackwardFn backward);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    const Matrix* external = nullptr;
    Matrix grad;
    bool needs_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };

  bool grad_enabled_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
};

// --- elementwise and linear algebra -------------------------------------
Var MatMul(Var a, Var b);
// a + b with equal shapes, or b a single row broadcast over a's rows.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var a, double s);
Var AddScalar(Var a, double s);
Var Tanh(Var a);
Var Sigmoid(Var a);
Var Relu(Var a);
Var Exp(Var a);
Var Abs(Var a);
Var Square(Var a);
// Hard clamp; the gradient is zero where the input lies outside [lo, hi].
Var Clamp(Var a, double lo, double hi);
Var SoftmaxRows(Var a);
Var Transpose(Var a);
// Same value, no gradient flows through.
Var StopGradient(Var a);

// --- shape ----------------------------------------------------------------
Var ConcatCols(const std::vector<Var>& parts);
Var ConcatRows(const std::vector<Var>& parts);
Var SliceCols(Var a, Eigen::Index start, Eigen::Index count);
Var SliceRows(Var a, Eigen::Index start, Eigen::Index count);
// out.row(i) = a.row(index[i]); gradients are scatter-added.
Var GatherRows(Var a, const std::vector<int>& index);
Var ReverseRows(Var a);
// Repeats a single-row input `rows` times.
Var BroadcastRows(Var a, Eigen::Index rows);

// --- reductions -----------------------------------------------------------
Var SumAll(Var a);
Var MeanAll(Var a);
Var SumRows(Var a);   // [R x C] -> [1 x C]
Var MeanRows(Var a);  // [R x C] -> [1 x C]
Var SumCols(Var a);   // [R x C] -> [R x 1]

// Unfolds a [T x C] sequence into [T_out x kernel*C] patches so that a 1-D
// convolution becomes a matrix product. Column j*C + c of output row t holds
// input (t*stride + j - pad, c), or 0 outside the sequence.
Var Im2Col(Var x, int kernel, int stride, int pad);
int ConvOutputLength(int length, int kernel, int stride, int pad);

// Runs an LSTM over precomputed input projections x_proj = x W_ih + b
// ([T x 4H], gate order i, f, g, o) with recurrent weights w_hh [H x 4H]
// from state (h0, c0), each [1 x H]. Returns [T x 2H] holding h_t in the
// first H columns and c_t in the last H.
Var LstmSequence(Var x_proj, Var w_hh, Var h0, Var c0);

// Elementwise KL(N(mu_q, exp(ls_q)^2) || N(mu_p, exp(ls_p)^2)).
Var GaussianKl(Var mu_q, Var log_sigma_q, Var mu_p, Var log_sigma_p);

}  // namespace fgtts::nn

#endif  // FGTTS_NN_GRAPH_H_
