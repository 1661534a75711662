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

#include "fgtts/nn/graph.h"

#include <cmath>
#include <string>

#include "fgtts/common/error.h"

namespace fgtts::nn {

const Matrix& Var::value() const { return graph_->value(id_); }

Var Graph::Constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::Param(Parameter* p) {
  auto it = param_nodes_.find(p);
  if (it != param_nodes_.end()) return Var(this, it->second);
  Node n;
  n.external = &p->value;
  n.param = p;
  n.needs_grad = grad_enabled_ && !p->frozen;
  nodes_.push_back(std::move(n));
  int id = static_cast<int>(nodes_.size()) - 1;
  param_nodes_[p] = id;
  return Var(this, id);
}

Matrix& Graph::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) {
    const Matrix& v = value(id);
    n.grad = Matrix::Zero(v.rows(), v.cols());
  }
  return n.grad;
}

Var Graph::AddNode(Matrix value, std::initializer_list<Var> inputs,
                   BackwardFn backward) {
  return AddNode(std::move(value), std::vector<Var>(inputs), std::move(backward));
}

Var Graph::AddNode(Matrix value, const std::vector<Var>& inputs,
                   BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  if (grad_enabled_) {
    for (const Var& v : inputs) {
      if (v.graph() != this) throw Error("Var used with a foreign graph");
      if (nodes_[v.id()].needs_grad) n.needs_grad = true;
    }
    if (n.needs_grad) n.backward = std::move(backward);
  }
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Graph::Backward(Var loss, double scale) {
  if (!grad_enabled_) throw Error("Backward() on a graph without gradients");
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ShapeMismatch("Backward() needs a scalar loss");
  }
  if (!nodes_[loss.id()].needs_grad) return;
  grad(loss.id())(0, 0) += scale;
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param != nullptr) n.param->grad += n.grad;
  }
}

namespace {

void CheckSameShape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::string(op) + ": shapes " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " and " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
}

template <typename F, typename D>
Var Unary(Var a, F forward, D derivative) {
  Graph* g = a.graph();
  Matrix y = a.value().unaryExpr(forward);
  int ia = a.id();
  return g->AddNode(std::move(y), {a}, [ia, derivative](Graph& gr, int self) {
    if (!gr.needs_grad(ia)) return;
    const Matrix& x = gr.value(ia);
    const Matrix& y = gr.value(self);
    const Matrix& gy = gr.grad(self);
    Matrix& gx = gr.grad(ia);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      gx.data()[i] += gy.data()[i] * derivative(x.data()[i], y.data()[i]);
    }
  });
}

}  // namespace

Var MatMul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("MatMul: " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " times " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Graph* g = a.graph();
  int ia = a.id(), ib = b.id();
  Matrix y = a.value() * b.value();
  return g->AddNode(std::move(y), {a, b}, [ia, ib](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    if (gr.needs_grad(ia)) gr.grad(ia).noalias() += gy * gr.value(ib).transpose();
    if (gr.needs_grad(ib)) gr.grad(ib).noalias() += gr.value(ia).transpose() * gy;
  });
}

Var Add(Var a, Var b) {
  Graph* g = a.graph();
  int ia = a.id(), ib = b.id();
  if (b.rows() == 1 && a.rows() != 1 && b.cols() == a.cols()) {
    Matrix y = a.value().rowwise() + b.value().row(0);
    return g->AddNode(std::move(y), {a, b}, [ia, ib](Graph& gr, int self) {
      const Matrix& gy = gr.grad(self);
      if (gr.needs_grad(ia)) gr.grad(ia) += gy;
      if (gr.needs_grad(ib)) gr.grad(ib) += gy.colwise().sum();
    });
  }
  CheckSameShape(a, b, "Add");
  Matrix y = a.value() + b.value();
  return g->AddNode(std::move(y), {a, b}, [ia, ib](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    if (gr.needs_grad(ia)) gr.grad(ia) += gy;
    if (gr.needs_grad(ib)) gr.grad(ib) += gy;
  });
}

Var Sub(Var a, Var b) {
  CheckSameShape(a, b, "Sub");
  Graph* g = a.graph();
  int ia = a.id(), ib = b.id();
  Matrix y = a.value() - b.value();
  return g->AddNode(std::move(y), {a, b}, [ia, ib](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    if (gr.needs_grad(ia)) gr.grad(ia) += gy;
    if (gr.needs_grad(ib)) gr.grad(ib) -= gy;
  });
}

Var Mul(Var a, Var b) {
  CheckSameShape(a, b, "Mul");
  Graph* g = a.graph();
  int ia = a.id(), ib = b.id();
  Matrix y = a.value().cwiseProduct(b.value());
  return g->AddNode(std::move(y), {a, b}, [ia, ib](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    if (gr.needs_grad(ia)) gr.grad(ia) += gy.cwiseProduct(gr.value(ib));
    if (gr.needs_grad(ib)) gr.grad(ib) += gy.cwiseProduct(gr.value(ia));
  });
}

Var Scale(Var a, double s) {
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value() * s;
  return g->AddNode(std::move(y), {a}, [ia, s](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia) += gr.grad(self) * s;
  });
}

Var AddScalar(Var a, double s) {
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().array() + s;
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia) += gr.grad(self);
  });
}

Var Tanh(Var a) {
  return Unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var Sigmoid(Var a) {
  return Unary(
      a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double, double y) { return y * (1.0 - y); });
}

Var Relu(Var a) {
  return Unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var Exp(Var a) {
  return Unary(
      a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var Abs(Var a) {
  return Unary(
      a, [](double x) { return std::abs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var Square(Var a) {
  return Unary(
      a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var Clamp(Var a, double lo, double hi) {
  return Unary(
      a, [lo, hi](double x) { return x < lo ? lo : (x > hi ? hi : x); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Var SoftmaxRows(Var a) {
  Graph* g = a.graph();
  int ia = a.id();
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double m = x.row(r).maxCoeff();
    y.row(r) = (x.row(r).array() - m).exp();
    y.row(r) /= y.row(r).sum();
  }
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (!gr.needs_grad(ia)) return;
    const Matrix& y = gr.value(self);
    const Matrix& gy = gr.grad(self);
    Matrix& gx = gr.grad(ia);
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      double dot = gy.row(r).dot(y.row(r));
      gx.row(r).array() += y.row(r).array() * (gy.row(r).array() - dot);
    }
  });
}

Var Transpose(Var a) {
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().transpose();
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia) += gr.grad(self).transpose();
  });
}

Var StopGradient(Var a) { return a.graph()->Constant(a.value()); }

Var ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeMismatch("ConcatCols: no inputs");
  Graph* g = parts[0].graph();
  Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != rows) throw ShapeMismatch("ConcatCols: row counts differ");
    cols += p.cols();
  }
  Matrix y(rows, cols);
  std::vector<int> ids;
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (const Var& p : parts) {
    y.middleCols(off, p.cols()) = p.value();
    ids.push_back(p.id());
    offsets.push_back(off);
    off += p.cols();
  }
  return g->AddNode(std::move(y), parts, [ids, offsets](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    for (size_t k = 0; k < ids.size(); ++k) {
      if (!gr.needs_grad(ids[k])) continue;
      Matrix& gx = gr.grad(ids[k]);
      gx += gy.middleCols(offsets[k], gx.cols());
    }
  });
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeMismatch("ConcatRows: no inputs");
  Graph* g = parts[0].graph();
  Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  for (const Var& p : parts) {
    if (p.cols() != cols) throw ShapeMismatch("ConcatRows: column counts differ");
    rows += p.rows();
  }
  Matrix y(rows, cols);
  std::vector<int> ids;
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (const Var& p : parts) {
    y.middleRows(off, p.rows()) = p.value();
    ids.push_back(p.id());
    offsets.push_back(off);
    off += p.rows();
  }
  return g->AddNode(std::move(y), parts, [ids, offsets](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    for (size_t k = 0; k < ids.size(); ++k) {
      if (!gr.needs_grad(ids[k])) continue;
      Matrix& gx = gr.grad(ids[k]);
      gx += gy.middleRows(offsets[k], gx.rows());
    }
  });
}

Var SliceCols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw ShapeMismatch("SliceCols out of range");
  }
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().middleCols(start, count);
  return g->AddNode(std::move(y), {a}, [ia, start, count](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia).middleCols(start, count) += gr.grad(self);
  });
}

Var SliceRows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows()) {
    throw ShapeMismatch("SliceRows out of range");
  }
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().middleRows(start, count);
  return g->AddNode(std::move(y), {a}, [ia, start, count](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia).middleRows(start, count) += gr.grad(self);
  });
}

Var GatherRows(Var a, const std::vector<int>& index) {
  Graph* g = a.graph();
  int ia = a.id();
  const Matrix& x = a.value();
  Matrix y(static_cast<Eigen::Index>(index.size()), x.cols());
  for (size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= x.rows()) {
      throw ShapeMismatch("GatherRows: index " + std::to_string(index[i]) +
                          " out of range");
    }
    y.row(static_cast<Eigen::Index>(i)) = x.row(index[i]);
  }
  return g->AddNode(std::move(y), {a}, [ia, index](Graph& gr, int self) {
    if (!gr.needs_grad(ia)) return;
    const Matrix& gy = gr.grad(self);
    Matrix& gx = gr.grad(ia);
    for (size_t i = 0; i < index.size(); ++i) {
      gx.row(index[i]) += gy.row(static_cast<Eigen::Index>(i));
    }
  });
}

Var ReverseRows(Var a) {
  std::vector<int> index(static_cast<size_t>(a.rows()));
  for (size_t i = 0; i < index.size(); ++i) {
    index[i] = static_cast<int>(index.size() - 1 - i);
  }
  return GatherRows(a, index);
}

Var BroadcastRows(Var a, Eigen::Index rows) {
  if (a.rows() != 1) throw ShapeMismatch("BroadcastRows needs a single row");
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().replicate(rows, 1);
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia) += gr.grad(self).colwise().sum();
  });
}

Var SumAll(Var a) {
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y(1, 1);
  y(0, 0) = a.value().sum();
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (gr.needs_grad(ia)) gr.grad(ia).array() += gr.grad(self)(0, 0);
  });
}

Var MeanAll(Var a) {
  double n = static_cast<double>(a.value().size());
  return Scale(SumAll(a), 1.0 / n);
}

Var SumRows(Var a) {
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().colwise().sum();
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (!gr.needs_grad(ia)) return;
    Matrix& gx = gr.grad(ia);
    gx.rowwise() += gr.grad(self).row(0);
  });
}

Var MeanRows(Var a) {
  return Scale(SumRows(a), 1.0 / static_cast<double>(a.rows()));
}

Var SumCols(Var a) {
  Graph* g = a.graph();
  int ia = a.id();
  Matrix y = a.value().rowwise().sum();
  return g->AddNode(std::move(y), {a}, [ia](Graph& gr, int self) {
    if (!gr.needs_grad(ia)) return;
    Matrix& gx = gr.grad(ia);
    gx.colwise() += gr.grad(self).col(0);
  });
}

int ConvOutputLength(int length, int kernel, int stride, int pad) {
  int span = length + 2 * pad - kernel;
  if (span < 0) return 0;
  return span / stride + 1;
}

Var Im2Col(Var x, int kernel, int stride, int pad) {
  Graph* g = x.graph();
  int ix = x.id();
  const Matrix& in = x.value();
  const int length = static_cast<int>(in.rows());
  const Eigen::Index channels = in.cols();
  const int out_len = ConvOutputLength(length, kernel, stride, pad);
  if (out_len <= 0) throw ShapeMismatch("Im2Col: sequence shorter than kernel");
  Matrix y = Matrix::Zero(out_len, kernel * channels);
  for (int t = 0; t < out_len; ++t) {
    for (int j = 0; j < kernel; ++j) {
      int src = t * stride + j - pad;
      if (src < 0 || src >= length) continue;
      y.row(t).segment(j * channels, channels) = in.row(src);
    }
  }
  return g->AddNode(std::move(y), {x}, [ix, kernel, stride, pad, length, channels,
                                        out_len](Graph& gr, int self) {
    if (!gr.needs_grad(ix)) return;
    const Matrix& gy = gr.grad(self);
    Matrix& gx = gr.grad(ix);
    for (int t = 0; t < out_len; ++t) {
      for (int j = 0; j < kernel; ++j) {
        int src = t * stride + j - pad;
        if (src < 0 || src >= length) continue;
        gx.row(src) += gy.row(t).segment(j * channels, channels);
      }
    }
  });
}

namespace {

inline double Sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Var LstmSequence(Var x_proj, Var w_hh, Var h0, Var c0) {
  const Eigen::Index hidden = w_hh.rows();
  const Eigen::Index steps = x_proj.rows();
  if (w_hh.cols() != 4 * hidden || x_proj.cols() != 4 * hidden ||
      h0.cols() != hidden || c0.cols() != hidden || h0.rows() != 1 ||
      c0.rows() != 1) {
    throw ShapeMismatch("LstmSequence: inconsistent shapes");
  }
  Graph* g = x_proj.graph();
  // Gate activations i, f, g, o per step, kept for the backward pass.
  auto gates = std::make_shared<Matrix>(steps, 4 * hidden);
  Matrix y(steps, 2 * hidden);
  const Matrix& xp = x_proj.value();
  const Matrix& whh = w_hh.value();
  RowVector h = h0.value().row(0);
  RowVector c = c0.value().row(0);
  RowVector z(4 * hidden);
  for (Eigen::Index t = 0; t < steps; ++t) {
    z.noalias() = xp.row(t) + h * whh;
    for (Eigen::Index k = 0; k < hidden; ++k) {
      double ig = Sigm(z(k));
      double fg = Sigm(z(hidden + k));
      double gg = std::tanh(z(2 * hidden + k));
      double og = Sigm(z(3 * hidden + k));
      c(k) = fg * c(k) + ig * gg;
      h(k) = og * std::tanh(c(k));
      (*gates)(t, k) = ig;
      (*gates)(t, hidden + k) = fg;
      (*gates)(t, 2 * hidden + k) = gg;
      (*gates)(t, 3 * hidden + k) = og;
    }
    y.row(t).head(hidden) = h;
    y.row(t).tail(hidden) = c;
  }
  int ix = x_proj.id(), iw = w_hh.id(), ih = h0.id(), ic = c0.id();
  return g->AddNode(std::move(y), {x_proj, w_hh, h0, c0},
                    [ix, iw, ih, ic, hidden, steps, gates](Graph& gr, int self) {
    const Matrix& out = gr.value(self);
    const Matrix& gy = gr.grad(self);
    const Matrix& whh = gr.value(iw);
    const Matrix& gate = *gates;
    Matrix dz_all(steps, 4 * hidden);
    RowVector dh_rec = RowVector::Zero(hidden);
    RowVector dc_rec = RowVector::Zero(hidden);
    RowVector dz(4 * hidden);
    for (Eigen::Index t = steps - 1; t >= 0; --t) {
      for (Eigen::Index k = 0; k < hidden; ++k) {
        double ig = gate(t, k), fg = gate(t, hidden + k);
        double gg = gate(t, 2 * hidden + k), og = gate(t, 3 * hidden + k);
        double ct = out(t, hidden + k);
        double tc = std::tanh(ct);
        double cprev = t > 0 ? out(t - 1, hidden + k) : gr.value(ic)(0, k);
        double dh = gy(t, k) + dh_rec(k);
        double dc = gy(t, hidden + k) + dc_rec(k) + dh * og * (1.0 - tc * tc);
        dz(k) = dc * gg * ig * (1.0 - ig);
        dz(hidden + k) = dc * cprev * fg * (1.0 - fg);
        dz(2 * hidden + k) = dc * ig * (1.0 - gg * gg);
        dz(3 * hidden + k) = dh * tc * og * (1.0 - og);
        dc_rec(k) = dc * fg;
      }
      dz_all.row(t) = dz;
      dh_rec.noalias() = dz * whh.transpose();
    }
    if (gr.needs_grad(ix)) gr.grad(ix) += dz_all;
    if (gr.needs_grad(iw)) {
      Matrix hprev(steps, hidden);
      hprev.row(0) = gr.value(ih).row(0);
      if (steps > 1) hprev.bottomRows(steps - 1) = out.topRows(steps - 1).leftCols(hidden);
      gr.grad(iw).noalias() += hprev.transpose() * dz_all;
    }
    if (gr.needs_grad(ih)) gr.grad(ih) += dh_rec;
    if (gr.needs_grad(ic)) gr.grad(ic) += dc_rec;
  });
}

Var GaussianKl(Var mu_q, Var log_sigma_q, Var mu_p, Var log_sigma_p) {
  CheckSameShape(mu_q, log_sigma_q, "GaussianKl");
  CheckSameShape(mu_q, mu_p, "GaussianKl");
  CheckSameShape(mu_q, log_sigma_p, "GaussianKl");
  Graph* g = mu_q.graph();
  const Matrix& mq = mu_q.value();
  const Matrix& lq = log_sigma_q.value();
  const Matrix& mp = mu_p.value();
  const Matrix& lp = log_sigma_p.value();
  Matrix y(mq.rows(), mq.cols());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double d = mq.data()[i] - mp.data()[i];
    double a = std::exp(2.0 * lq.data()[i]);
    double p = std::exp(-2.0 * lp.data()[i]);
    y.data()[i] = lp.data()[i] - lq.data()[i] + 0.5 * (a + d * d) * p - 0.5;
  }
  int i_mq = mu_q.id(), i_lq = log_sigma_q.id();
  int i_mp = mu_p.id(), i_lp = log_sigma_p.id();
  return g->AddNode(std::move(y), {mu_q, log_sigma_q, mu_p, log_sigma_p},
                    [i_mq, i_lq, i_mp, i_lp](Graph& gr, int self) {
    const Matrix& gy = gr.grad(self);
    const Matrix& mq = gr.value(i_mq);
    const Matrix& lq = gr.value(i_lq);
    const Matrix& mp = gr.value(i_mp);
    const Matrix& lp = gr.value(i_lp);
    bool gmq = gr.needs_grad(i_mq), glq = gr.needs_grad(i_lq);
    bool gmp = gr.needs_grad(i_mp), glp = gr.needs_grad(i_lp);
    for (Eigen::Index i = 0; i < gy.size(); ++i) {
      double d = mq.data()[i] - mp.data()[i];
      double a = std::exp(2.0 * lq.data()[i]);
      double p = std::exp(-2.0 * lp.data()[i]);
      double go = gy.data()[i];
      if (gmq) gr.grad(i_mq).data()[i] += go * d * p;
      if (gmp) gr.grad(i_mp).data()[i] -= go * d * p;
      if (glq) gr.grad(i_lq).data()[i] += go * (a * p - 1.0);
      if (glp) gr.grad(i_lp).data()[i] += go * (1.0 - (a + d * d) * p);
    }
  });
}

}  // namespace fgtts::nn
