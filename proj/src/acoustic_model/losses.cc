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

#include "fgtts/acoustic_model/losses.h"

#include <algorithm>
#include <cmath>

#include "fgtts/common/error.h"

namespace fgtts::acoustic {

Var L1Sum(Graph& g, Var y_pred_norm, const Matrix& y_norm, const RowVector& stddev) {
  if (y_pred_norm.rows() != y_norm.rows() || y_pred_norm.cols() != y_norm.cols()) {
    throw ShapeMismatch("L1: prediction and target shapes differ");
  }
  Matrix scale = stddev.replicate(y_norm.rows(), 1);
  Var diff = nn::Abs(nn::Sub(y_pred_norm, g.Constant(y_norm)));
  return nn::SumAll(nn::Mul(diff, g.Constant(std::move(scale))));
}

Var StandardNormalKlSum(Graph& g, const Posterior& post) {
  Var zero = g.Constant(Matrix::Zero(post.mu.rows(), post.mu.cols()));
  return nn::SumAll(nn::GaussianKl(post.mu, post.log_sigma, zero, zero));
}

double GaussianKl(double mu_q, double ls_q, double mu_p, double ls_p) {
  const double d = mu_q - mu_p;
  return ls_p - ls_q + (std::exp(2.0 * ls_q) + d * d) / (2.0 * std::exp(2.0 * ls_p)) - 0.5;
}

LossBreakdown Stage1Loss(const Matrix& y, const Matrix& y_pred, const Matrix& mu,
                         const Matrix& log_sigma, double kl_weight) {
  if (y.rows() != y_pred.rows() || y.cols() != y_pred.cols()) {
    throw ShapeMismatch("stage-1 loss: frame shapes differ");
  }
  if (mu.rows() != log_sigma.rows() || mu.cols() != log_sigma.cols()) {
    throw ShapeMismatch("stage-1 loss: posterior shapes differ");
  }
  LossBreakdown out;
  out.kl_weight = kl_weight;
  out.reconstruction = (y - y_pred).cwiseAbs().mean();
  double kl = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    kl += GaussianKl(mu.data()[i], log_sigma.data()[i], 0.0, 0.0);
  }
  out.kl = mu.rows() > 0 ? kl / static_cast<double>(mu.rows()) : 0.0;
  out.total = out.reconstruction + kl_weight * out.kl;
  return out;
}

double KlWeight(int step, double target, int warmup_steps) {
  if (warmup_steps <= 0) return target;
  return target * std::min(1.0, static_cast<double>(step) / warmup_steps);
}

}  // namespace fgtts::acoustic
