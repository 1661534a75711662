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

#include "fgtts/evalkit/probe.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "fgtts/common/error.h"
#include "fgtts/common/random.h"

namespace fgtts::eval {

Matrix SoftmaxClassifier::Standardize(const Matrix& x) const {
  Matrix out(x.rows(), x.cols() + 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.row(i).head(x.cols()) = (x.row(i) - mean_).cwiseQuotient(scale_);
  }
  out.col(x.cols()).setOnes();
  return out;
}

void SoftmaxClassifier::Fit(const Matrix& x, const std::vector<int>& labels,
                            int num_classes, double l2, int max_steps) {
  const Eigen::Index m = x.rows(), d = x.cols();
  if (m == 0 || static_cast<Eigen::Index>(labels.size()) != m) {
    throw InvalidInput("probe: labels do not match examples");
  }
  num_classes_ = num_classes;
  mean_ = x.colwise().mean();
  scale_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double var = (x.col(j).array() - mean_(j)).square().mean();
    scale_(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  const Matrix xs = Standardize(x);
  const Eigen::Index p = d + 1;
  const int k = num_classes;
  weights_ = Matrix::Zero(p, k);
  Matrix y = Matrix::Zero(m, k);
  for (Eigen::Index i = 0; i < m; ++i) y(i, labels[i]) = 1.0;

  // Regulariser on every weight except the bias row; the Hessian is
  // positive definite up to the softmax shift invariance, which the small
  // ridge on all entries removes.
  Eigen::VectorXd reg = Eigen::VectorXd::Constant(p * k, l2 * m);
  for (int c = 0; c < k; ++c) reg(c * p + d) = 1e-8 * m;

  for (int step = 0; step < max_steps; ++step) {
    Matrix prob = Probabilities(x);
    Matrix grad = xs.transpose() * (prob - y);  // [p x k]
    Eigen::VectorXd gv(p * k);
    for (int c = 0; c < k; ++c) {
      gv.segment(c * p, p) = grad.col(c) + reg.segment(c * p, p).cwiseProduct(weights_.col(c));
    }
    Matrix hess = Matrix::Zero(p * k, p * k);
    for (int a = 0; a < k; ++a) {
      for (int b = a; b < k; ++b) {
        Eigen::VectorXd w(m);
        for (Eigen::Index i = 0; i < m; ++i) {
          w(i) = prob(i, a) * ((a == b ? 1.0 : 0.0) - prob(i, b));
        }
        Matrix block = xs.transpose() * w.asDiagonal() * xs;
        hess.block(a * p, b * p, p, p) = block;
        if (a != b) hess.block(b * p, a * p, p, p) = block.transpose();
      }
    }
    hess.diagonal() += reg;
    Eigen::VectorXd delta = hess.ldlt().solve(gv);
    for (int c = 0; c < k; ++c) weights_.col(c) -= delta.segment(c * p, p);
    if (delta.cwiseAbs().maxCoeff() < 1e-10) break;
  }
}

Matrix SoftmaxClassifier::Probabilities(const Matrix& x) const {
  Matrix logits = Standardize(x) * weights_;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double mx = logits.row(i).maxCoeff();
    logits.row(i) = (logits.row(i).array() - mx).exp().matrix();
    logits.row(i) /= logits.row(i).sum();
  }
  return logits;
}

std::vector<int> SoftmaxClassifier::Predict(const Matrix& x) const {
  Matrix prob = Probabilities(x);
  std::vector<int> out(static_cast<size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best;
    prob.row(i).maxCoeff(&best);
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> StratifiedFolds(const std::vector<int>& labels, int folds, uint64_t seed) {
  std::map<int, std::vector<int>> by_class;
  for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(static_cast<int>(i));
  Rng rng = Rng(seed).Derive("folds");
  std::vector<int> fold(labels.size(), 0);
  int next = 0;
  for (auto& [label, idx] : by_class) {
    rng.Shuffle(&idx);
    for (int i : idx) {
      fold[i] = next;
      next = (next + 1) % folds;
    }
  }
  return fold;
}

double LeakageProbe(const Matrix& pools, const std::vector<int>& labels,
                    const ProbeOptions& options) {
  if (pools.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw InvalidInput("probe: labels do not match pooled latents");
  }
  if (options.folds < 2) throw InvalidInput("probe: need at least two folds");
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  if (counts.size() < 2) throw InvalidInput("probe: degenerate label distribution (one class)");
  for (const auto& [label, n] : counts) {
    if (n < 4) {
      throw InvalidInput("probe: degenerate label distribution (class " + std::to_string(label) +
                         " has " + std::to_string(n) + " examples)");
    }
  }
  std::map<int, int> index;
  for (const auto& [label, n] : counts) index.emplace(label, static_cast<int>(index.size()));
  std::vector<int> y(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) y[i] = index.at(labels[i]);
  const int k = static_cast<int>(index.size());

  const std::vector<int> fold = StratifiedFolds(labels, options.folds, options.seed);
  int correct = 0;
  for (int f = 0; f < options.folds; ++f) {
    std::vector<int> train, test;
    for (size_t i = 0; i < y.size(); ++i) (fold[i] == f ? test : train).push_back(static_cast<int>(i));
    if (test.empty()) continue;
    Matrix xtr(static_cast<Eigen::Index>(train.size()), pools.cols());
    std::vector<int> ytr;
    for (size_t i = 0; i < train.size(); ++i) {
      xtr.row(static_cast<Eigen::Index>(i)) = pools.row(train[i]);
      ytr.push_back(y[train[i]]);
    }
    Matrix xte(static_cast<Eigen::Index>(test.size()), pools.cols());
    for (size_t i = 0; i < test.size(); ++i) xte.row(static_cast<Eigen::Index>(i)) = pools.row(test[i]);
    SoftmaxClassifier clf;
    clf.Fit(xtr, ytr, k, options.l2, options.max_newton_steps);
    std::vector<int> pred = clf.Predict(xte);
    for (size_t i = 0; i < test.size(); ++i) correct += pred[i] == y[test[i]];
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

}  // namespace fgtts::eval
