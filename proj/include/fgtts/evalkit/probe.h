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

#ifndef FGTTS_EVALKIT_PROBE_H_
#define FGTTS_EVALKIT_PROBE_H_

#include <cstdint>
#include <vector>

#include "fgtts/common/matrix.h"

namespace fgtts::eval {

struct ProbeOptions {
  int folds = 5;
  double l2 = 0.01;  // penalty on weights (not biases), per example
  int max_newton_steps = 50;
  uint64_t seed = 7;
};

// Multinomial logistic regression on standardised features, fitted by
// Newton's method.
class SoftmaxClassifier {
 public:
  void Fit(const Matrix& x, const std::vector<int>& labels, int num_classes, double l2,
           int max_steps);
  std::vector<int> Predict(const Matrix& x) const;
  Matrix Probabilities(const Matrix& x) const;

 private:
  Matrix Standardize(const Matrix& x) const;

  int num_classes_ = 0;
  RowVector mean_;
  RowVector scale_;
  Matrix weights_;  // [(d + 1) x K], last row is the bias
};

// Stratified k-fold cross-validated accuracy of a SoftmaxClassifier that
// predicts `labels` from the rows of `pools`. Throws InvalidInput with fewer
// than two classes, fewer than four examples of some class, or a row count
// mismatch.
double LeakageProbe(const Matrix& pools, const std::vector<int>& labels,
                    const ProbeOptions& options = {});

// Stratified fold index of every example.
std::vector<int> StratifiedFolds(const std::vector<int>& labels, int folds, uint64_t seed);

}  // namespace fgtts::eval

#endif  // FGTTS_EVALKIT_PROBE_H_
