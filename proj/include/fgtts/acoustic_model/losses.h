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

#ifndef FGTTS_ACOUSTIC_MODEL_LOSSES_H_
#define FGTTS_ACOUSTIC_MODEL_LOSSES_H_

#include "fgtts/acoustic_model/modules.h"

namespace fgtts::acoustic {

struct LossBreakdown {
  double reconstruction = 0.0;
  double kl = 0.0;
  double kl_weight = 0.0;
  double total = 0.0;
};

// Sum over all entries of |y_pred - y| in log-mel units, where both are
// given in normalised units.
Var L1Sum(Graph& g, Var y_pred_norm, const Matrix& y_norm, const RowVector& stddev);

// Sum over tokens and dimensions of KL(N(mu, sigma^2) || N(0, 1)).
Var StandardNormalKlSum(Graph& g, const Posterior& post);

// Reconstruction is the mean L1 over all frame entries, kl the per-token
// mean of the summed KL to N(0, I).
LossBreakdown Stage1Loss(const Matrix& y, const Matrix& y_pred, const Matrix& mu,
                         const Matrix& log_sigma, double kl_weight);

// Closed-form KL between diagonal Gaussians, elementwise.
double GaussianKl(double mu_q, double log_sigma_q, double mu_p, double log_sigma_p);

// Linear warm-up from 0 to `target` over `warmup_steps` steps.
double KlWeight(int step, double target, int warmup_steps);

}  // namespace fgtts::acoustic

#endif  // FGTTS_ACOUSTIC_MODEL_LOSSES_H_
