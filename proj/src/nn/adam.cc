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

#include "fgtts/nn/adam.h"

#include <algorithm>
#include <cmath>

namespace fgtts::nn {

Adam::Adam(ParameterSet* params, const AdamOptions& options)
    : params_(params), options_(options) {
  for (const auto& p : params_->all()) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

double Adam::LearningRate(int step) const {
  double warm = options_.warmup_steps > 0
                    ? std::min(1.0, static_cast<double>(step) / options_.warmup_steps)
                    : 1.0;
  int past = std::max(0, step - options_.warmup_steps);
  double decay = options_.decay_steps > 0
                     ? std::pow(options_.decay_rate,
                                static_cast<double>(past) / options_.decay_steps)
                     : 1.0;
  return options_.learning_rate * warm * decay;
}

double Adam::Step() {
  ++step_;
  const auto& all = params_->all();
  double sq = 0.0;
  for (const auto& p : all) {
    if (!p->frozen) sq += p->grad.squaredNorm();
  }
  double norm = std::sqrt(sq);
  double clip = 1.0;
  if (options_.clip_norm > 0.0 && norm > options_.clip_norm) {
    clip = options_.clip_norm / norm;
  }
  double lr = LearningRate(step_);
  double bc1 = 1.0 - std::pow(options_.beta1, step_);
  double bc2 = 1.0 - std::pow(options_.beta2, step_);
  for (size_t k = 0; k < all.size(); ++k) {
    Parameter& p = *all[k];
    if (p.frozen) continue;
    Matrix g = p.grad * clip;
    m_[k] = options_.beta1 * m_[k] + (1.0 - options_.beta1) * g;
    v_[k] = options_.beta2 * v_[k] + (1.0 - options_.beta2) * g.cwiseProduct(g);
    p.value.array() -= lr * (m_[k].array() / bc1) /
                       ((v_[k].array() / bc2).sqrt() + options_.epsilon);
    RoundToFloat(&p.value);
  }
  return norm;
}

}  // namespace fgtts::nn
