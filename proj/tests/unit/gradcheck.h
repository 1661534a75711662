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

#ifndef FGTTS_TESTS_UNIT_GRADCHECK_H_
#define FGTTS_TESTS_UNIT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "fgtts/nn/graph.h"
#include "fgtts/nn/parameters.h"

namespace fgtts::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;
  int checked = 0;
};

// Compares analytic gradients of `loss_fn` with central finite differences
// for every non-frozen parameter entry. The relative error uses
// |a - n| / max(|a| + |n|, floor) so entries with tiny gradients are
// judged on an absolute scale.
inline GradCheckResult CheckGradients(
    nn::ParameterSet* params,
    const std::function<nn::Var(nn::Graph&)>& loss_fn, double step = 1e-6,
    double floor = 1e-6) {
  params->ZeroGrad();
  {
    nn::Graph g;
    nn::Var loss = loss_fn(g);
    g.Backward(loss);
  }
  GradCheckResult result;
  for (const auto& p : params->all()) {
    if (p->frozen) continue;
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double orig = p->value.data()[i];
      p->value.data()[i] = orig + step;
      double up;
      {
        nn::Graph g(false);
        up = loss_fn(g).scalar();
      }
      p->value.data()[i] = orig - step;
      double down;
      {
        nn::Graph g(false);
        down = loss_fn(g).scalar();
      }
      p->value.data()[i] = orig;
      double numeric = (up - down) / (2.0 * step);
      double analytic = p->grad.data()[i];
      double rel = std::abs(analytic - numeric) /
                   std::max(std::abs(analytic) + std::abs(numeric), floor);
      ++result.checked;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst = p->name + "[" + std::to_string(i) + "] analytic=" +
                       std::to_string(analytic) + " numeric=" +
                       std::to_string(numeric);
      }
    }
  }
  return result;
}

}  // namespace fgtts::testing

#endif  // FGTTS_TESTS_UNIT_GRADCHECK_H_
