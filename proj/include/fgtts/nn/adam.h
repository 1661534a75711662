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

#ifndef FGTTS_NN_ADAM_H_
#define FGTTS_NN_ADAM_H_

#include <vector>

#include "fgtts/nn/parameters.h"

namespace fgtts::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Global gradient-norm clip; <= 0 disables clipping.
  double clip_norm = 1.0;
  // Linear warm-up over `warmup_steps`, then lr * decay_rate^(k/decay_steps).
  int warmup_steps = 100;
  double decay_rate = 0.5;
  int decay_steps = 2000;
};

class Adam {
 public:
  Adam(ParameterSet* params, const AdamOptions& options);

  // Applies one update using the accumulated gradients and returns the
  // pre-clip global gradient norm. Updated weights are rounded to float32.
  double Step();
  double LearningRate(int step) const;
  int step() const { return step_; }

 private:
  ParameterSet* params_;
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  int step_ = 0;
};

}  // namespace fgtts::nn

#endif  // FGTTS_NN_ADAM_H_
