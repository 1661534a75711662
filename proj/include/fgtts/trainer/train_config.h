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

#ifndef FGTTS_TRAINER_TRAIN_CONFIG_H_
#define FGTTS_TRAINER_TRAIN_CONFIG_H_

#include <string>
#include <vector>

#include "fgtts/common/config.h"
#include "fgtts/nn/adam.h"

namespace fgtts::trainer {

// Every recognised key with its default value.
Config DefaultConfig();

// Defaults, then `path` (if non-empty), then FGTTS_* environment variables,
// then `overrides`. Unknown keys raise ConfigError.
Config ResolveConfig(const std::string& path, const std::vector<std::string>& overrides);

struct TrainOptions {
  int steps = 1000;
  int batch_size = 16;
  int bucket_batches = 4;
  uint64_t seed = 1;
  double kl_weight = 0.005;
  int kl_warmup_steps = 400;
  double heldout_fraction = 0.1;
  int eval_every = 200;
  int eval_mcd_utterances = 4;
  int log_every = 50;
  double joint_prior_weight = 1.0;
  std::string stage1_checkpoint;
  // Restore the parameters of the eval step with the lowest held-out loss.
  bool keep_best = false;
  nn::AdamOptions adam;

  static TrainOptions FromConfig(const Config& config);
};

}  // namespace fgtts::trainer

#endif  // FGTTS_TRAINER_TRAIN_CONFIG_H_
