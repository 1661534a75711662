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

#ifndef FGTTS_TRAINER_TRAINER_H_
#define FGTTS_TRAINER_TRAINER_H_

#include <memory>
#include <vector>

#include "fgtts/common/config.h"
#include "fgtts/corpus/types.h"
#include "fgtts/trainer/checkpoint.h"
#include "fgtts/trainer/model.h"
#include "fgtts/trainer/train_config.h"

namespace fgtts::trainer {

struct CorpusSplit {
  std::vector<int> train;
  std::vector<int> heldout;
};

// Deterministic in (corpus size, fraction, seed). At least one utterance
// stays in the training part.
CorpusSplit SplitCorpus(const corpus::CorpusManifest& corpus, double heldout_fraction,
                        uint64_t seed);

// Per-utterance loss terms as sums; callers normalise by the batch totals.
struct UtteranceLoss {
  Var reconstruction;  // sum of |y' - y| over frames and bins
  Var kl;              // sum over tokens of KL(q || N(0, I))
  Var prior_kl;        // sum over tokens of KL(q' || p')
  Var duration;        // sum over tokens of squared log-duration error
  int elements = 0;
  int tokens = 0;
};

// Builds every loss term the model's stage trains. With `noise_rng` null the
// posterior mean is used; with `dropout_rng` null the pre-net is
// deterministic.
UtteranceLoss ComputeUtteranceLoss(const TtsModel& model, Graph& g,
                                   const corpus::UtteranceRecord& rec, Rng* noise_rng,
                                   Rng* dropout_rng);

// Weighted combination for one utterance given batch totals.
Var CombineLoss(const TtsModel& model, const UtteranceLoss& loss, double kl_weight,
                double prior_weight, double total_elements, double total_tokens);

struct TrainResult {
  Checkpoint checkpoint;
  std::unique_ptr<TtsModel> model;
  CorpusSplit split;
};

// Dispatches on train.stage. A stage2 run needs train.stage1_checkpoint.
// Fills model.vocab_size when it is 0.
TrainResult Train(const Config& config, const corpus::CorpusManifest& corpus);

// Same, with the stage-1 checkpoint passed explicitly.
TrainResult TrainStage2(const Config& config, const corpus::CorpusManifest& corpus,
                        const Checkpoint& stage1);

std::unique_ptr<TtsModel> ModelFromCheckpoint(const Checkpoint& ckpt);

// Config keys that must agree between a stage-1 checkpoint and a stage-2
// run.
const std::vector<std::string>& Stage1DimensionKeys();

}  // namespace fgtts::trainer

#endif  // FGTTS_TRAINER_TRAINER_H_
