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

#ifndef FGTTS_TRAINER_MODEL_H_
#define FGTTS_TRAINER_MODEL_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fgtts/acoustic_model/losses.h"
#include "fgtts/acoustic_model/modules.h"
#include "fgtts/common/config.h"
#include "fgtts/corpus/types.h"
#include "fgtts/prior_network/prior.h"

namespace fgtts::trainer {

using nn::Graph;
using nn::Var;

// What a checkpoint contains and which training objective applies.
//   stage1          text encoder, attention, posterior, decoder
//   stage2          stage1 plus reference encoder and AR prior
//   joint_baseline  as stage2, posterior also reads g, trained in one stage
//   nat_plain       text encoder, decoder, duration predictor
//   nat_global      nat_plain plus reference encoder feeding decoder and
//                   duration predictor
enum class Stage { kStage1, kStage2, kJointBaseline, kNatPlain, kNatGlobal };

Stage ParseStage(const std::string& name);
std::string StageName(Stage stage);

struct ModelConfig {
  Stage stage = Stage::kStage1;
  int vocab_size = 32;
  int n_mels = 80;
  int d_emb = 32;
  int d_h = 32;
  int text_conv_layers = 1;
  int text_conv_kernel = 5;
  int d_z = 8;
  int d_att = 32;
  int loc_kernel = 15;
  int posterior_hidden = 64;
  int prenet_dim = 32;
  int decoder_hidden = 64;
  double prenet_dropout = 0.5;
  int d_g = 16;
  int ref_channels = 16;
  int ref_hidden = 16;
  int prior_hidden = 64;
  bool prior_include_current_h = false;
  // Teacher-force the prior with posterior samples instead of means.
  bool prior_sampled_teacher = false;
  int duration_hidden = 32;
  int duration_floor = 1;

  bool has_latent() const { return stage != Stage::kNatPlain && stage != Stage::kNatGlobal; }
  bool has_reference() const { return stage != Stage::kStage1 && stage != Stage::kNatPlain; }
  bool has_prior() const { return stage == Stage::kStage2 || stage == Stage::kJointBaseline; }
  bool has_duration_predictor() const { return !has_latent(); }
  int effective_d_z() const { return has_latent() ? d_z : 0; }
  int effective_d_g() const { return has_reference() ? d_g : 0; }

  // Throws ConfigError.
  void Validate() const;
  static ModelConfig FromConfig(const Config& config);
  void ToConfig(Config* config) const;
};

// Parameter name prefixes trained in stage 1.
const std::vector<std::string>& Stage1Prefixes();

struct Synthesis {
  Matrix frames;  // raw log-mel [T x n_mels]
  std::vector<int> durations;
  Matrix latents;  // [N x d_z], empty for nat variants
};

// Every network the configured stage needs, sharing one parameter set.
class TtsModel {
 public:
  TtsModel(const ModelConfig& config, uint64_t seed);

  const ModelConfig& config() const { return config_; }
  nn::ParameterSet& params() { return params_; }
  const nn::ParameterSet& params() const { return params_; }
  acoustic::FeatureNorm& norm() { return norm_; }
  const acoustic::FeatureNorm& norm() const { return norm_; }

  // Building blocks. Frames passed in are normalised.
  Var EncodeText(Graph& g, const std::vector<int>& ids) const;
  Var EncodeReference(Graph& g, const Matrix& frames_norm) const;
  acoustic::Alignment Align(Graph& g, Var h, Var frames_norm, bool uniform = false) const;
  // `gvec` is used by the joint baseline only.
  acoustic::Posterior PosteriorOf(Graph& g, Var aligned, Var gvec) const;
  // Decoder input for each token: [h, z] or [h, g] or [h].
  Var TokenConditioning(Graph& g, Var h, Var z, Var gvec) const;
  Var DecodeTeacherForced(Graph& g, Var u_frames, const Matrix& teacher_norm,
                          Rng* dropout_rng) const;
  Var DecodeFreeRunning(Graph& g, Var u_frames) const;
  prior::PriorParams Prior(Graph& g, Var h, Var gvec, Var z_ext) const;
  Var Durations(Graph& g, Var h, Var gvec) const;  // log(1 + d) per token

  // Posterior means for an utterance ([N x d_z]).
  Matrix PosteriorMeans(const corpus::UtteranceRecord& rec) const;

  // Copy synthesis with ground-truth durations. Latents are drawn from the
  // posterior at `temperature` (0 gives the mean). Variants with a
  // reference encoder use the utterance itself as reference.
  Synthesis CopySynthesize(const corpus::UtteranceRecord& rec, double temperature,
                           Rng* rng) const;

  // Synthesis from text, with latents and durations from the prior (or the
  // duration predictor). `reference` holds raw log-mel frames and is
  // required exactly when the stage has a reference encoder.
  // `forced_durations` replaces sampled or predicted durations, keeping the
  // output frame-aligned with a known utterance.
  Synthesis SynthesizeFromText(const std::vector<int>& token_ids, const Matrix* reference,
                               double temperature, Rng* rng,
                               const std::vector<int>* forced_durations = nullptr) const;

  // Utterance embedding of raw frames; empty without a reference encoder.
  RowVector ReferenceEmbedding(const Matrix& frames) const;

 private:
  ModelConfig config_;
  nn::ParameterSet params_;
  acoustic::FeatureNorm norm_;
  acoustic::TextEncoder text_;
  acoustic::LocationAttention attention_;
  acoustic::PosteriorEncoder posterior_;
  acoustic::Decoder decoder_;
  acoustic::DurationPredictor duration_;
  prior::ReferenceEncoder reference_;
  prior::ArPrior prior_;
};

}  // namespace fgtts::trainer

#endif  // FGTTS_TRAINER_MODEL_H_
