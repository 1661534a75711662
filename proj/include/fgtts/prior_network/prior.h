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

#ifndef FGTTS_PRIOR_NETWORK_PRIOR_H_
#define FGTTS_PRIOR_NETWORK_PRIOR_H_

#include <vector>

#include "fgtts/acoustic_model/modules.h"

namespace fgtts::prior {

using nn::Graph;
using nn::ParameterSet;
using nn::Var;

// Three stride-2 convolutions (channels c, 2c, 4c) with ReLU, a
// bidirectional LSTM, mean pooling over time and a tanh projection to d_g.
class ReferenceEncoder {
 public:
  static constexpr int kKernel = 3;
  static constexpr int kStride = 2;
  static constexpr int kBlocks = 3;

  ReferenceEncoder() = default;
  ReferenceEncoder(ParameterSet* params, const std::string& name, int n_mels, int channels,
                   int hidden, int d_g, Rng* rng);

  // `frames` are normalised log-mel frames [T x n_mels]; returns [1 x d_g].
  // Throws ReferenceTooShort when T < MinFrames().
  Var Forward(Graph& g, const Matrix& frames) const;
  static int MinFrames();
  int d_g() const { return d_g_; }

 private:
  std::vector<nn::Conv1d> convs_;
  nn::BiLstm lstm_;
  nn::Linear proj_;
  int d_g_ = 0;
};

// Duration channel: v = log(1 + d), inverted by round(exp(v) - 1).
double EncodeDuration(int frames);
int DecodeDuration(double v, int floor = 0);
inline constexpr double kDurationLogSigma = -2.995732273553991;  // log(0.05)

struct PriorParams {
  Var mu;         // [N x (d_z + 1)], last column is the duration channel
  Var log_sigma;  // clamped like the posterior
};

struct PriorSample {
  Matrix z;                // [N x d_z]
  std::vector<int> durations;
  Matrix z_ext;            // [N x (d_z + 1)], as fed back to the recurrence
};

// Gaussian autoregressive prior over z'_n = (z_n, D_n). Step n reads
// [z'_{n-1}, h_{n-1}, g] (optionally also h_n); z'_{-1} and h_{-1} are
// learned start vectors.
class ArPrior {
 public:
  ArPrior() = default;
  ArPrior(ParameterSet* params, const std::string& name, int d_z, int d_h, int d_g,
          int hidden, bool include_current_h, Rng* rng);

  // Teacher-forced parameters for all steps. `h` [N x d_h], `g` [1 x d_g]
  // (ignored when d_g == 0), `z_ext` [N x (d_z + 1)].
  PriorParams Forward(Graph& g, Var h, Var gvec, Var z_ext) const;

  // Ancestral sampling, z'_n = mu_n + temperature * sigma_n * eps. Durations
  // are decoded from the last channel and floored at `duration_floor`.
  // With `forced_durations` the duration channel is fixed to their encoding
  // instead of sampled, and they are returned as is.
  PriorSample Sample(const Matrix& h, const Matrix* gvec, double temperature, Rng* rng,
                     int duration_floor = 1,
                     const std::vector<int>* forced_durations = nullptr) const;

  int d_z() const { return d_z_; }
  int d_ext() const { return d_z_ + 1; }
  bool include_current_h() const { return include_current_h_; }

 private:
  Var StepInputs(Var h, Var gvec, Var z_prev_rows, Var h_prev_rows) const;

  nn::Parameter* start_z_ = nullptr;
  nn::Parameter* start_h_ = nullptr;
  nn::Lstm lstm_;
  nn::Linear mu_;
  nn::Linear log_sigma_;
  int d_z_ = 0;
  int d_h_ = 0;
  int d_g_ = 0;
  int hidden_ = 0;
  bool include_current_h_ = false;
};

// Teacher input for the prior: [mu_q, EncodeDuration(d)].
Matrix ExtendedTeacher(const Matrix& post_mu, const std::vector<int>& durations);

// Sum over tokens of KL(q_n || p_n), where q_n is the posterior extended by
// N(EncodeDuration(d_n), 0.05^2) on the duration channel.
Var Stage2KlSum(Graph& g, Var post_mu, Var post_log_sigma, const std::vector<int>& durations,
                const PriorParams& prior);

// Per-token mean of the above on plain values.
double Stage2Kl(const Matrix& post_mu, const Matrix& post_log_sigma,
                const std::vector<int>& durations, const Matrix& prior_mu,
                const Matrix& prior_log_sigma);

}  // namespace fgtts::prior

#endif  // FGTTS_PRIOR_NETWORK_PRIOR_H_
