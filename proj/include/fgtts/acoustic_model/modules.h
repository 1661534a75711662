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

#ifndef FGTTS_ACOUSTIC_MODEL_MODULES_H_
#define FGTTS_ACOUSTIC_MODEL_MODULES_H_

#include <optional>
#include <vector>

#include "fgtts/common/matrix.h"
#include "fgtts/common/random.h"
#include "fgtts/nn/graph.h"
#include "fgtts/nn/layers.h"

namespace fgtts::acoustic {

using nn::Graph;
using nn::ParameterSet;
using nn::Var;

inline constexpr double kLogSigmaMin = -8.0;
inline constexpr double kLogSigmaMax = 2.0;

// Per-bin standardisation of log-mel frames. The statistics are stored as
// frozen parameters so they travel with checkpoints.
class FeatureNorm {
 public:
  FeatureNorm() = default;
  FeatureNorm(ParameterSet* params, const std::string& name, int n_mels);

  // Sets the statistics from training frames; std is floored at 1e-3.
  void Fit(const std::vector<const Matrix*>& frames);
  Matrix Normalize(const Matrix& y) const;
  Matrix Denormalize(const Matrix& y) const;
  const RowVector mean() const;
  const RowVector stddev() const;

 private:
  nn::Parameter* mean_ = nullptr;
  nn::Parameter* std_ = nullptr;
};

// Embedding, convolution stack with ReLU, bidirectional LSTM.
class TextEncoder {
 public:
  TextEncoder() = default;
  TextEncoder(ParameterSet* params, const std::string& name, int vocab, int d_emb,
              int d_h, int conv_layers, int conv_kernel, Rng* rng);
  // [N x d_h]. Throws InvalidInput for ids outside the vocabulary.
  Var Forward(Graph& g, const std::vector<int>& ids) const;
  int d_h() const { return d_h_; }

 private:
  nn::Embedding embedding_;
  std::vector<nn::Conv1d> convs_;
  nn::BiLstm lstm_;
  int d_h_ = 0;
};

struct Alignment {
  Var aligned;  // [N x n_values]
  Var weights;  // [N x T]
};

// Location-sensitive attention with token encodings as queries and
// spectrogram frames as keys and values. Tokens are processed in order; the
// location features of token n come from the attention row of token n-1
// (a one-hot on frame 0 for the first token).
class LocationAttention {
 public:
  LocationAttention() = default;
  LocationAttention(ParameterSet* params, const std::string& name, int d_query,
                    int d_key, int d_att, int loc_kernel, Rng* rng);
  // `frames` [T x d_key] serve as keys and values. With `uniform` set every
  // row is 1/T.
  Alignment Forward(Graph& g, Var queries, Var frames, bool uniform = false) const;

 private:
  nn::Linear query_;
  nn::Linear key_;
  nn::Linear location_;
  nn::Linear score_;
  int loc_kernel_ = 1;
};

struct Posterior {
  Var mu;         // [N x d_z]
  Var log_sigma;  // [N x d_z], clamped
};

class PosteriorEncoder {
 public:
  PosteriorEncoder() = default;
  PosteriorEncoder(ParameterSet* params, const std::string& name, int in, int hidden,
                   int d_z, Rng* rng);
  Posterior Forward(Graph& g, Var x) const;

 private:
  nn::Linear hidden_;
  nn::Linear mu_;
  nn::Linear log_sigma_;
};

// z = mu + exp(log_sigma) * noise.
Var Reparameterize(Graph& g, const Posterior& post, const Matrix& noise);

// Frame t is owned by token i(t) with d_0 + ... + d_{i-1} <= t < ... + d_i.
std::vector<int> FrameOwners(const std::vector<int>& durations);
// Replicates row i of x d_i times. Throws EmptyOutput when sum(d) == 0 and
// InvalidInput on negative durations or a length mismatch.
Var Upsample(Var x, const std::vector<int>& durations);

// Autoregressive frame decoder: a two-layer ReLU pre-net on the previous
// frame, an LSTM over [prenet, u_t], and a linear output from [h_t, u_t].
// Frames are in normalised units; frame -1 is the zero vector.
class Decoder {
 public:
  Decoder() = default;
  Decoder(ParameterSet* params, const std::string& name, int d_u, int n_mels,
          int prenet_dim, int hidden, double prenet_dropout, Rng* rng);

  // Teacher forcing with previous frames from `teacher` [T x n_mels]. Pre-net
  // dropout is applied when `dropout_rng` is given.
  Var TeacherForced(Graph& g, Var u, const Matrix& teacher,
                    Rng* dropout_rng = nullptr) const;
  // Feeds back its own predictions.
  Var FreeRunning(Graph& g, Var u) const;

  int n_mels() const { return n_mels_; }

 private:
  Var Prenet(Graph& g, Var x, Rng* dropout_rng) const;

  nn::Linear prenet1_;
  nn::Linear prenet2_;
  nn::Lstm lstm_;
  nn::Linear out_;
  int n_mels_ = 0;
  int hidden_ = 0;
  double dropout_ = 0.0;
};

// Per-token regression of log(1 + d) for the variants without a latent
// prior.
class DurationPredictor {
 public:
  DurationPredictor() = default;
  DurationPredictor(ParameterSet* params, const std::string& name, int in, int hidden,
                    Rng* rng);
  Var Forward(Graph& g, Var x) const;  // [N x 1]

 private:
  nn::Linear hidden_;
  nn::Linear out_;
};

Var Dropout(Graph& g, Var x, double rate, Rng* rng);

}  // namespace fgtts::acoustic

#endif  // FGTTS_ACOUSTIC_MODEL_MODULES_H_
