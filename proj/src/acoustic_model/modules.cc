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

#include "fgtts/acoustic_model/modules.h"

#include <cmath>

#include "fgtts/common/error.h"

namespace fgtts::acoustic {

FeatureNorm::FeatureNorm(ParameterSet* params, const std::string& name, int n_mels) {
  mean_ = params->Create(name + ".mean", 1, n_mels);
  std_ = params->Create(name + ".std", 1, n_mels);
  std_->value.setOnes();
  mean_->frozen = std_->frozen = true;
}

void FeatureNorm::Fit(const std::vector<const Matrix*>& frames) {
  const Eigen::Index m = mean_->value.cols();
  RowVector sum = RowVector::Zero(m), sq = RowVector::Zero(m);
  double count = 0.0;
  for (const Matrix* f : frames) {
    if (f->cols() != m) throw ShapeMismatch("FeatureNorm: bin count mismatch");
    sum += f->colwise().sum();
    sq += f->array().square().matrix().colwise().sum();
    count += static_cast<double>(f->rows());
  }
  if (count < 1.0) throw InvalidInput("FeatureNorm: no frames");
  RowVector mean = sum / count;
  RowVector var = (sq / count - mean.cwiseProduct(mean)).cwiseMax(0.0);
  mean_->value = mean;
  std_->value = var.cwiseSqrt().cwiseMax(1e-3);
  nn::RoundToFloat(&mean_->value);
  nn::RoundToFloat(&std_->value);
}

const RowVector FeatureNorm::mean() const { return mean_->value; }
const RowVector FeatureNorm::stddev() const { return std_->value; }

Matrix FeatureNorm::Normalize(const Matrix& y) const {
  return (y.rowwise() - RowVector(mean_->value)).array().rowwise() /
         RowVector(std_->value).array();
}

Matrix FeatureNorm::Denormalize(const Matrix& y) const {
  Matrix out = y.array().rowwise() * RowVector(std_->value).array();
  return out.rowwise() + RowVector(mean_->value);
}

TextEncoder::TextEncoder(ParameterSet* params, const std::string& name, int vocab,
                         int d_emb, int d_h, int conv_layers, int conv_kernel, Rng* rng)
    : embedding_(params, name + ".emb", vocab, d_emb, rng), d_h_(d_h) {
  if (d_h % 2 != 0) throw InvalidInput("d_h must be even");
  if (conv_kernel % 2 != 1) throw InvalidInput("text conv kernel must be odd");
  for (int l = 0; l < conv_layers; ++l) {
    convs_.emplace_back(params, name + ".conv" + std::to_string(l), d_emb, d_emb,
                        conv_kernel, 1, conv_kernel / 2, rng);
  }
  lstm_ = nn::BiLstm(params, name + ".lstm", d_emb, d_h / 2, rng);
}

Var TextEncoder::Forward(Graph& g, const std::vector<int>& ids) const {
  if (ids.empty()) throw InvalidInput("empty token sequence");
  Var x = embedding_(g, ids);
  for (const auto& conv : convs_) x = nn::Relu(conv(g, x));
  return lstm_.Forward(g, x);
}

LocationAttention::LocationAttention(ParameterSet* params, const std::string& name,
                                     int d_query, int d_key, int d_att, int loc_kernel,
                                     Rng* rng)
    : query_(params, name + ".query", d_query, d_att, rng, false),
      key_(params, name + ".key", d_key, d_att, rng),
      location_(params, name + ".loc", loc_kernel, d_att, rng, false),
      score_(params, name + ".score", d_att, 1, rng, false),
      loc_kernel_(loc_kernel) {
  if (loc_kernel % 2 != 1) throw InvalidInput("location kernel must be odd");
}

Alignment LocationAttention::Forward(Graph& g, Var queries, Var frames,
                                     bool uniform) const {
  const Eigen::Index n = queries.rows();
  const Eigen::Index t = frames.rows();
  if (n < 1 || t < 1) throw ShapeMismatch("attention needs N >= 1 and T >= 1");
  if (uniform) {
    Var w = g.Constant(Matrix::Constant(n, t, 1.0 / static_cast<double>(t)));
    return {nn::MatMul(w, frames), w};
  }
  Var keys = key_(g, frames);    // [T x A]
  Var q = query_(g, queries);    // [N x A]
  Matrix first = Matrix::Zero(1, t);
  first(0, 0) = 1.0;
  Var prev = g.Constant(first);
  std::vector<Var> rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    Var loc = location_(g, nn::Im2Col(nn::Transpose(prev), loc_kernel_, 1, loc_kernel_ / 2));
    Var e = nn::Tanh(nn::Add(nn::Add(keys, loc), nn::SliceRows(q, i, 1)));
    Var w = nn::SoftmaxRows(nn::Transpose(score_(g, e)));  // [1 x T]
    rows.push_back(w);
    prev = w;
  }
  Var w = nn::ConcatRows(rows);
  return {nn::MatMul(w, frames), w};
}

PosteriorEncoder::PosteriorEncoder(ParameterSet* params, const std::string& name, int in,
                                   int hidden, int d_z, Rng* rng)
    : hidden_(params, name + ".hidden", in, hidden, rng),
      mu_(params, name + ".mu", hidden, d_z, rng),
      log_sigma_(params, name + ".log_sigma", hidden, d_z, rng) {}

Posterior PosteriorEncoder::Forward(Graph& g, Var x) const {
  Var hid = nn::Tanh(hidden_(g, x));
  return {mu_(g, hid), nn::Clamp(log_sigma_(g, hid), kLogSigmaMin, kLogSigmaMax)};
}

Var Reparameterize(Graph& g, const Posterior& post, const Matrix& noise) {
  if (noise.rows() != post.mu.rows() || noise.cols() != post.mu.cols()) {
    throw ShapeMismatch("reparameterize: noise shape differs from posterior");
  }
  return nn::Add(post.mu, nn::Mul(nn::Exp(post.log_sigma), g.Constant(noise)));
}

std::vector<int> FrameOwners(const std::vector<int>& durations) {
  std::vector<int> owners;
  for (size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] < 0) throw InvalidInput("negative duration");
    owners.insert(owners.end(), durations[i], static_cast<int>(i));
  }
  return owners;
}

Var Upsample(Var x, const std::vector<int>& durations) {
  if (static_cast<Eigen::Index>(durations.size()) != x.rows()) {
    throw InvalidInput("upsample: " + std::to_string(durations.size()) + " durations for " +
                       std::to_string(x.rows()) + " tokens");
  }
  std::vector<int> owners = FrameOwners(durations);
  if (owners.empty()) throw EmptyOutput();
  return nn::GatherRows(x, owners);
}

Var Dropout(Graph& g, Var x, double rate, Rng* rng) {
  if (rng == nullptr || rate <= 0.0) return x;
  Matrix mask(x.rows(), x.cols());
  const double keep = 1.0 - rate;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = rng->Uniform(0.0, 1.0) < keep ? 1.0 / keep : 0.0;
  }
  return nn::Mul(x, g.Constant(std::move(mask)));
}

Decoder::Decoder(ParameterSet* params, const std::string& name, int d_u, int n_mels,
                 int prenet_dim, int hidden, double prenet_dropout, Rng* rng)
    : prenet1_(params, name + ".prenet1", n_mels, prenet_dim, rng),
      prenet2_(params, name + ".prenet2", prenet_dim, prenet_dim, rng),
      lstm_(params, name + ".lstm", prenet_dim + d_u, hidden, rng),
      out_(params, name + ".out", hidden + d_u, n_mels, rng),
      n_mels_(n_mels),
      hidden_(hidden),
      dropout_(prenet_dropout) {}

Var Decoder::Prenet(Graph& g, Var x, Rng* dropout_rng) const {
  Var p = Dropout(g, nn::Relu(prenet1_(g, x)), dropout_, dropout_rng);
  return Dropout(g, nn::Relu(prenet2_(g, p)), dropout_, dropout_rng);
}

Var Decoder::TeacherForced(Graph& g, Var u, const Matrix& teacher, Rng* dropout_rng) const {
  const Eigen::Index t = u.rows();
  if (teacher.rows() != t || teacher.cols() != n_mels_) {
    throw ShapeMismatch("decoder: teacher has " + std::to_string(teacher.rows()) +
                        " frames, expected " + std::to_string(t));
  }
  Matrix prev = Matrix::Zero(t, n_mels_);
  if (t > 1) prev.bottomRows(t - 1) = teacher.topRows(t - 1);
  Var p = Prenet(g, g.Constant(std::move(prev)), dropout_rng);
  Var h = nn::SliceCols(lstm_.Run(g, lstm_.Project(g, nn::ConcatCols({p, u})),
                                  lstm_.ZeroState(g)),
                        0, hidden_);
  return out_(g, nn::ConcatCols({h, u}));
}

Var Decoder::FreeRunning(Graph& g, Var u) const {
  const Eigen::Index t = u.rows();
  nn::LstmState state = lstm_.ZeroState(g);
  Var prev = g.Constant(Matrix::Zero(1, n_mels_));
  std::vector<Var> frames;
  frames.reserve(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    Var ui = nn::SliceRows(u, i, 1);
    Var p = Prenet(g, prev, nullptr);
    state = lstm_.Step(g, nn::ConcatCols({p, ui}), state);
    prev = out_(g, nn::ConcatCols({state.h, ui}));
    frames.push_back(prev);
  }
  return nn::ConcatRows(frames);
}

DurationPredictor::DurationPredictor(ParameterSet* params, const std::string& name, int in,
                                     int hidden, Rng* rng)
    : hidden_(params, name + ".hidden", in, hidden, rng),
      out_(params, name + ".out", hidden, 1, rng) {}

Var DurationPredictor::Forward(Graph& g, Var x) const {
  return out_(g, nn::Tanh(hidden_(g, x)));
}

}  // namespace fgtts::acoustic
