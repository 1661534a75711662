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

#include "fgtts/prior_network/prior.h"

#include <algorithm>
#include <cmath>

#include "fgtts/acoustic_model/losses.h"
#include "fgtts/common/error.h"

namespace fgtts::prior {

ReferenceEncoder::ReferenceEncoder(ParameterSet* params, const std::string& name,
                                   int n_mels, int channels, int hidden, int d_g, Rng* rng)
    : d_g_(d_g) {
  int in = n_mels;
  for (int b = 0; b < kBlocks; ++b) {
    int out = channels << b;
    convs_.emplace_back(params, name + ".conv" + std::to_string(b), in, out, kKernel,
                        kStride, 0, rng);
    in = out;
  }
  lstm_ = nn::BiLstm(params, name + ".lstm", in, hidden, rng);
  proj_ = nn::Linear(params, name + ".proj", 2 * hidden, d_g, rng);
}

int ReferenceEncoder::MinFrames() {
  int t = 1;
  for (int b = 0; b < kBlocks; ++b) t = (t - 1) * kStride + kKernel;
  return t;
}

Var ReferenceEncoder::Forward(Graph& g, const Matrix& frames) const {
  if (frames.rows() < MinFrames()) throw ReferenceTooShort(MinFrames());
  Var x = g.Constant(frames);
  for (const auto& conv : convs_) x = nn::Relu(conv(g, x));
  return nn::Tanh(proj_(g, nn::MeanRows(lstm_.Forward(g, x))));
}

double EncodeDuration(int frames) {
  if (frames < 0) throw InvalidInput("negative duration");
  return std::log1p(static_cast<double>(frames));
}

int DecodeDuration(double v, int floor) {
  v = std::min(v, std::log1p(1e5));
  long d = std::lround(std::expm1(v));
  return static_cast<int>(std::max<long>(d, floor));
}

ArPrior::ArPrior(ParameterSet* params, const std::string& name, int d_z, int d_h, int d_g,
                 int hidden, bool include_current_h, Rng* rng)
    : d_z_(d_z), d_h_(d_h), d_g_(d_g), hidden_(hidden), include_current_h_(include_current_h) {
  start_z_ = params->Create(name + ".start_z", 1, d_z + 1);
  start_h_ = params->Create(name + ".start_h", 1, d_h);
  int in = (d_z + 1) + d_h * (include_current_h ? 2 : 1) + d_g;
  lstm_ = nn::Lstm(params, name + ".lstm", in, hidden, rng);
  mu_ = nn::Linear(params, name + ".mu", hidden, d_z + 1, rng);
  log_sigma_ = nn::Linear(params, name + ".log_sigma", hidden, d_z + 1, rng);
}

Var ArPrior::StepInputs(Var h, Var gvec, Var z_prev, Var h_prev) const {
  std::vector<Var> parts{z_prev, h_prev};
  if (include_current_h_) parts.push_back(h);
  if (d_g_ > 0) parts.push_back(nn::BroadcastRows(gvec, h.rows()));
  return nn::ConcatCols(parts);
}

PriorParams ArPrior::Forward(Graph& g, Var h, Var gvec, Var z_ext) const {
  const Eigen::Index n = h.rows();
  if (h.cols() != d_h_) throw ShapeMismatch("prior: token encodings have wrong width");
  if (z_ext.rows() != n || z_ext.cols() != d_z_ + 1) {
    throw ShapeMismatch("prior: teacher latents must be [N x (d_z + 1)]");
  }
  if (d_g_ > 0 && (!gvec.valid() || gvec.rows() != 1 || gvec.cols() != d_g_)) {
    throw ShapeMismatch("prior: utterance embedding must be [1 x d_g]");
  }
  Var z_prev = g.Param(start_z_);
  Var h_prev = g.Param(start_h_);
  if (n > 1) {
    z_prev = nn::ConcatRows({z_prev, nn::SliceRows(z_ext, 0, n - 1)});
    h_prev = nn::ConcatRows({h_prev, nn::SliceRows(h, 0, n - 1)});
  }
  Var x = StepInputs(h, gvec, z_prev, h_prev);
  Var out = nn::SliceCols(lstm_.Run(g, lstm_.Project(g, x), lstm_.ZeroState(g)), 0, hidden_);
  return {mu_(g, out),
          nn::Clamp(log_sigma_(g, out), acoustic::kLogSigmaMin, acoustic::kLogSigmaMax)};
}

PriorSample ArPrior::Sample(const Matrix& h, const Matrix* gvec, double temperature,
                            Rng* rng, int duration_floor,
                            const std::vector<int>* forced_durations) const {
  if (temperature < 0.0) throw InvalidInput("temperature must be non-negative");
  if (h.cols() != d_h_) throw ShapeMismatch("prior: token encodings have wrong width");
  if (d_g_ > 0 && (gvec == nullptr || gvec->cols() != d_g_)) {
    throw ShapeMismatch("prior: utterance embedding must be [1 x d_g]");
  }
  const Eigen::Index n = h.rows();
  if (forced_durations != nullptr && static_cast<Eigen::Index>(forced_durations->size()) != n) {
    throw ShapeMismatch("prior: forced durations do not match the token count");
  }
  Graph g(false);
  Var hv = g.Constant(h);
  Var gv = d_g_ > 0 ? g.Constant(*gvec) : Var();
  Var z_prev = g.Param(start_z_);
  Var h_prev = g.Param(start_h_);
  nn::LstmState state = lstm_.ZeroState(g);
  PriorSample s;
  s.z.resize(n, d_z_);
  s.z_ext.resize(n, d_z_ + 1);
  s.durations.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Var hi = nn::SliceRows(hv, i, 1);
    state = lstm_.Step(g, StepInputs(hi, gv, z_prev, h_prev), state);
    const Matrix mu = mu_(g, state.h).value();
    const Matrix ls = log_sigma_(g, state.h)
                          .value()
                          .cwiseMax(acoustic::kLogSigmaMin)
                          .cwiseMin(acoustic::kLogSigmaMax);
    RowVector z_ext(d_z_ + 1);
    for (int k = 0; k <= d_z_; ++k) {
      double eps = temperature > 0.0 ? rng->Normal() : 0.0;
      z_ext(k) = mu(0, k) + temperature * std::exp(ls(0, k)) * eps;
    }
    if (forced_durations != nullptr) {
      s.durations[i] = (*forced_durations)[i];
      z_ext(d_z_) = EncodeDuration(s.durations[i]);
    } else {
      s.durations[i] = DecodeDuration(z_ext(d_z_), duration_floor);
    }
    s.z_ext.row(i) = z_ext;
    s.z.row(i) = z_ext.head(d_z_);
    z_prev = g.Constant(Matrix(z_ext));
    h_prev = hi;
  }
  return s;
}

Matrix ExtendedTeacher(const Matrix& post_mu, const std::vector<int>& durations) {
  if (static_cast<Eigen::Index>(durations.size()) != post_mu.rows()) {
    throw ShapeMismatch("duration count differs from token count");
  }
  Matrix out(post_mu.rows(), post_mu.cols() + 1);
  out.leftCols(post_mu.cols()) = post_mu;
  for (size_t i = 0; i < durations.size(); ++i) {
    out(static_cast<Eigen::Index>(i), post_mu.cols()) = EncodeDuration(durations[i]);
  }
  return out;
}

Var Stage2KlSum(Graph& g, Var post_mu, Var post_log_sigma, const std::vector<int>& durations,
                const PriorParams& prior) {
  const Eigen::Index n = post_mu.rows();
  if (static_cast<Eigen::Index>(durations.size()) != n || prior.mu.rows() != n ||
      prior.mu.cols() != post_mu.cols() + 1) {
    throw ShapeMismatch("stage-2 KL: posterior, durations and prior disagree");
  }
  Matrix dur(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) dur(i, 0) = EncodeDuration(durations[i]);
  Var mu_q = nn::ConcatCols({post_mu, g.Constant(std::move(dur))});
  Var ls_q = nn::ConcatCols({post_log_sigma, g.Constant(Matrix::Constant(n, 1, kDurationLogSigma))});
  return nn::SumAll(nn::GaussianKl(mu_q, ls_q, prior.mu, prior.log_sigma));
}

double Stage2Kl(const Matrix& post_mu, const Matrix& post_log_sigma,
                const std::vector<int>& durations, const Matrix& prior_mu,
                const Matrix& prior_log_sigma) {
  const Eigen::Index n = post_mu.rows();
  const Eigen::Index dz = post_mu.cols();
  if (static_cast<Eigen::Index>(durations.size()) != n || prior_mu.rows() != n ||
      prior_mu.cols() != dz + 1 || prior_log_sigma.rows() != n ||
      prior_log_sigma.cols() != dz + 1 || post_log_sigma.rows() != n ||
      post_log_sigma.cols() != dz) {
    throw ShapeMismatch("stage-2 KL: posterior, durations and prior disagree");
  }
  if (n == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < dz; ++k) {
      total += acoustic::GaussianKl(post_mu(i, k), post_log_sigma(i, k), prior_mu(i, k),
                                    prior_log_sigma(i, k));
    }
    total += acoustic::GaussianKl(EncodeDuration(durations[i]), kDurationLogSigma,
                                  prior_mu(i, dz), prior_log_sigma(i, dz));
  }
  return total / static_cast<double>(n);
}

}  // namespace fgtts::prior
