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

#include "fgtts/corpus/pitch.h"

#include <algorithm>
#include <cmath>

#include "fgtts/common/error.h"
#include "fgtts/corpus/spectral_render.h"

namespace fgtts::corpus {

void PitchConfig::Validate() const {
  if (!(f0_min_hz > 0.0) || !(f0_max_hz > f0_min_hz)) {
    throw InvalidInput("pitch search range must satisfy 0 < min < max");
  }
}

namespace {

std::vector<double> HannWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
  return w;
}

std::vector<double> Autocorrelation(const std::vector<double>& x, int max_lag) {
  std::vector<double> r(max_lag + 1, 0.0);
  const int n = static_cast<int>(x.size());
  for (int lag = 0; lag <= max_lag && lag < n; ++lag) {
    double s = 0.0;
    for (int i = 0; i + lag < n; ++i) s += x[i] * x[i + lag];
    r[lag] = s;
  }
  return r;
}

}  // namespace

PitchTrack ExtractPitch(std::span<const double> waveform, int sample_rate_hz,
                        const MelConfig& mel_config, const PitchConfig& config) {
  if (waveform.empty()) throw InvalidInput("empty waveform");
  if (sample_rate_hz <= 0) throw InvalidInput("sample rate must be positive");
  config.Validate();
  MelConfig mc = mel_config;
  mc.sample_rate_hz = sample_rate_hz;
  const int frames = NumFrames(static_cast<int>(waveform.size()), mc);
  if (frames < 1) throw InvalidInput("waveform shorter than one frame");

  const int n = mc.frame_length;
  const std::vector<double> window = HannWindow(n);
  const int min_lag = std::max(2, static_cast<int>(std::floor(sample_rate_hz / config.f0_max_hz)));
  const int max_lag = std::min(n - 2, static_cast<int>(std::ceil(sample_rate_hz / config.f0_min_hz)));
  const std::vector<double> rw = Autocorrelation(window, max_lag + 1);

  std::vector<double> f0(frames, 0.0);
  for (int t = 0; t < frames; ++t) {
    std::vector<double> frame = GetFrame(waveform, t, mc);
    double mean = 0.0;
    for (double v : frame) mean += v;
    mean /= n;
    double energy = 0.0;
    for (int i = 0; i < n; ++i) {
      frame[i] -= mean;
      energy += frame[i] * frame[i];
      frame[i] *= window[i];
    }
    double rms = std::sqrt(energy / n);
    std::vector<double> r = Autocorrelation(frame, max_lag + 1);
    if (rms < config.silence_rms || r[0] <= 0.0) continue;
    // Normalised, window-corrected autocorrelation.
    std::vector<double> nr(max_lag + 2, 0.0);
    for (int lag = 0; lag <= max_lag + 1; ++lag) {
      nr[lag] = (r[lag] / r[0]) / (rw[lag] / rw[0]);
    }
    double best = -1.0;
    std::vector<int> peaks;
    for (int lag = min_lag; lag <= max_lag; ++lag) {
      if (nr[lag] >= nr[lag - 1] && nr[lag] >= nr[lag + 1]) {
        peaks.push_back(lag);
        best = std::max(best, nr[lag]);
      }
    }
    if (peaks.empty() || best < config.voicing_threshold) continue;
    int chosen = peaks.front();
    for (int lag : peaks) {
      if (nr[lag] >= (1.0 - config.octave_tolerance) * best) {
        chosen = lag;
        break;
      }
    }
    double a = nr[chosen - 1], b = nr[chosen], c = nr[chosen + 1];
    double denom = a - 2.0 * b + c;
    double offset = std::abs(denom) > 1e-12 ? 0.5 * (a - c) / denom : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    double hz = sample_rate_hz / (chosen + offset);
    if (hz >= config.f0_min_hz && hz <= config.f0_max_hz) f0[t] = hz;
  }
  return PitchTrack::FromF0(std::move(f0));
}

MelPitchEstimator::MelPitchEstimator(const MelConfig& mel_config,
                                     const MelPitchConfig& config)
    : config_(config) {
  SpectralRenderer renderer(mel_config);
  const auto& centers = renderer.filterbank().center_hz();
  const int n_mels = static_cast<int>(centers.size());
  num_bins_used_ = 0;
  while (num_bins_used_ < n_mels && centers[num_bins_used_] <= config.max_hz) ++num_bins_used_;
  if (num_bins_used_ <= config.envelope_order + 2) {
    throw InvalidInput("mel pitch estimator: too few bins below max_hz");
  }
  // Orthonormal basis of the low-order cosine (envelope) subspace over the
  // used bins; the projector removes it.
  const int m = num_bins_used_;
  Matrix basis(m, config.envelope_order);
  for (int k = 0; k < config.envelope_order; ++k) {
    for (int i = 0; i < m; ++i) basis(i, k) = std::cos(M_PI * k * (i + 0.5) / m);
  }
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ() * Matrix::Identity(m, config.envelope_order);
  projector_ = Matrix::Identity(m, m) - q * q.transpose();

  auto flat = [](double) { return std::log(0.05); };
  for (double f = config.f0_min_hz; f <= config.f0_max_hz; f *= std::exp(config.grid_step)) {
    candidates_.push_back(f);
  }
  templates_.resize(static_cast<Eigen::Index>(candidates_.size()), m);
  for (size_t c = 0; c < candidates_.size(); ++c) {
    RowVector t = renderer.RenderLogMel(candidates_[c], flat, 0.01);
    RowVector r = Residual(t);
    templates_.row(static_cast<Eigen::Index>(c)) = r / std::max(r.norm(), 1e-12);
  }
}

RowVector MelPitchEstimator::Residual(const RowVector& log_mel) const {
  RowVector head = log_mel.head(num_bins_used_);
  return head * projector_;
}

double MelPitchEstimator::EstimateFrame(const RowVector& log_mel, double* score) const {
  RowVector r = Residual(log_mel);
  double norm = r.norm();
  if (norm < 1e-9) {
    if (score) *score = 0.0;
    return 0.0;
  }
  Vector scores = templates_ * (r.transpose() / norm);
  Eigen::Index best;
  double s = scores.maxCoeff(&best);
  if (score) *score = s;
  if (s < config_.voicing_threshold) return 0.0;
  double offset = 0.0;
  if (best > 0 && best + 1 < scores.size()) {
    double a = scores(best - 1), b = scores(best), c = scores(best + 1);
    double denom = a - 2.0 * b + c;
    if (std::abs(denom) > 1e-12) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return candidates_[static_cast<size_t>(best)] * std::exp(offset * config_.grid_step);
}

PitchTrack MelPitchEstimator::Estimate(const Matrix& log_mel) const {
  std::vector<double> f0(static_cast<size_t>(log_mel.rows()));
  for (Eigen::Index t = 0; t < log_mel.rows(); ++t) f0[t] = EstimateFrame(log_mel.row(t));
  return PitchTrack::FromF0(std::move(f0));
}

}  // namespace fgtts::corpus
