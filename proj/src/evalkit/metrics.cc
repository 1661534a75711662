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

#include "fgtts/evalkit/metrics.h"

#include <cmath>

#include "fgtts/common/error.h"
#include "fgtts/common/strings.h"

namespace fgtts::eval {

Matrix MelCepstra(const Matrix& log_mel, int n) {
  const Eigen::Index m = log_mel.cols();
  if (n >= m) throw InvalidInput("more cepstra requested than mel bins");
  Matrix basis(m, n);
  for (int k = 1; k <= n; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) {
      basis(j, k - 1) = std::sqrt(2.0 / m) * std::cos(M_PI * k * (j + 0.5) / m);
    }
  }
  return log_mel * basis;
}

double Mcd(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch("mcd: " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) +
                        " frames");
  }
  if (a.rows() == 0) throw InvalidInput("mcd: no frames");
  const double k = 10.0 / std::log(10.0);
  double total = 0.0;
  for (Eigen::Index t = 0; t < a.rows(); ++t) {
    total += k * std::sqrt(2.0 * (a.row(t) - b.row(t)).squaredNorm());
  }
  return total / static_cast<double>(a.rows());
}

double McdFromMel(const Matrix& ref, const Matrix& syn) {
  if (ref.rows() != syn.rows() || ref.cols() != syn.cols()) {
    throw ShapeMismatch("mcd: " + std::to_string(ref.rows()) + " vs " +
                        std::to_string(syn.rows()) + " frames");
  }
  return Mcd(MelCepstra(ref), MelCepstra(syn));
}

double Ffe(const corpus::PitchTrack& ref, const corpus::PitchTrack& syn) {
  if (ref.size() != syn.size()) {
    throw ShapeMismatch("ffe: " + std::to_string(ref.size()) + " vs " +
                        std::to_string(syn.size()) + " frames");
  }
  if (ref.size() == 0) throw InvalidInput("ffe: no frames");
  int errors = 0;
  for (int t = 0; t < ref.size(); ++t) {
    if (ref.voiced[t] != syn.voiced[t]) {
      ++errors;
    } else if (ref.voiced[t] &&
               std::abs(syn.f0_hz[t] - ref.f0_hz[t]) / ref.f0_hz[t] > 0.2) {
      ++errors;
    }
  }
  return static_cast<double>(errors) / ref.size();
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) throw InvalidInput("mean of nothing");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double SampleStddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = Mean(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double ProsodyStats::Get(const std::string& name) const {
  const std::optional<double>* v = name == "f0"       ? &f0_stddev
                                   : name == "energy" ? &energy_stddev
                                   : name == "duration" ? &duration_stddev
                                                        : nullptr;
  if (v == nullptr) throw InvalidInput("unknown prosody statistic '" + name + "'");
  if (!v->has_value()) throw Undefined(name + "_stddev");
  return **v;
}

ProsodyStats ProsodyTokenStddev(const Matrix& log_mel, const corpus::PitchTrack& pitch,
                                const std::vector<int>& durations) {
  long total = 0;
  for (int d : durations) {
    if (d < 0) throw InvalidInput("negative duration");
    total += d;
  }
  if (total != log_mel.rows() || pitch.size() != log_mel.rows()) {
    throw ShapeMismatch("prosody: durations sum to " + std::to_string(total) + ", mel has " +
                        std::to_string(log_mel.rows()) + " frames, pitch " +
                        std::to_string(pitch.size()));
  }
  std::vector<double> f0, energy, dur;
  int t0 = 0;
  for (int d : durations) {
    dur.push_back(d);
    if (d > 0) {
      double e = 0.0, f = 0.0;
      int voiced = 0;
      for (int t = t0; t < t0 + d; ++t) {
        const double mx = log_mel.row(t).maxCoeff();
        e += mx + std::log((log_mel.row(t).array() - mx).exp().sum());
        if (pitch.voiced[t]) {
          f += pitch.f0_hz[t];
          ++voiced;
        }
      }
      energy.push_back(e / d);
      if (voiced > 0) f0.push_back(f / voiced);
    }
    t0 += d;
  }
  ProsodyStats s;
  if (f0.size() >= 2) s.f0_stddev = SampleStddev(f0);
  if (energy.size() >= 2) s.energy_stddev = SampleStddev(energy);
  if (dur.size() >= 2) s.duration_stddev = SampleStddev(dur);
  return s;
}

double Wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) throw InvalidInput("wer: empty reference");
  std::vector<size_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= hyp.size(); ++j) {
      size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[hyp.size()]) / static_cast<double>(ref.size());
}

double Wer(const std::string& ref, const std::string& hyp) {
  return Wer(SplitWhitespace(ref), SplitWhitespace(hyp));
}

double CosineSimilarity(const RowVector& a, const RowVector& b) {
  if (a.size() != b.size()) throw ShapeMismatch("cosine: dimension mismatch");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw InvalidInput("cosine: zero-norm vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

}  // namespace fgtts::eval
