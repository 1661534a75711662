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

#ifndef FGTTS_EVALKIT_METRICS_H_
#define FGTTS_EVALKIT_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "fgtts/common/matrix.h"
#include "fgtts/corpus/types.h"

namespace fgtts::eval {

inline constexpr int kNumCepstra = 13;

// Orthonormal DCT-II of each log-mel frame, coefficients 1..n (c0 dropped).
Matrix MelCepstra(const Matrix& log_mel, int n = kNumCepstra);

// Mean over frames of (10 / ln 10) * sqrt(2 * sum_k (c_k - c'_k)^2).
// Throws ShapeMismatch unless both have the same shape.
double Mcd(const Matrix& ref_cepstra, const Matrix& syn_cepstra);
double McdFromMel(const Matrix& ref_log_mel, const Matrix& syn_log_mel);

// Fraction of frames with a voicing mismatch, or both voiced and a relative
// f0 deviation above 20%.
double Ffe(const corpus::PitchTrack& ref, const corpus::PitchTrack& syn);

struct ProsodyStats {
  std::optional<double> f0_stddev;        // Hz
  std::optional<double> energy_stddev;    // log-energy units
  std::optional<double> duration_stddev;  // frames

  // Throws Undefined when the statistic had fewer than two contributors.
  // `name` is one of "f0", "energy", "duration".
  double Get(const std::string& name) const;
};

// Per-token mean voiced f0, mean frame log-energy (log of the summed mel
// power, i.e. logsumexp of the log-mel bins) and duration, then the sample
// standard deviation of each across tokens. Tokens without voiced frames
// do not count for f0; tokens without frames count only for duration.
ProsodyStats ProsodyTokenStddev(const Matrix& log_mel, const corpus::PitchTrack& pitch,
                                const std::vector<int>& durations);

// Word-level (S + D + I) / len(ref). Throws InvalidInput on an empty
// reference.
double Wer(const std::string& ref, const std::string& hyp);
double Wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// Throws InvalidInput for zero-norm vectors, ShapeMismatch on dims.
double CosineSimilarity(const RowVector& a, const RowVector& b);

// Sample (N - 1) standard deviation; 0 for a single value.
double SampleStddev(const std::vector<double>& v);
double Mean(const std::vector<double>& v);

}  // namespace fgtts::eval

#endif  // FGTTS_EVALKIT_METRICS_H_
