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

#ifndef FGTTS_CORPUS_PITCH_H_
#define FGTTS_CORPUS_PITCH_H_

#include <span>
#include <vector>

#include "fgtts/corpus/mel.h"
#include "fgtts/corpus/types.h"

namespace fgtts::corpus {

struct PitchConfig {
  double f0_min_hz = 50.0;
  double f0_max_hz = 600.0;
  // Minimum normalised autocorrelation peak for a voiced decision.
  double voicing_threshold = 0.45;
  // Frames with RMS below this are unvoiced regardless of periodicity.
  double silence_rms = 1e-4;
  // Among peaks within this fraction of the best one, the shortest lag wins,
  // which suppresses sub-harmonic (octave-down) errors.
  double octave_tolerance = 0.05;
  void Validate() const;
};

// Frame-wise autocorrelation pitch tracker with window-bias correction and
// parabolic peak interpolation. Uses the framing of `mel_config`, so the
// track length equals that of ExtractMel() on the same waveform.
PitchTrack ExtractPitch(std::span<const double> waveform, int sample_rate_hz,
                        const MelConfig& mel_config, const PitchConfig& config);

struct MelPitchConfig {
  double f0_min_hz = 60.0;
  double f0_max_hz = 500.0;
  // Candidate spacing on a log-frequency grid.
  double grid_step = 0.005;
  // Low-order cosine components removed before matching (envelope).
  int envelope_order = 8;
  // Only bins up to this frequency carry resolved harmonics.
  double max_hz = 3000.0;
  // Minimum cosine similarity between the frame's harmonic residual and the
  // best template for a voiced decision.
  double voicing_threshold = 0.5;
};

// Estimates f0 from log-mel frames by matching the envelope-removed frame
// against rendered harmonic-comb templates. This is how pitch is read off
// model outputs, which exist only as mel frames.
class MelPitchEstimator {
 public:
  MelPitchEstimator(const MelConfig& mel_config, const MelPitchConfig& config);

  PitchTrack Estimate(const Matrix& log_mel) const;
  // Returns f0 (0 if unvoiced) and writes the match score.
  double EstimateFrame(const RowVector& log_mel, double* score = nullptr) const;

 private:
  RowVector Residual(const RowVector& log_mel) const;

  MelPitchConfig config_;
  int num_bins_used_ = 0;
  Matrix projector_;    // removes envelope components on the used bins
  Matrix templates_;    // [candidates x bins_used], unit norm residuals
  std::vector<double> candidates_;
};

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_PITCH_H_
