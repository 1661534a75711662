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

#ifndef FGTTS_CORPUS_TYPES_H_
#define FGTTS_CORPUS_TYPES_H_

#include <optional>
#include <string>
#include <vector>

#include "fgtts/common/matrix.h"

namespace fgtts::corpus {

// Log-amplitude mel filterbank energies, one row per frame.
struct MelSpectrogram {
  Matrix frames;  // [T x n_mels]
  double frame_shift_ms = 0.0;
  int sample_rate_hz = 0;

  int num_frames() const { return static_cast<int>(frames.rows()); }
  int num_bins() const { return static_cast<int>(frames.cols()); }
  // Throws InvalidInput unless T >= 1 and every entry is finite.
  void Validate() const;
};

struct PitchTrack {
  std::vector<double> f0_hz;  // 0 where unvoiced
  std::vector<bool> voiced;

  static PitchTrack FromF0(std::vector<double> f0_hz);
  int size() const { return static_cast<int>(f0_hz.size()); }
  // Throws InvalidInput unless f0 > 0 exactly where voiced.
  void Validate() const;
  bool operator==(const PitchTrack& o) const {
    return f0_hz == o.f0_hz && voiced == o.voiced;
  }
};

struct UtteranceRecord {
  std::string utt_id;
  std::string transcript;
  std::vector<int> token_ids;
  // Absent for real audio without alignments; such records only support
  // prior sampling.
  std::optional<std::vector<int>> durations;
  MelSpectrogram mel;
  PitchTrack pitch;
  std::optional<std::string> coarse_label;
  // Paths relative to the manifest directory.
  std::string mel_path;
  std::string pitch_path;

  int num_tokens() const { return static_cast<int>(token_ids.size()); }
  int num_frames() const { return mel.num_frames(); }
  // Throws ManifestError naming the utterance on any broken invariant.
  void Validate() const;
};

struct CorpusManifest {
  std::vector<UtteranceRecord> utterances;
  double frame_shift_ms = 0.0;
  int sample_rate_hz = 0;
  int n_mels = 0;

  // True when at least one record lacks durations.
  bool prior_sampling_only() const;
  size_t size() const { return utterances.size(); }
};

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_TYPES_H_
