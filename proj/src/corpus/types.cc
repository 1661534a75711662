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

#include "fgtts/corpus/types.h"

#include <cmath>
#include <numeric>

#include "fgtts/common/error.h"

namespace fgtts::corpus {

void MelSpectrogram::Validate() const {
  if (frames.rows() < 1) throw InvalidInput("mel spectrogram has no frames");
  if (!frames.allFinite()) throw InvalidInput("mel spectrogram has non-finite entries");
}

PitchTrack PitchTrack::FromF0(std::vector<double> f0_hz) {
  PitchTrack p;
  p.voiced.resize(f0_hz.size());
  for (size_t i = 0; i < f0_hz.size(); ++i) {
    if (!(f0_hz[i] > 0.0)) f0_hz[i] = 0.0;
    p.voiced[i] = f0_hz[i] > 0.0;
  }
  p.f0_hz = std::move(f0_hz);
  return p;
}

void PitchTrack::Validate() const {
  if (voiced.size() != f0_hz.size()) throw InvalidInput("pitch track length mismatch");
  for (size_t i = 0; i < f0_hz.size(); ++i) {
    if ((f0_hz[i] > 0.0) != static_cast<bool>(voiced[i])) {
      throw InvalidInput("pitch track voicing disagrees with f0 at frame " +
                         std::to_string(i));
    }
  }
}

void UtteranceRecord::Validate() const {
  if (token_ids.empty()) throw ManifestError(utt_id, "no tokens");
  try {
    mel.Validate();
    pitch.Validate();
  } catch (const InvalidInput& e) {
    throw ManifestError(utt_id, e.what());
  }
  if (pitch.size() != mel.num_frames()) {
    throw ManifestError(utt_id, "pitch track has " + std::to_string(pitch.size()) +
                                    " frames, mel has " +
                                    std::to_string(mel.num_frames()));
  }
  if (durations) {
    if (durations->size() != token_ids.size()) {
      throw ManifestError(utt_id, "duration count differs from token count");
    }
    long total = 0;
    for (int d : *durations) {
      if (d < 0) throw ManifestError(utt_id, "negative duration");
      total += d;
    }
    if (total != mel.num_frames()) {
      throw ManifestError(utt_id, "durations sum to " + std::to_string(total) +
                                      " but mel has " +
                                      std::to_string(mel.num_frames()) + " frames");
    }
  }
}

bool CorpusManifest::prior_sampling_only() const {
  for (const auto& u : utterances) {
    if (!u.durations) return true;
  }
  return false;
}

}  // namespace fgtts::corpus
