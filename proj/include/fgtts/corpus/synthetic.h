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

#ifndef FGTTS_CORPUS_SYNTHETIC_H_
#define FGTTS_CORPUS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fgtts/common/config.h"
#include "fgtts/corpus/mel.h"
#include "fgtts/corpus/types.h"

namespace fgtts::corpus {

// Parameters of a synthetic corpus with a categorical utterance-level
// ("coarse") factor and independent per-token ("fine") prosodic factors.
//
// The coarse factor of an utterance sets its F0 base, speaking rate and
// spectral tilt. Each token then draws its own F0 offset, energy offset and
// a vector of smooth spectral-envelope perturbations, and all frames of the
// token are rendered from the same harmonic template.
struct SyntheticCorpusSpec {
  int n_utterances = 600;
  int n_coarse_factors = 4;
  std::vector<double> f0_base_per_factor{110.0, 150.0, 200.0, 260.0};
  std::vector<double> rate_per_factor{0.8, 1.0, 1.2, 1.4};
  // Log-amplitude change across the band, per factor; empty means none.
  std::vector<double> tilt_per_factor;
  int token_vocab_size = 24;  // ids 0..2 are reserved, tokens use 3..size-1
  int min_tokens = 8;
  int max_tokens = 16;
  double fine_jitter = 15.0;    // Hz, per-token F0 stddev
  double energy_jitter = 0.3;   // log amplitude, per-token stddev
  int n_envelope_factors = 12;  // cosine envelope perturbations per token
  double envelope_jitter = 0.1; // log amplitude stddev per factor
  double base_duration = 5.0;   // frames per token at rate 1
  double duration_jitter = 0.5; // frames
  double unvoiced_fraction = 0.2;
  double noise_floor = 0.01;    // noise gain under voiced tokens
  double unvoiced_noise = 0.4;  // noise gain of unvoiced tokens
  uint64_t seed = 1;
  MelConfig mel;

  // Throws InvalidSpec.
  void Validate() const;
};

// Per-token factors drawn by the generator.
struct TokenDraw {
  int token_id = 0;
  int duration = 0;
  double f0_hz = 0.0;  // 0 for unvoiced tokens
  double energy = 0.0;
  std::vector<double> envelope;
};

struct TokenTemplate {
  bool voiced = true;
  double base_duration = 5.0;
  std::vector<double> formant_center;  // normalised mel position in [0, 1]
  std::vector<double> formant_width;
  std::vector<double> formant_gain;
};

struct SyntheticUtterance {
  int coarse_factor = 0;
  std::vector<TokenDraw> tokens;
};

class SyntheticCorpusGenerator {
 public:
  explicit SyntheticCorpusGenerator(const SyntheticCorpusSpec& spec);

  // Deterministic in the spec. `truth`, when given, receives the draws.
  CorpusManifest Generate(std::vector<SyntheticUtterance>* truth = nullptr) const;

  UtteranceRecord Render(const std::string& utt_id,
                         const SyntheticUtterance& utt) const;
  SyntheticUtterance Draw(int index) const;

  // Sinusoidal waveform with the same source/filter parameters, for
  // listening only.
  std::vector<double> RenderWaveform(const SyntheticUtterance& utt) const;

  const std::vector<TokenTemplate>& templates() const { return templates_; }
  const SyntheticCorpusSpec& spec() const { return spec_; }

  double LogAmplitude(const TokenDraw& token, int factor, double hz) const;

 private:
  SyntheticCorpusSpec spec_;
  std::vector<TokenTemplate> templates_;
  double mel_top_;
};

CorpusManifest GenerateSyntheticCorpus(const SyntheticCorpusSpec& spec);

// Token symbol used in synthetic transcripts ("p03" for id 3); symbols sort
// in id order.
std::string SyntheticSymbol(int token_id);
std::string CoarseLabel(int factor);
// Inverse of CoarseLabel; -1 when the label is not of that form.
int ParseCoarseLabel(const std::string& label);

// Index of the base nearest to `f0_hz`.
int NearestBase(double f0_hz, const std::vector<double>& bases);

// Mean f0 over voiced frames, NaN when nothing is voiced.
double MeanVoicedF0(const PitchTrack& pitch);

SyntheticCorpusSpec SyntheticSpecFromConfig(const Config& config);
void SyntheticSpecToConfig(const SyntheticCorpusSpec& spec, Config* config);

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_SYNTHETIC_H_
