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

#ifndef FGTTS_CORPUS_SPECTRAL_RENDER_H_
#define FGTTS_CORPUS_SPECTRAL_RENDER_H_

#include <functional>

#include "fgtts/common/matrix.h"
#include "fgtts/corpus/mel.h"

namespace fgtts::corpus {

// Renders log-mel frames directly in the spectral domain: a harmonic source
// at f0 (or none when unvoiced) plus broadband noise, shaped by a
// log-amplitude envelope given as a function of frequency. Each harmonic is
// spread over FFT bins with the Hann-window main-lobe response, so a
// rendered frame approximates ExtractMel() of the equivalent sinusoidal
// waveform.
class SpectralRenderer {
 public:
  using Envelope = std::function<double(double hz)>;

  explicit SpectralRenderer(const MelConfig& config);

  // `noise_gain` scales the envelope for the noise component.
  RowVector RenderLogMel(double f0_hz, const Envelope& log_amplitude,
                         double noise_gain) const;

  const MelConfig& config() const { return config_; }
  const MelFilterbank& filterbank() const { return fb_; }

 private:
  MelConfig config_;
  MelFilterbank fb_;
};

// Normalised magnitude response of a Hann window at an offset of `delta`
// FFT bins from a sinusoid; 1 at delta = 0.
double HannLobe(double delta);

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_SPECTRAL_RENDER_H_
