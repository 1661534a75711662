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

#include "fgtts/corpus/spectral_render.h"

#include <cmath>

namespace fgtts::corpus {

namespace {

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

}  // namespace

double HannLobe(double delta) {
  return Sinc(delta) + 0.5 * Sinc(delta - 1.0) + 0.5 * Sinc(delta + 1.0);
}

SpectralRenderer::SpectralRenderer(const MelConfig& config)
    : config_(config), fb_(config) {}

RowVector SpectralRenderer::RenderLogMel(double f0_hz, const Envelope& log_amplitude,
                                         double noise_gain) const {
  const int bins = fb_.num_fft_bins();
  const double bin_hz = fb_.bin_hz();
  const double nyquist = config_.sample_rate_hz / 2.0;
  // A unit-amplitude sinusoid under a Hann window peaks at N/4.
  const double gain = config_.frame_length / 4.0;
  RowVector power = RowVector::Zero(bins);
  if (f0_hz > 0.0) {
    for (int h = 1; h * f0_hz < nyquist; ++h) {
      double f = h * f0_hz;
      double amp = gain * std::exp(log_amplitude(f));
      double center = f / bin_hz;
      int lo = std::max(0, static_cast<int>(std::floor(center)) - 3);
      int hi = std::min(bins - 1, static_cast<int>(std::ceil(center)) + 3);
      for (int k = lo; k <= hi; ++k) {
        double a = amp * HannLobe(k - center);
        power(k) += a * a;
      }
    }
  }
  if (noise_gain > 0.0) {
    for (int k = 0; k < bins; ++k) {
      double a = gain * noise_gain * std::exp(log_amplitude(k * bin_hz));
      power(k) += a * a;
    }
  }
  RowVector mel = power * fb_.weights();
  return (mel.array() + config_.epsilon).log();
}

}  // namespace fgtts::corpus
