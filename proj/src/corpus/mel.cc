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

#include "fgtts/corpus/mel.h"

#include <cmath>
#include <complex>
#include <unsupported/Eigen/FFT>

#include "fgtts/common/error.h"

namespace fgtts::corpus {

void MelConfig::Validate() const {
  if (sample_rate_hz <= 0) throw InvalidInput("sample rate must be positive");
  if (frame_length < 2 || hop_length < 1) throw InvalidInput("bad frame/hop length");
  if (n_mels < 1) throw InvalidInput("n_mels must be positive");
  if (!(fmax_hz > fmin_hz) || fmin_hz < 0.0 || fmax_hz > sample_rate_hz / 2.0 + 1e-9) {
    throw InvalidInput("mel frequency range must lie within [0, Nyquist]");
  }
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(int fft_size, int sample_rate_hz, int n_mels,
                             double fmin_hz, double fmax_hz) {
  const int bins = fft_size / 2 + 1;
  bin_hz_ = static_cast<double>(sample_rate_hz) / fft_size;
  double mel_lo = HzToMel(fmin_hz);
  double mel_hi = HzToMel(fmax_hz);
  edges_hz_.resize(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    edges_hz_[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
  }
  center_hz_.assign(edges_hz_.begin() + 1, edges_hz_.end() - 1);
  weights_ = Matrix::Zero(bins, n_mels);
  for (int k = 0; k < bins; ++k) {
    for (int m = 0; m < n_mels; ++m) weights_(k, m) = Response(m, k * bin_hz_);
  }
}

double MelFilterbank::Response(int m, double hz) const {
  double lo = edges_hz_[m], c = edges_hz_[m + 1], hi = edges_hz_[m + 2];
  if (hz <= lo || hz >= hi) return 0.0;
  return hz <= c ? (hz - lo) / (c - lo) : (hi - hz) / (hi - c);
}

int NumFrames(int num_samples, const MelConfig& config) {
  int padded = config.center ? num_samples + 2 * (config.frame_length / 2) : num_samples;
  if (padded < config.frame_length) return 0;
  return (padded - config.frame_length) / config.hop_length + 1;
}

std::vector<double> GetFrame(std::span<const double> waveform, int t,
                             const MelConfig& config) {
  const int n = static_cast<int>(waveform.size());
  const int pad = config.center ? config.frame_length / 2 : 0;
  std::vector<double> frame(config.frame_length);
  for (int i = 0; i < config.frame_length; ++i) {
    int src = t * config.hop_length + i - pad;
    // Reflect padding.
    if (n > 1) {
      while (src < 0 || src >= n) {
        if (src < 0) src = -src;
        if (src >= n) src = 2 * (n - 1) - src;
      }
    } else {
      src = 0;
    }
    frame[i] = waveform[src];
  }
  return frame;
}

std::vector<double> PowerSpectrum(std::span<const double> frame) {
  const size_t n = frame.size();
  std::vector<double> windowed(n);
  for (size_t i = 0; i < n; ++i) {
    double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
    windowed[i] = frame[i] * w;
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, windowed);
  std::vector<double> power(n / 2 + 1);
  for (size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spec[k]);
  return power;
}

MelSpectrogram ExtractMel(std::span<const double> waveform, int sample_rate_hz,
                          const MelConfig& config) {
  if (waveform.empty()) throw InvalidInput("empty waveform");
  if (sample_rate_hz <= 0) throw InvalidInput("sample rate must be positive");
  MelConfig cfg = config;
  cfg.sample_rate_hz = sample_rate_hz;
  cfg.Validate();
  const int frames = NumFrames(static_cast<int>(waveform.size()), cfg);
  if (frames < 1) throw InvalidInput("waveform shorter than one frame");
  MelFilterbank fb(cfg);
  MelSpectrogram mel;
  mel.sample_rate_hz = sample_rate_hz;
  mel.frame_shift_ms = cfg.frame_shift_ms();
  mel.frames.resize(frames, cfg.n_mels);
  for (int t = 0; t < frames; ++t) {
    std::vector<double> power = PowerSpectrum(GetFrame(waveform, t, cfg));
    Eigen::Map<const RowVector> p(power.data(), static_cast<Eigen::Index>(power.size()));
    RowVector energies = p * fb.weights();
    mel.frames.row(t) = (energies.array() + cfg.epsilon).log();
  }
  return mel;
}

}  // namespace fgtts::corpus
