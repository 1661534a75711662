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

#ifndef FGTTS_CORPUS_MEL_H_
#define FGTTS_CORPUS_MEL_H_

#include <span>
#include <vector>

#include "fgtts/common/matrix.h"
#include "fgtts/corpus/types.h"

namespace fgtts::corpus {

struct MelConfig {
  int sample_rate_hz = 22050;
  int frame_length = 1024;  // Hann window length; also the FFT size
  int hop_length = 256;
  int n_mels = 80;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  double epsilon = 1e-5;
  // Reflect-pads frame_length/2 samples on both sides when set.
  bool center = false;

  double frame_shift_ms() const { return 1000.0 * hop_length / sample_rate_hz; }
  void Validate() const;
};

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters with unit peak on the HTK mel scale, spaced uniformly
// between fmin and fmax.
class MelFilterbank {
 public:
  MelFilterbank(int fft_size, int sample_rate_hz, int n_mels, double fmin_hz,
                double fmax_hz);
  explicit MelFilterbank(const MelConfig& c)
      : MelFilterbank(c.frame_length, c.sample_rate_hz, c.n_mels, c.fmin_hz,
                      c.fmax_hz) {}

  // [num_fft_bins x n_mels] weights.
  const Matrix& weights() const { return weights_; }
  const std::vector<double>& center_hz() const { return center_hz_; }
  int num_fft_bins() const { return static_cast<int>(weights_.rows()); }
  int n_mels() const { return static_cast<int>(weights_.cols()); }
  double bin_hz() const { return bin_hz_; }

  // Weight of filter m at an arbitrary frequency.
  double Response(int m, double hz) const;

 private:
  Matrix weights_;
  std::vector<double> edges_hz_;
  std::vector<double> center_hz_;
  double bin_hz_;
};

// Number of analysis frames for `num_samples` under `config`; 0 when the
// signal is shorter than one frame.
int NumFrames(int num_samples, const MelConfig& config);

// Frame `t` of the (optionally padded) signal, Hann window not applied.
std::vector<double> GetFrame(std::span<const double> waveform, int t,
                             const MelConfig& config);

MelSpectrogram ExtractMel(std::span<const double> waveform, int sample_rate_hz,
                          const MelConfig& config);

// Power spectrum of one Hann-windowed frame, frame_length/2 + 1 bins.
std::vector<double> PowerSpectrum(std::span<const double> frame);

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_MEL_H_
