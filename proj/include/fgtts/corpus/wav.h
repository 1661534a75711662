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

#ifndef FGTTS_CORPUS_WAV_H_
#define FGTTS_CORPUS_WAV_H_

#include <string>
#include <vector>

namespace fgtts::corpus {

struct Waveform {
  std::vector<double> samples;  // mono, nominally in [-1, 1]
  int sample_rate_hz = 0;
};

// Reads RIFF/WAVE with 16/24/32-bit PCM or 32-bit float samples. Channels
// are averaged. Throws InvalidInput.
Waveform ReadWav(const std::string& path);

// Writes 16-bit PCM mono, clipping to [-1, 1].
void WriteWav(const std::string& path, const Waveform& wav);

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_WAV_H_
