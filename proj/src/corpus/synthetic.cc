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

#include "fgtts/corpus/synthetic.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "fgtts/common/error.h"
#include "fgtts/common/random.h"
#include "fgtts/common/strings.h"
#include "fgtts/corpus/spectral_render.h"

namespace fgtts::corpus {

void SyntheticCorpusSpec::Validate() const {
  if (n_utterances < 1) throw InvalidSpec("n_utterances must be positive");
  if (n_coarse_factors < 1) throw InvalidSpec("n_coarse_factors must be positive");
  if (static_cast<int>(f0_base_per_factor.size()) != n_coarse_factors ||
      static_cast<int>(rate_per_factor.size()) != n_coarse_factors) {
    throw InvalidSpec("per-factor F0 bases and rates must have n_coarse_factors entries");
  }
  if (!tilt_per_factor.empty() &&
      static_cast<int>(tilt_per_factor.size()) != n_coarse_factors) {
    throw InvalidSpec("tilt_per_factor must be empty or have n_coarse_factors entries");
  }
  for (double f : f0_base_per_factor) {
    if (!(f > 0.0)) throw InvalidSpec("F0 bases must be positive");
  }
  for (double r : rate_per_factor) {
    if (!(r > 0.0)) throw InvalidSpec("rates must be positive");
  }
  if (token_vocab_size < 4) throw InvalidSpec("token_vocab_size must be at least 4");
  if (min_tokens < 1 || max_tokens < min_tokens) {
    throw InvalidSpec("token count range must satisfy 1 <= min <= max");
  }
  if (fine_jitter < 0.0 || energy_jitter < 0.0 || envelope_jitter < 0.0 ||
      duration_jitter < 0.0 || noise_floor < 0.0 || unvoiced_noise < 0.0) {
    throw InvalidSpec("standard deviations and gains must be non-negative");
  }
  if (n_envelope_factors < 0) throw InvalidSpec("n_envelope_factors must be >= 0");
  if (!(base_duration > 0.0)) throw InvalidSpec("base_duration must be positive");
  if (unvoiced_fraction < 0.0 || unvoiced_fraction >= 1.0) {
    throw InvalidSpec("unvoiced_fraction must lie in [0, 1)");
  }
  try {
    mel.Validate();
  } catch (const InvalidInput& e) {
    throw InvalidSpec(e.what());
  }
}

std::string SyntheticSymbol(int token_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02d", token_id);
  return buf;
}

std::string CoarseLabel(int factor) { return "c" + std::to_string(factor); }

int ParseCoarseLabel(const std::string& label) {
  if (label.size() < 2 || label[0] != 'c') return -1;
  for (size_t i = 1; i < label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return -1;
  }
  return std::stoi(label.substr(1));
}

int NearestBase(double f0_hz, const std::vector<double>& bases) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(bases.size()); ++i) {
    if (std::abs(f0_hz - bases[i]) < std::abs(f0_hz - bases[best])) best = i;
  }
  return best;
}

double MeanVoicedF0(const PitchTrack& pitch) {
  double sum = 0.0;
  int n = 0;
  for (int t = 0; t < pitch.size(); ++t) {
    if (pitch.voiced[t]) {
      sum += pitch.f0_hz[t];
      ++n;
    }
  }
  return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

SyntheticCorpusGenerator::SyntheticCorpusGenerator(const SyntheticCorpusSpec& spec)
    : spec_(spec) {
  spec_.Validate();
  mel_top_ = HzToMel(spec_.mel.fmax_hz);
  Rng rng = Rng(spec_.seed).Derive("templates");
  templates_.resize(spec_.token_vocab_size);
  // Unvoiced ids are spread evenly through the vocabulary.
  const int usable = spec_.token_vocab_size - 3;
  const int n_unvoiced = static_cast<int>(std::round(spec_.unvoiced_fraction * usable));
  for (int id = 3; id < spec_.token_vocab_size; ++id) {
    TokenTemplate& t = templates_[id];
    int k = id - 3;
    t.voiced = !(n_unvoiced > 0 && (k * n_unvoiced) % usable < n_unvoiced);
    t.base_duration = spec_.base_duration * rng.Uniform(0.6, 1.4);
    for (int f = 0; f < 3; ++f) {
      t.formant_center.push_back(rng.Uniform(0.08, 0.85));
      t.formant_width.push_back(rng.Uniform(0.06, 0.12));
      t.formant_gain.push_back(rng.Uniform(0.6, 1.4));
    }
  }
}

double SyntheticCorpusGenerator::LogAmplitude(const TokenDraw& token, int factor,
                                              double hz) const {
  const TokenTemplate& tpl = templates_[token.token_id];
  double x = HzToMel(std::min(hz, spec_.mel.fmax_hz)) / mel_top_;
  double v = std::log(0.05) + token.energy - 2.0 * x;
  for (size_t f = 0; f < tpl.formant_center.size(); ++f) {
    double d = (x - tpl.formant_center[f]) / tpl.formant_width[f];
    v += tpl.formant_gain[f] * std::exp(-0.5 * d * d);
  }
  if (!spec_.tilt_per_factor.empty()) v += spec_.tilt_per_factor[factor] * (x - 0.5);
  for (size_t k = 0; k < token.envelope.size(); ++k) {
    v += token.envelope[k] * std::cos(M_PI * static_cast<double>(k + 1) * x);
  }
  return v;
}

SyntheticUtterance SyntheticCorpusGenerator::Draw(int index) const {
  Rng rng = Rng(spec_.seed).Derive("utt" + std::to_string(index));
  SyntheticUtterance u;
  u.coarse_factor = rng.UniformInt(0, spec_.n_coarse_factors - 1);
  int n = rng.UniformInt(spec_.min_tokens, spec_.max_tokens);
  const double rate = spec_.rate_per_factor[u.coarse_factor];
  const double base = spec_.f0_base_per_factor[u.coarse_factor];
  for (int i = 0; i < n; ++i) {
    TokenDraw t;
    t.token_id = rng.UniformInt(3, spec_.token_vocab_size - 1);
    const TokenTemplate& tpl = templates_[t.token_id];
    double d = rate * tpl.base_duration + spec_.duration_jitter * rng.Normal();
    t.duration = std::max(1, static_cast<int>(std::lround(d)));
    double f0_jitter = spec_.fine_jitter * rng.Normal();
    t.f0_hz = tpl.voiced ? std::max(40.0, base + f0_jitter) : 0.0;
    t.energy = spec_.energy_jitter * rng.Normal();
    for (int k = 0; k < spec_.n_envelope_factors; ++k) {
      t.envelope.push_back(spec_.envelope_jitter * rng.Normal());
    }
    u.tokens.push_back(std::move(t));
  }
  return u;
}

UtteranceRecord SyntheticCorpusGenerator::Render(const std::string& utt_id,
                                                 const SyntheticUtterance& utt) const {
  SpectralRenderer renderer(spec_.mel);
  UtteranceRecord rec;
  rec.utt_id = utt_id;
  std::vector<std::string> words;
  std::vector<int> durations;
  int total = 0;
  for (const TokenDraw& t : utt.tokens) {
    rec.token_ids.push_back(t.token_id);
    words.push_back(SyntheticSymbol(t.token_id));
    durations.push_back(t.duration);
    total += t.duration;
  }
  rec.transcript = Join(words, " ");
  rec.durations = durations;
  rec.coarse_label = CoarseLabel(utt.coarse_factor);
  rec.mel.sample_rate_hz = spec_.mel.sample_rate_hz;
  rec.mel.frame_shift_ms = spec_.mel.frame_shift_ms();
  rec.mel.frames.resize(total, spec_.mel.n_mels);
  std::vector<double> f0;
  int t0 = 0;
  for (const TokenDraw& t : utt.tokens) {
    const bool voiced = t.f0_hz > 0.0;
    auto env = [&](double hz) { return LogAmplitude(t, utt.coarse_factor, hz); };
    RowVector frame = renderer.RenderLogMel(
        t.f0_hz, env, voiced ? spec_.noise_floor : spec_.unvoiced_noise);
    // Stored features are float32; keep the in-memory corpus identical.
    frame = frame.unaryExpr([](double v) { return static_cast<double>(static_cast<float>(v)); });
    const double f0_stored = static_cast<float>(t.f0_hz);
    for (int k = 0; k < t.duration; ++k) {
      rec.mel.frames.row(t0 + k) = frame;
      f0.push_back(f0_stored);
    }
    t0 += t.duration;
  }
  rec.pitch = PitchTrack::FromF0(std::move(f0));
  rec.mel_path = "features/" + utt_id + ".mel";
  rec.pitch_path = "features/" + utt_id + ".f0";
  return rec;
}

CorpusManifest SyntheticCorpusGenerator::Generate(
    std::vector<SyntheticUtterance>* truth) const {
  CorpusManifest m;
  m.sample_rate_hz = spec_.mel.sample_rate_hz;
  m.frame_shift_ms = spec_.mel.frame_shift_ms();
  m.n_mels = spec_.mel.n_mels;
  if (truth) truth->clear();
  for (int i = 0; i < spec_.n_utterances; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "syn%05d", i);
    SyntheticUtterance u = Draw(i);
    m.utterances.push_back(Render(id, u));
    if (truth) truth->push_back(std::move(u));
  }
  return m;
}

std::vector<double> SyntheticCorpusGenerator::RenderWaveform(
    const SyntheticUtterance& utt) const {
  const int sr = spec_.mel.sample_rate_hz;
  const int hop = spec_.mel.hop_length;
  std::vector<double> out;
  Rng noise = Rng(spec_.seed).Derive("waveform");
  std::vector<double> phase(sr / 2 / 40 + 2, 0.0);
  for (const TokenDraw& t : utt.tokens) {
    const int samples = t.duration * hop;
    std::vector<double> amps;
    if (t.f0_hz > 0.0) {
      for (int h = 1; h * t.f0_hz < sr / 2.0; ++h) {
        amps.push_back(std::exp(LogAmplitude(t, utt.coarse_factor, h * t.f0_hz)));
      }
    }
    double noise_gain = t.f0_hz > 0.0 ? spec_.noise_floor : spec_.unvoiced_noise;
    double noise_amp = noise_gain * std::exp(LogAmplitude(t, utt.coarse_factor, 1000.0));
    for (int s = 0; s < samples; ++s) {
      double v = 0.0;
      for (size_t h = 0; h < amps.size() && h < phase.size(); ++h) {
        phase[h] += 2.0 * M_PI * (h + 1) * t.f0_hz / sr;
        v += amps[h] * std::cos(phase[h]);
      }
      v += noise_amp * noise.Normal();
      out.push_back(v);
    }
  }
  return out;
}

CorpusManifest GenerateSyntheticCorpus(const SyntheticCorpusSpec& spec) {
  return SyntheticCorpusGenerator(spec).Generate();
}

namespace {

std::string JoinDoubles(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(FormatDouble(x));
  return Join(parts, ",");
}

}  // namespace

SyntheticCorpusSpec SyntheticSpecFromConfig(const Config& c) {
  SyntheticCorpusSpec s;
  s.n_utterances = c.GetInt("corpus.n_utterances");
  s.n_coarse_factors = c.GetInt("corpus.n_coarse_factors");
  s.f0_base_per_factor = c.GetDoubleList("corpus.f0_base_per_factor");
  s.rate_per_factor = c.GetDoubleList("corpus.rate_per_factor");
  s.tilt_per_factor = c.GetDoubleList("corpus.tilt_per_factor");
  s.token_vocab_size = c.GetInt("corpus.token_vocab_size");
  s.min_tokens = c.GetInt("corpus.min_tokens");
  s.max_tokens = c.GetInt("corpus.max_tokens");
  s.fine_jitter = c.GetDouble("corpus.fine_jitter");
  s.energy_jitter = c.GetDouble("corpus.energy_jitter");
  s.n_envelope_factors = c.GetInt("corpus.n_envelope_factors");
  s.envelope_jitter = c.GetDouble("corpus.envelope_jitter");
  s.base_duration = c.GetDouble("corpus.base_duration");
  s.duration_jitter = c.GetDouble("corpus.duration_jitter");
  s.unvoiced_fraction = c.GetDouble("corpus.unvoiced_fraction");
  s.noise_floor = c.GetDouble("corpus.noise_floor");
  s.unvoiced_noise = c.GetDouble("corpus.unvoiced_noise");
  s.seed = static_cast<uint64_t>(c.GetInt("corpus.seed"));
  s.mel.sample_rate_hz = c.GetInt("features.sample_rate_hz");
  s.mel.frame_length = c.GetInt("features.frame_length");
  s.mel.hop_length = c.GetInt("features.hop_length");
  s.mel.n_mels = c.GetInt("features.n_mels");
  s.mel.fmin_hz = c.GetDouble("features.fmin_hz");
  s.mel.fmax_hz = c.GetDouble("features.fmax_hz");
  s.mel.epsilon = c.GetDouble("features.epsilon");
  s.mel.center = c.GetBool("features.center");
  return s;
}

void SyntheticSpecToConfig(const SyntheticCorpusSpec& s, Config* c) {
  c->Set("corpus.n_utterances", std::to_string(s.n_utterances));
  c->Set("corpus.n_coarse_factors", std::to_string(s.n_coarse_factors));
  c->Set("corpus.f0_base_per_factor", JoinDoubles(s.f0_base_per_factor));
  c->Set("corpus.rate_per_factor", JoinDoubles(s.rate_per_factor));
  c->Set("corpus.tilt_per_factor", JoinDoubles(s.tilt_per_factor));
  c->Set("corpus.token_vocab_size", std::to_string(s.token_vocab_size));
  c->Set("corpus.min_tokens", std::to_string(s.min_tokens));
  c->Set("corpus.max_tokens", std::to_string(s.max_tokens));
  c->Set("corpus.fine_jitter", FormatDouble(s.fine_jitter));
  c->Set("corpus.energy_jitter", FormatDouble(s.energy_jitter));
  c->Set("corpus.n_envelope_factors", std::to_string(s.n_envelope_factors));
  c->Set("corpus.envelope_jitter", FormatDouble(s.envelope_jitter));
  c->Set("corpus.base_duration", FormatDouble(s.base_duration));
  c->Set("corpus.duration_jitter", FormatDouble(s.duration_jitter));
  c->Set("corpus.unvoiced_fraction", FormatDouble(s.unvoiced_fraction));
  c->Set("corpus.noise_floor", FormatDouble(s.noise_floor));
  c->Set("corpus.unvoiced_noise", FormatDouble(s.unvoiced_noise));
  c->Set("corpus.seed", std::to_string(s.seed));
  c->Set("features.sample_rate_hz", std::to_string(s.mel.sample_rate_hz));
  c->Set("features.frame_length", std::to_string(s.mel.frame_length));
  c->Set("features.hop_length", std::to_string(s.mel.hop_length));
  c->Set("features.n_mels", std::to_string(s.mel.n_mels));
  c->Set("features.fmin_hz", FormatDouble(s.mel.fmin_hz));
  c->Set("features.fmax_hz", FormatDouble(s.mel.fmax_hz));
  c->Set("features.epsilon", FormatDouble(s.mel.epsilon));
  c->Set("features.center", s.mel.center ? "true" : "false");
}

}  // namespace fgtts::corpus
