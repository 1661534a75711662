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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "fgtts/common/error.h"
#include "fgtts/common/random.h"
#include "fgtts/corpus/manifest.h"
#include "fgtts/corpus/mel.h"
#include "fgtts/corpus/pitch.h"
#include "fgtts/corpus/spectral_render.h"
#include "fgtts/corpus/synthetic.h"
#include "fgtts/corpus/wav.h"

namespace fgtts::corpus {
namespace {

namespace fs = std::filesystem;

std::vector<double> Tone(double hz, double seconds, int sr, double amp = 0.5) {
  std::vector<double> x(static_cast<size_t>(seconds * sr));
  for (size_t i = 0; i < x.size(); ++i) x[i] = amp * std::sin(2.0 * M_PI * hz * i / sr);
  return x;
}

fs::path TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fgtts_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(MelTest, SilenceIsEpsilonFloor) {
  MelConfig c;
  std::vector<double> zeros(22050, 0.0);
  MelSpectrogram m = ExtractMel(zeros, 22050, c);
  for (Eigen::Index i = 0; i < m.frames.size(); ++i) {
    EXPECT_DOUBLE_EQ(m.frames.data()[i], std::log(1e-5));
  }
}

TEST(MelTest, FrameCountArithmetic) {
  MelConfig c;
  std::vector<double> x(22050, 0.1);
  MelSpectrogram m = ExtractMel(x, 22050, c);
  EXPECT_EQ(m.num_frames(), (22050 - 1024) / 256 + 1);
  EXPECT_EQ(m.num_frames(), 83);
  EXPECT_EQ(m.num_bins(), 80);
}

TEST(MelTest, ToneLandsInNearestCenterBin) {
  // Centers computed here from the HTK formula, not from the filterbank.
  auto mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const int n = 80;
  int expected = -1;
  double best = 1e9;
  for (int m = 0; m < n; ++m) {
    double center = hz(mel(8000.0) * (m + 1) / (n + 1));
    if (std::abs(center - 440.0) < best) {
      best = std::abs(center - 440.0);
      expected = m;
    }
  }
  MelConfig c;
  MelSpectrogram spec = ExtractMel(Tone(440.0, 1.0, 22050), 22050, c);
  for (int t = 0; t < spec.num_frames(); ++t) {
    Eigen::Index arg;
    spec.frames.row(t).maxCoeff(&arg);
    EXPECT_EQ(arg, expected) << "frame " << t;
  }
}

TEST(MelTest, ShortInputRejected) {
  MelConfig c;
  std::vector<double> x(1000, 0.0);
  EXPECT_THROW(ExtractMel(x, 22050, c), InvalidInput);
  EXPECT_THROW(ExtractMel(std::vector<double>{}, 22050, c), InvalidInput);
  EXPECT_THROW(ExtractPitch(x, 22050, c, PitchConfig{}), InvalidInput);
}

TEST(MelTest, CenteredFramingPads) {
  MelConfig c;
  c.center = true;
  std::vector<double> x(22050, 0.1);
  EXPECT_EQ(ExtractMel(x, 22050, c).num_frames(), 22050 / 256 + 1);
}

TEST(PitchTest, ToneMedianWithinThreeHz) {
  MelConfig c;
  PitchTrack p = ExtractPitch(Tone(220.0, 1.0, 22050), 22050, c, PitchConfig{});
  std::vector<double> voiced;
  for (int t = 0; t < p.size(); ++t) {
    if (p.voiced[t]) voiced.push_back(p.f0_hz[t]);
  }
  ASSERT_FALSE(voiced.empty());
  std::nth_element(voiced.begin(), voiced.begin() + voiced.size() / 2, voiced.end());
  EXPECT_NEAR(voiced[voiced.size() / 2], 220.0, 3.0);
}

TEST(PitchTest, LowNoiseWithStrictThresholdUnvoiced) {
  Rng rng(3);
  std::vector<double> x(22050);
  for (double& v : x) v = 1e-3 * rng.Normal();
  PitchConfig pc;
  pc.voicing_threshold = 0.9;
  PitchTrack p = ExtractPitch(x, 22050, MelConfig{}, pc);
  for (int t = 0; t < p.size(); ++t) EXPECT_FALSE(p.voiced[t]) << t;
}

TEST(PitchTest, SilenceUnvoicedAndSameLengthAsMel) {
  std::vector<double> zeros(30000, 0.0);
  MelConfig c;
  PitchTrack p = ExtractPitch(zeros, 22050, c, PitchConfig{});
  EXPECT_EQ(p.size(), ExtractMel(zeros, 22050, c).num_frames());
  for (int t = 0; t < p.size(); ++t) {
    EXPECT_FALSE(p.voiced[t]);
    EXPECT_EQ(p.f0_hz[t], 0.0);
  }
}

TEST(PitchTest, LengthsAgreeAcrossSizes) {
  MelConfig c;
  Rng rng(5);
  for (int n : {1024, 1025, 1280, 5000, 22050}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.Normal();
    EXPECT_EQ(ExtractPitch(x, 22050, c, PitchConfig{}).size(),
              ExtractMel(x, 22050, c).num_frames());
  }
}

TEST(MelPitchTest, RecoversRenderedF0) {
  MelConfig c;
  SpectralRenderer r(c);
  MelPitchEstimator est(c, MelPitchConfig{});
  auto env = [](double hz) { return -1.0 - hz / 4000.0; };
  for (double f0 : {95.0, 118.0, 150.0, 201.0, 265.0, 330.0}) {
    double got = est.EstimateFrame(r.RenderLogMel(f0, env, 0.01));
    EXPECT_NEAR(got, f0, 0.05 * f0) << f0;
  }
  // Noise only reads as unvoiced.
  EXPECT_EQ(est.EstimateFrame(r.RenderLogMel(0.0, env, 0.5)), 0.0);
}

TEST(MelPitchTest, AgreesWithWaveformExtraction) {
  MelConfig c;
  std::vector<double> x = Tone(180.0, 0.5, 22050, 0.3);
  for (size_t i = 0; i < x.size(); ++i) x[i] += 0.15 * std::sin(2.0 * M_PI * 360.0 * i / 22050);
  MelSpectrogram m = ExtractMel(x, 22050, c);
  PitchTrack p = MelPitchEstimator(c, MelPitchConfig{}).Estimate(m.frames);
  for (int t = 0; t < p.size(); ++t) {
    ASSERT_TRUE(p.voiced[t]);
    EXPECT_NEAR(p.f0_hz[t], 180.0, 9.0);
  }
}

SyntheticCorpusSpec SmallSpec() {
  SyntheticCorpusSpec s;
  s.n_utterances = 24;
  s.seed = 11;
  return s;
}

TEST(SyntheticTest, InvalidSpecsRejected) {
  SyntheticCorpusSpec s = SmallSpec();
  s.rate_per_factor.pop_back();
  EXPECT_THROW(SyntheticCorpusGenerator{s}, InvalidSpec);
  s = SmallSpec();
  s.fine_jitter = -1.0;
  EXPECT_THROW(SyntheticCorpusGenerator{s}, InvalidSpec);
  s = SmallSpec();
  s.min_tokens = 5;
  s.max_tokens = 4;
  EXPECT_THROW(SyntheticCorpusGenerator{s}, InvalidSpec);
  s = SmallSpec();
  s.tilt_per_factor = {1.0};
  EXPECT_THROW(SyntheticCorpusGenerator{s}, InvalidSpec);
}

TEST(SyntheticTest, RecordsSatisfyInvariants) {
  std::vector<SyntheticUtterance> truth;
  CorpusManifest m = SyntheticCorpusGenerator(SmallSpec()).Generate(&truth);
  ASSERT_EQ(m.size(), 24u);
  EXPECT_FALSE(m.prior_sampling_only());
  for (size_t i = 0; i < m.size(); ++i) {
    const auto& r = m.utterances[i];
    EXPECT_NO_THROW(r.Validate());
    EXPECT_GE(r.num_tokens(), 8);
    EXPECT_LE(r.num_tokens(), 16);
    EXPECT_EQ(r.coarse_label, CoarseLabel(truth[i].coarse_factor));
    for (int id : r.token_ids) {
      EXPECT_GE(id, 3);
      EXPECT_LT(id, 24);
    }
  }
}

TEST(SyntheticTest, SameSeedGivesByteIdenticalManifests) {
  fs::path a = TempDir("syn_a"), b = TempDir("syn_b");
  SaveManifest(GenerateSyntheticCorpus(SmallSpec()), (a / kManifestFileName).string());
  SaveManifest(GenerateSyntheticCorpus(SmallSpec()), (b / kManifestFileName).string());
  EXPECT_EQ(Slurp(a / kManifestFileName), Slurp(b / kManifestFileName));
  for (const auto& e : fs::directory_iterator(a / "features")) {
    EXPECT_EQ(Slurp(e.path()), Slurp(b / "features" / e.path().filename()));
  }
  SyntheticCorpusSpec other = SmallSpec();
  other.seed = 12;
  EXPECT_FALSE(GenerateSyntheticCorpus(other) == GenerateSyntheticCorpus(SmallSpec()));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(SyntheticTest, ZeroJitterGivesEqualF0PerTokenIdAndFactor) {
  SyntheticCorpusSpec s = SmallSpec();
  s.fine_jitter = 0.0;
  s.n_utterances = 60;
  CorpusManifest m = GenerateSyntheticCorpus(s);
  std::map<std::pair<std::string, int>, double> seen;
  int checked = 0;
  for (const auto& r : m.utterances) {
    int t0 = 0;
    for (int n = 0; n < r.num_tokens(); ++n) {
      int d = (*r.durations)[n];
      double mean = 0.0;
      for (int t = t0; t < t0 + d; ++t) mean += r.pitch.f0_hz[t];
      mean /= d;
      t0 += d;
      auto key = std::make_pair(*r.coarse_label, r.token_ids[n]);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen[key] = mean;
      } else {
        EXPECT_EQ(it->second, mean);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(SyntheticTest, FourBasesClassifyPerfectlyByNearestBase) {
  SyntheticCorpusSpec s = SmallSpec();
  s.n_utterances = 200;
  s.f0_base_per_factor = {110.0, 150.0, 200.0, 260.0};
  s.fine_jitter = 5.0;
  CorpusManifest m = GenerateSyntheticCorpus(s);
  for (const auto& r : m.utterances) {
    int got = NearestBase(MeanVoicedF0(r.pitch), s.f0_base_per_factor);
    EXPECT_EQ(CoarseLabel(got), *r.coarse_label) << r.utt_id;
  }
}

TEST(SyntheticTest, RenderedMelMatchesWaveformAnalysis) {
  SyntheticCorpusSpec s = SmallSpec();
  SyntheticCorpusGenerator gen(s);
  SyntheticUtterance u = gen.Draw(0);
  // Long tokens so analysis windows sit inside one token.
  for (auto& t : u.tokens) t.duration = 12;
  UtteranceRecord rec = gen.Render("x", u);
  std::vector<double> wav = gen.RenderWaveform(u);
  MelSpectrogram analysed = ExtractMel(wav, s.mel.sample_rate_hz, s.mel);
  PitchTrack pitch = ExtractPitch(wav, s.mel.sample_rate_hz, s.mel, PitchConfig{});
  int t0 = 0, compared = 0;
  for (const auto& tok : u.tokens) {
    // Frame t covers samples [t*hop, t*hop + frame); pick a frame wholly
    // inside the token.
    int t = t0 + 4;
    if (tok.f0_hz > 0.0) {
      double err = (analysed.frames.row(t) - rec.mel.frames.row(t)).head(40).cwiseAbs().mean();
      EXPECT_LT(err, 0.6) << "token " << tok.token_id;
      EXPECT_NEAR(pitch.f0_hz[t], tok.f0_hz, 0.03 * tok.f0_hz);
      ++compared;
    }
    t0 += tok.duration;
  }
  EXPECT_GT(compared, 3);
}

TEST(ManifestTest, RoundTrip) {
  fs::path dir = TempDir("manifest_rt");
  CorpusManifest m = GenerateSyntheticCorpus(SmallSpec());
  SaveManifest(m, dir.string());
  CorpusManifest back = LoadManifest(dir.string());
  EXPECT_TRUE(back == m);
  fs::remove_all(dir);
}

TEST(ManifestTest, DurationSumMismatchNamesUtterance) {
  fs::path dir = TempDir("manifest_bad");
  CorpusManifest m = GenerateSyntheticCorpus(SmallSpec());
  SaveManifest(m, dir.string());
  // Shorten the last duration of the third record by one frame.
  std::string text = Slurp(dir / kManifestFileName);
  const auto& r = m.utterances[2];
  std::string old_d, new_d;
  for (size_t i = 0; i < r.durations->size(); ++i) {
    int d = (*r.durations)[i];
    old_d += (i ? " " : "") + std::to_string(d);
    new_d += (i ? " " : "") + std::to_string(i + 1 == r.durations->size() ? d - 1 : d);
  }
  size_t pos = text.find(r.utt_id + "\t");
  pos = text.find("\t" + old_d + "\t", pos);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos + 1, old_d.size(), new_d);
  std::ofstream(dir / kManifestFileName, std::ios::binary) << text;
  try {
    LoadManifest(dir.string());
    FAIL() << "expected ManifestError";
  } catch (const ManifestError& e) {
    EXPECT_EQ(e.utt_id(), r.utt_id);
  }
  fs::remove_all(dir);
}

TEST(ManifestTest, SchemaAndMissingFiles) {
  fs::path dir = TempDir("manifest_schema");
  EXPECT_THROW(LoadManifest((dir / "nope.tsv").string()), ManifestError);
  std::ofstream(dir / kManifestFileName) << "#other v9\n";
  EXPECT_THROW(LoadManifest(dir.string()), ManifestError);
  std::ofstream(dir / kManifestFileName) << kManifestSchema
                                         << "\nu1\tab\t3 4\t-\t-\tmissing.mel\tmissing.f0\n";
  try {
    LoadManifest(dir.string());
    FAIL();
  } catch (const ManifestError& e) {
    EXPECT_EQ(e.utt_id(), "u1");
  }
  fs::remove_all(dir);
}

TEST(ManifestTest, AbsentDurationsSetPriorOnlyFlag) {
  fs::path dir = TempDir("manifest_nodur");
  CorpusManifest m = GenerateSyntheticCorpus(SmallSpec());
  m.utterances[0].durations.reset();
  m.utterances[0].coarse_label.reset();
  SaveManifest(m, dir.string());
  CorpusManifest back = LoadManifest(dir.string());
  EXPECT_TRUE(back.prior_sampling_only());
  EXPECT_FALSE(back.utterances[0].durations.has_value());
  EXPECT_FALSE(back.utterances[0].coarse_label.has_value());
  EXPECT_TRUE(back == m);
  fs::remove_all(dir);
}

TEST(WavTest, RoundTrip16Bit) {
  fs::path dir = TempDir("wav");
  Waveform w{Tone(300.0, 0.1, 16000, 0.4), 16000};
  WriteWav((dir / "a.wav").string(), w);
  Waveform back = ReadWav((dir / "a.wav").string());
  EXPECT_EQ(back.sample_rate_hz, 16000);
  ASSERT_EQ(back.samples.size(), w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i) EXPECT_NEAR(back.samples[i], w.samples[i], 1e-4);
  std::ofstream(dir / "b.wav") << "not a wav";
  EXPECT_THROW(ReadWav((dir / "b.wav").string()), InvalidInput);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace fgtts::corpus
