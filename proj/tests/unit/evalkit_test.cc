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

#include <cmath>
#include <numbers>

#include "fgtts/common/error.h"
#include "fgtts/common/random.h"
#include "fgtts/common/strings.h"
#include "fgtts/corpus/synthetic.h"
#include "fgtts/evalkit/metrics.h"
#include "fgtts/evalkit/probe.h"
#include "fgtts/evalkit/protocols.h"
#include "fgtts/trainer/train_config.h"
#include "fgtts/trainer/trainer.h"

namespace fgtts::eval {
namespace {

const double kMcdUnit = 10.0 / std::log(10.0) * std::sqrt(2.0);

TEST(MetricsTest, McdExamples) {
  Matrix a = Matrix::Zero(1, kNumCepstra);
  EXPECT_EQ(Mcd(a, a), 0.0);
  Matrix b = a;
  b(0, 4) = 1.0;
  EXPECT_NEAR(Mcd(a, b), 6.14186, 1e-5);
  EXPECT_NEAR(Mcd(a, b), kMcdUnit, 1e-12);
  EXPECT_THROW(Mcd(a, Matrix::Zero(2, kNumCepstra)), ShapeMismatch);
  EXPECT_THROW(McdFromMel(Matrix::Zero(3, 20), Matrix::Zero(4, 20)), ShapeMismatch);
}

TEST(MetricsTest, McdFromMelUsesOrthonormalDct) {
  // A log-mel difference equal to the k-th orthonormal DCT-II basis vector
  // moves exactly one cepstral coefficient by one.
  const int n = 20;
  for (int k = 1; k <= kNumCepstra; ++k) {
    Matrix a = Matrix::Zero(2, n);
    Matrix b = a;
    for (int m = 0; m < n; ++m) {
      b(1, m) = std::sqrt(2.0 / n) * std::cos(std::numbers::pi * k * (2 * m + 1) / (2.0 * n));
    }
    EXPECT_NEAR(McdFromMel(a, b), kMcdUnit / 2.0, 1e-9) << k;
  }
  // c0 is excluded, so a constant offset costs nothing.
  EXPECT_NEAR(McdFromMel(Matrix::Zero(3, n), Matrix::Constant(3, n, 2.5)), 0.0, 1e-9);
}

TEST(MetricsTest, McdSymmetricAndZeroOnlyWhenEqual) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const int t = rng.UniformInt(1, 6);
    Matrix a(t, kNumCepstra), b(t, kNumCepstra);
    for (Eigen::Index r = 0; r < a.size(); ++r) {
      a.data()[r] = rng.Normal();
      b.data()[r] = rng.Normal();
    }
    EXPECT_NEAR(Mcd(a, b), Mcd(b, a), 1e-12);
    EXPECT_GT(Mcd(a, b), 0.0);
    EXPECT_EQ(Mcd(a, a), 0.0);
  }
}

corpus::PitchTrack Track(std::vector<double> f0, std::vector<bool> voiced) {
  corpus::PitchTrack p;
  p.f0_hz = std::move(f0);
  p.voiced = std::move(voiced);
  return p;
}

TEST(MetricsTest, FfeExamples) {
  auto ref = corpus::PitchTrack::FromF0({100, 100});
  EXPECT_EQ(Ffe(ref, ref), 0.0);
  EXPECT_NEAR(Ffe(ref, corpus::PitchTrack::FromF0({100, 125})), 0.5, 1e-12);
  // Exactly 20% is not an error.
  EXPECT_NEAR(Ffe(ref, corpus::PitchTrack::FromF0({100, 120})), 0.0, 1e-12);
  EXPECT_NEAR(Ffe(ref, corpus::PitchTrack::FromF0({0, 0})), 1.0, 1e-12);
  // Voiced-in-synthesis only also counts.
  EXPECT_NEAR(Ffe(corpus::PitchTrack::FromF0({0, 100}), corpus::PitchTrack::FromF0({100, 100})),
              0.5, 1e-12);
  EXPECT_THROW(Ffe(ref, corpus::PitchTrack::FromF0({100})), ShapeMismatch);
}

TEST(MetricsTest, FfeIgnoresUnvoicedValues) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const int t = rng.UniformInt(1, 12);
    std::vector<double> f0a(t), f0b(t);
    std::vector<bool> va(t), vb(t);
    for (int j = 0; j < t; ++j) {
      va[j] = rng.Uniform(0, 1) < 0.6;
      vb[j] = rng.Uniform(0, 1) < 0.6;
      f0a[j] = va[j] ? rng.Uniform(80, 300) : 0.0;
      f0b[j] = vb[j] ? rng.Uniform(80, 300) : 0.0;
    }
    const double base = Ffe(Track(f0a, va), Track(f0b, vb));
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
    for (int j = 0; j < t; ++j) {
      if (!va[j]) f0a[j] = rng.Uniform(-500, 500);
      if (!vb[j]) f0b[j] = rng.Uniform(-500, 500);
    }
    EXPECT_EQ(Ffe(Track(f0a, va), Track(f0b, vb)), base);
  }
}

TEST(MetricsTest, ProsodyExamples) {
  // Three tokens of two frames with mean f0 100, 120, 140.
  Matrix mel = Matrix::Constant(6, 10, -1.0);
  auto pitch = corpus::PitchTrack::FromF0({90, 110, 120, 120, 0, 140});
  ProsodyStats s = ProsodyTokenStddev(mel, pitch, {2, 2, 2});
  EXPECT_NEAR(s.Get("f0"), 20.0, 1e-9);
  EXPECT_NEAR(s.Get("energy"), 0.0, 1e-12);
  EXPECT_NEAR(s.Get("duration"), 0.0, 1e-12);

  // Energy: log of summed mel power per frame, averaged over the token.
  Matrix loud = mel;
  loud.middleRows(2, 2).array() += std::log(4.0);
  ProsodyStats e = ProsodyTokenStddev(loud, pitch, {2, 2, 2});
  const double mid = std::log(4.0);
  const double mean = mid / 3.0;
  const double var = (2 * mean * mean + (mid - mean) * (mid - mean)) / 2.0;
  EXPECT_NEAR(e.Get("energy"), std::sqrt(var), 1e-9);

  // One voiced token leaves f0 undefined; the others still work.
  ProsodyStats u = ProsodyTokenStddev(mel, corpus::PitchTrack::FromF0({100, 0, 0, 0, 0, 0}),
                                      {2, 2, 2});
  EXPECT_THROW(u.Get("f0"), Undefined);
  EXPECT_NO_THROW(u.Get("energy"));
  EXPECT_THROW(ProsodyTokenStddev(mel, pitch, {2, 2}), ShapeMismatch);
}

TEST(MetricsTest, ProsodyInvariantToFrameOrderWithinToken) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const int n = rng.UniformInt(2, 5);
    std::vector<int> d(n);
    int t = 0;
    for (int& x : d) t += (x = rng.UniformInt(1, 4));
    Matrix mel(t, 8);
    for (Eigen::Index r = 0; r < mel.size(); ++r) mel.data()[r] = rng.Normal();
    std::vector<double> f0(t);
    for (double& f : f0) f = rng.Uniform(0, 1) < 0.7 ? rng.Uniform(90, 250) : 0.0;
    Matrix mel2 = mel;
    std::vector<double> f02 = f0;
    int start = 0;
    for (int x : d) {
      // Reverse the frames of each token.
      for (int k = 0; k < x; ++k) {
        mel2.row(start + k) = mel.row(start + x - 1 - k);
        f02[start + k] = f0[start + x - 1 - k];
      }
      start += x;
    }
    ProsodyStats a = ProsodyTokenStddev(mel, corpus::PitchTrack::FromF0(f0), d);
    ProsodyStats b = ProsodyTokenStddev(mel2, corpus::PitchTrack::FromF0(f02), d);
    EXPECT_NEAR(*a.energy_stddev, *b.energy_stddev, 1e-9);
    ASSERT_EQ(a.f0_stddev.has_value(), b.f0_stddev.has_value());
    if (a.f0_stddev) {
      EXPECT_NEAR(*a.f0_stddev, *b.f0_stddev, 1e-9);
    }
  }
}

// Fewest edits over all scripts, by exhaustive recursion.
int BruteEdits(const std::vector<std::string>& r, size_t i, const std::vector<std::string>& h,
               size_t j) {
  if (i == r.size()) return static_cast<int>(h.size() - j);
  if (j == h.size()) return static_cast<int>(r.size() - i);
  int best = BruteEdits(r, i + 1, h, j + 1) + (r[i] == h[j] ? 0 : 1);
  best = std::min(best, BruteEdits(r, i + 1, h, j) + 1);
  best = std::min(best, BruteEdits(r, i, h, j + 1) + 1);
  return best;
}

TEST(MetricsTest, WerExamples) {
  EXPECT_EQ(Wer("the cat sat", "the cat sat"), 0.0);
  EXPECT_NEAR(Wer("the cat sat", "the cat"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(Wer("a", "b c"), 2.0, 1e-12);
  EXPECT_NEAR(Wer("  a   b ", "a b"), 0.0, 1e-12);
  EXPECT_THROW(Wer("", "a"), InvalidInput);
  EXPECT_THROW(Wer("   ", "a"), InvalidInput);
}

TEST(MetricsTest, WerMatchesBruteForce) {
  Rng rng(21);
  const std::vector<std::string> words{"a", "b", "c"};
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> r(rng.UniformInt(1, 6)), h(rng.UniformInt(0, 6));
    for (auto& w : r) w = words[rng.UniformInt(0, 2)];
    for (auto& w : h) w = words[rng.UniformInt(0, 2)];
    const double expected = static_cast<double>(BruteEdits(r, 0, h, 0)) / r.size();
    EXPECT_NEAR(Wer(r, h), expected, 1e-12);
    EXPECT_NEAR(Wer(Join(r, " "), Join(h, " ")), expected, 1e-12);
    EXPECT_EQ(Wer(r, r), 0.0);
  }
}

TEST(MetricsTest, Cosine) {
  RowVector a(3);
  a << 1.0, -2.0, 0.5;
  EXPECT_NEAR(CosineSimilarity(a, a), 1.0, 1e-12);
  EXPECT_NEAR(CosineSimilarity(a, -a), -1.0, 1e-12);
  RowVector x = RowVector::Zero(3), y = RowVector::Zero(3);
  x(0) = 1.0;
  y(2) = 1.0;
  EXPECT_NEAR(CosineSimilarity(x, y), 0.0, 1e-12);
  EXPECT_THROW(CosineSimilarity(a, RowVector::Zero(3)), InvalidInput);
  EXPECT_THROW(CosineSimilarity(a, RowVector::Ones(2)), ShapeMismatch);
}

TEST(MetricsTest, SampleStddev) {
  EXPECT_NEAR(SampleStddev({100, 120, 140}), 20.0, 1e-12);
  EXPECT_EQ(SampleStddev({3.0}), 0.0);
}

TEST(ProbeTest, SeparableIsPerfect) {
  Rng rng(2);
  Matrix x(40, 3);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) {
    labels[i] = i % 2;
    x(i, 0) = (labels[i] ? 3.0 : -3.0) + 0.3 * rng.Normal();
    x(i, 1) = rng.Normal();
    x(i, 2) = rng.Normal();
  }
  EXPECT_EQ(LeakageProbe(x, labels), 1.0);
}

TEST(ProbeTest, PermutedLabelsStayInNullBand) {
  // Four well-separated classes; after shuffling the labels the probe must
  // fall back to chance.
  const int m = 400, k = 4;
  Rng rng(9);
  Matrix x(m, 4);
  std::vector<int> labels(m);
  for (int i = 0; i < m; ++i) {
    labels[i] = i % k;
    for (int j = 0; j < 4; ++j) x(i, j) = rng.Normal() + (j == labels[i] ? 4.0 : 0.0);
  }
  EXPECT_GT(LeakageProbe(x, labels), 0.9);
  const double sigma = std::sqrt(0.25 * 0.75 / m);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<int> permuted = labels;
    Rng(seed).Shuffle(&permuted);
    EXPECT_NEAR(LeakageProbe(x, permuted), 0.25, 3.0 * sigma) << seed;
  }
}

TEST(ProbeTest, DegenerateLabels) {
  Matrix x = Matrix::Random(10, 2);
  EXPECT_THROW(LeakageProbe(x, std::vector<int>(10, 1)), InvalidInput);
  std::vector<int> few{0, 0, 0, 0, 0, 0, 0, 1, 1, 1};
  EXPECT_THROW(LeakageProbe(x, few), InvalidInput);
  EXPECT_THROW(LeakageProbe(x, std::vector<int>(9, 0)), InvalidInput);
  ProbeOptions one;
  one.folds = 1;
  std::vector<int> ok{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_THROW(LeakageProbe(x, ok, one), InvalidInput);
}

TEST(ProbeTest, FoldsAreStratifiedAndDeterministic) {
  std::vector<int> labels;
  for (int i = 0; i < 23; ++i) labels.push_back(i % 3);
  auto a = StratifiedFolds(labels, 4, 5);
  EXPECT_EQ(a, StratifiedFolds(labels, 4, 5));
  for (int c = 0; c < 3; ++c) {
    std::vector<int> per(4, 0);
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) ++per[a[i]];
    }
    EXPECT_LE(*std::max_element(per.begin(), per.end()) -
                  *std::min_element(per.begin(), per.end()), 1);
  }
}

// A corpus and models small enough to train in a second.
Config ToyConfig(const std::string& stage) {
  Config c = trainer::DefaultConfig();
  c.ApplyOverrides({"corpus.n_utterances=24", "corpus.min_tokens=8", "corpus.max_tokens=9",
                    "corpus.token_vocab_size=8", "features.n_mels=40",
                    "model.d_emb=8", "model.d_h=8", "model.d_z=2", "model.d_att=8",
                    "model.loc_kernel=5", "model.posterior_hidden=8", "model.prenet_dim=8",
                    "model.decoder_hidden=8", "model.d_g=4", "model.ref_channels=2",
                    "model.ref_hidden=4", "model.prior_hidden=8", "model.duration_hidden=4",
                    "train.steps=20", "train.batch_size=4", "train.warmup_steps=5",
                    "train.kl_warmup_steps=10", "train.kl_weight=0.01", "train.eval_every=1000",
                    "train.log_every=1000", "train.heldout_fraction=0.25",
                    "train.learning_rate=0.01", "train.stage=" + stage,
                    "eval.references=2", "eval.sentences_per_reference=3"});
  return c;
}

class ProtocolTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_ = new Config(ToyConfig("stage1"));
    const auto spec = corpus::SyntheticSpecFromConfig(*config_);
    corpus_ = new corpus::CorpusManifest(corpus::GenerateSyntheticCorpus(spec));
    pitch_ = new corpus::MelPitchEstimator(spec.mel, {});
    stage1_ = new trainer::TrainResult(trainer::Train(*config_, *corpus_));
    stage2_ = new trainer::TrainResult(
        trainer::TrainStage2(ToyConfig("stage2"), *corpus_, stage1_->checkpoint));
  }
  static void TearDownTestSuite() {
    delete stage2_;
    delete stage1_;
    delete pitch_;
    delete corpus_;
    delete config_;
  }
  EvalContext Context() const {
    EvalContext ctx = EvalContext::FromConfig(*config_);
    ctx.pitch = pitch_;
    ctx.model_tag = "toy";
    return ctx;
  }
  std::vector<int> All() const {
    std::vector<int> v(corpus_->utterances.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
  }

  static Config* config_;
  static corpus::CorpusManifest* corpus_;
  static corpus::MelPitchEstimator* pitch_;
  static trainer::TrainResult* stage1_;
  static trainer::TrainResult* stage2_;
};
Config* ProtocolTest::config_ = nullptr;
corpus::CorpusManifest* ProtocolTest::corpus_ = nullptr;
corpus::MelPitchEstimator* ProtocolTest::pitch_ = nullptr;
trainer::TrainResult* ProtocolTest::stage1_ = nullptr;
trainer::TrainResult* ProtocolTest::stage2_ = nullptr;

TEST_F(ProtocolTest, IdentityPosteriorIsPerfect) {
  EvalContext ctx = Context();
  const auto& heldout = stage1_->split.heldout;
  EvalReport r = EvaluatePosterior(nullptr, *corpus_, heldout, ctx);
  ASSERT_EQ(r.rows.size(), heldout.size());
  EXPECT_EQ(r.model_tag, "real");
  EXPECT_EQ(r.protocol, "posterior");
  for (const ReportRow& row : r.rows) {
    EXPECT_EQ(row.values.at("mcd"), 0.0);
    EXPECT_EQ(row.values.at("ffe"), 0.0);
  }
  const auto agg = r.Aggregates();
  EXPECT_EQ(agg.at("mcd").count, static_cast<int>(heldout.size()));
  EXPECT_GT(agg.at("energy_stddev").mean, 0.0);
}

TEST_F(ProtocolTest, ModelPosteriorReport) {
  EvalContext ctx = Context();
  const auto& heldout = stage1_->split.heldout;
  EvalReport r = EvaluatePosterior(stage1_->model.get(), *corpus_, heldout, ctx);
  ASSERT_EQ(r.rows.size(), heldout.size());
  for (const ReportRow& row : r.rows) {
    EXPECT_GT(row.values.at("mcd"), 0.0);
    EXPECT_GE(row.values.at("ffe"), 0.0);
    EXPECT_LE(row.values.at("ffe"), 1.0);
  }
  // Same seed, same numbers.
  EvalReport again = EvaluatePosterior(stage1_->model.get(), *corpus_, heldout, ctx);
  EXPECT_EQ(r.ToRecords(), again.ToRecords());
}

TEST_F(ProtocolTest, MetricErrorsAreRecordedPerRow) {
  // A one-token utterance has no prosody stddevs but still gets MCD.
  corpus::CorpusManifest m = *corpus_;
  corpus::UtteranceRecord& rec = m.utterances[0];
  const int d = (*rec.durations)[0];
  rec.token_ids.resize(1);
  rec.durations->resize(1);
  rec.mel.frames = Matrix(rec.mel.frames.topRows(d));
  rec.pitch.f0_hz.resize(d);
  rec.pitch.voiced.resize(d);
  EvalReport r = EvaluatePosterior(nullptr, m, {0, 1}, Context());
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].values.count("mcd"), 1u);
  EXPECT_EQ(r.rows[0].errors.count("energy_stddev"), 1u);
  EXPECT_EQ(r.rows[0].errors.count("dur_stddev"), 1u);
  EXPECT_TRUE(r.rows[1].errors.empty());
}

TEST_F(ProtocolTest, PriorTemperatureZeroIsRepeatable) {
  EvalContext ctx = Context();
  ctx.prior_temperature = 0.0;
  const corpus::UtteranceRecord& ref = corpus_->utterances[1];
  const corpus::UtteranceRecord& sent = corpus_->utterances[2];
  Rng a(1), b(99);
  auto s1 = stage2_->model->SynthesizeFromText(sent.token_ids, &ref.mel.frames, 0.0, &a);
  auto s2 = stage2_->model->SynthesizeFromText(sent.token_ids, &ref.mel.frames, 0.0, &b);
  EXPECT_TRUE(s1.frames == s2.frames);
  EXPECT_EQ(s1.durations, s2.durations);

  // The same reference listed twice yields identical rows.
  std::vector<int> idx{1, 1, 2, 3, 4};
  EvalReport r = EvaluatePrior(*stage2_->model, *corpus_, idx, ctx);
  ASSERT_EQ(r.rows.size(), 6u);
  for (int s = 0; s < 3; ++s) {
    EXPECT_EQ(r.rows[s].values, r.rows[3 + s].values);
  }
}

TEST_F(ProtocolTest, PriorReportLayout) {
  EvalContext ctx = Context();
  TokenMatcher matcher;
  matcher.Fit(*corpus_, stage1_->split.train);
  ctx.matcher = &matcher;
  std::vector<const Matrix*> fit;
  for (int i : stage1_->split.train) fit.push_back(&corpus_->utterances[i].mel.frames);
  SummaryEmbedder embedder(pitch_, fit);
  ctx.embedder = &embedder;
  EvalReport r = EvaluatePrior(*stage2_->model, *corpus_, stage1_->split.heldout, ctx);
  EXPECT_EQ(r.protocol, "prior");
  EXPECT_EQ(r.rows.size(), 6u);
  const std::vector<std::string> cols{"wer", "similarity", "f0_stddev", "energy_stddev",
                                      "dur_stddev", "mean_f0", "coarse_match"};
  EXPECT_EQ(r.columns, cols);
  for (const ReportRow& row : r.rows) {
    EXPECT_EQ(row.id.find('/') != std::string::npos, true);
    EXPECT_GE(row.values.at("wer"), 0.0);
    const double sim = row.values.at("similarity");
    EXPECT_LE(std::abs(sim), 1.0 + 1e-12);
    if (row.values.count("coarse_match")) {
      const double c = row.values.at("coarse_match");
      EXPECT_TRUE(c == 0.0 || c == 1.0);
    }
  }
  // A stage-1 model has no prior; every row records the failure.
  EvalReport bad = EvaluatePrior(*stage1_->model, *corpus_, stage1_->split.heldout, ctx);
  for (const ReportRow& row : bad.rows) {
    EXPECT_TRUE(row.values.empty());
    EXPECT_EQ(row.errors.size(), bad.columns.size());
  }
}

TEST_F(ProtocolTest, MatcherRecognisesCorpusAudio) {
  TokenMatcher matcher;
  EXPECT_FALSE(matcher.fitted());
  EXPECT_THROW(matcher.Recognize(Matrix::Zero(3, 40), {3}), InvalidInput);
  matcher.Fit(*corpus_, All());
  double wer = 0.0;
  for (const auto& rec : corpus_->utterances) {
    std::vector<int> ids = matcher.Recognize(rec.mel.frames, *rec.durations);
    ASSERT_EQ(ids.size(), rec.token_ids.size());
    int wrong = 0;
    for (size_t n = 0; n < ids.size(); ++n) wrong += ids[n] != rec.token_ids[n];
    wer += static_cast<double>(wrong) / ids.size();
  }
  EXPECT_LT(wer / corpus_->utterances.size(), 0.2);
}

TEST_F(ProtocolTest, PriorAlignedKeepsLengths) {
  EvalContext ctx = Context();
  EvalReport r = EvaluatePriorAligned(*stage2_->model, *corpus_, stage1_->split.heldout, ctx);
  ASSERT_EQ(r.rows.size(), stage1_->split.heldout.size());
  for (const ReportRow& row : r.rows) {
    EXPECT_TRUE(row.errors.empty()) << row.id;
    EXPECT_GT(row.values.at("mcd"), 0.0);
  }
}

TEST_F(ProtocolTest, PoolLatents) {
  LatentPools p = PoolLatents(*stage1_->model, *corpus_, All());
  EXPECT_EQ(p.pools.rows(), static_cast<Eigen::Index>(corpus_->utterances.size()));
  EXPECT_EQ(p.pools.cols(), 2);
  EXPECT_EQ(p.labels.size(), corpus_->utterances.size());
  const double acc = LeakageProbe(p.pools, p.labels);
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
}

TEST_F(ProtocolTest, ReportRecordsRoundTrip) {
  EvalContext ctx = Context();
  EvalReport r = EvaluatePosterior(stage1_->model.get(), *corpus_, stage1_->split.heldout, ctx);
  r.rows[0].values.erase("ffe");
  r.rows[0].errors["ffe"] = "no pitch";
  EvalReport back = EvalReport::FromRecords(r.ToRecords());
  EXPECT_EQ(back.model_tag, r.model_tag);
  EXPECT_EQ(back.protocol, r.protocol);
  EXPECT_EQ(back.columns, r.columns);
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].id, r.rows[i].id);
    EXPECT_EQ(back.rows[i].values, r.rows[i].values);
    EXPECT_EQ(back.rows[i].errors, r.rows[i].errors);
  }
  EXPECT_EQ(back.ToRecords(), EvalReport::FromRecords(back.ToRecords()).ToRecords());
  EXPECT_THROW(EvalReport::FromRecords("nope\n"), InvalidInput);
  EXPECT_NE(r.ToTable().find("mcd"), std::string::npos);
}

}  // namespace
}  // namespace fgtts::eval
