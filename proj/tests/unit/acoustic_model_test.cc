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
#include <numeric>

#include "fgtts/acoustic_model/losses.h"
#include "fgtts/acoustic_model/modules.h"
#include "fgtts/common/error.h"
#include "fgtts/common/random.h"
#include "fgtts/trainer/model.h"
#include "fgtts/trainer/trainer.h"
#include "gradcheck.h"
#include "tiny_model.h"

namespace fgtts::acoustic {
namespace {

Matrix RandomMatrix(Eigen::Index r, Eigen::Index c, Rng* rng, double scale = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng->Normal();
  return m;
}

struct AttentionFixture {
  ParameterSet params;
  LocationAttention att;
  explicit AttentionFixture(uint64_t seed, int d_q = 6, int d_k = 5) {
    Rng rng(seed);
    att = LocationAttention(&params, "att", d_q, d_k, 4, 3, &rng);
  }
};

TEST(TextEncoderTest, ShapeAndDeterminism) {
  ParameterSet params;
  Rng rng(1);
  TextEncoder enc(&params, "text", 10, 4, 8, 2, 3, &rng);
  Graph g1(false), g2(false);
  Var a = enc.Forward(g1, {5});
  EXPECT_EQ(a.rows(), 1);
  EXPECT_EQ(a.cols(), 8);
  Var b = enc.Forward(g1, {3, 4, 5, 9});
  Var c = enc.Forward(g2, {3, 4, 5, 9});
  EXPECT_EQ(b.rows(), 4);
  EXPECT_TRUE(b.value() == c.value());
}

TEST(TextEncoderTest, SequencesAreIndependentOfProcessingOrder) {
  ParameterSet params;
  Rng rng(2);
  TextEncoder enc(&params, "text", 10, 4, 8, 1, 3, &rng);
  std::vector<std::vector<int>> batch = {{3, 4}, {5, 6, 7}, {8}};
  Graph g(false);
  std::vector<Matrix> forward, backward;
  for (const auto& s : batch) forward.push_back(enc.Forward(g, s).value());
  for (auto it = batch.rbegin(); it != batch.rend(); ++it) {
    backward.push_back(enc.Forward(g, *it).value());
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    EXPECT_TRUE(forward[i] == backward[batch.size() - 1 - i]);
  }
}

TEST(TextEncoderTest, OutOfRangeIdThrows) {
  ParameterSet params;
  Rng rng(3);
  TextEncoder enc(&params, "text", 10, 4, 8, 1, 3, &rng);
  Graph g(false);
  EXPECT_THROW(enc.Forward(g, {3, 10}), InvalidInput);
  EXPECT_THROW(enc.Forward(g, {}), InvalidInput);
}

TEST(AttentionTest, SingleFrameTakesAllWeight) {
  AttentionFixture f(4);
  Rng rng(5);
  Graph g(false);
  Matrix frame = RandomMatrix(1, 5, &rng);
  Alignment a = f.att.Forward(g, g.Constant(RandomMatrix(3, 6, &rng)), g.Constant(frame));
  ASSERT_EQ(a.weights.cols(), 1);
  for (int n = 0; n < 3; ++n) {
    EXPECT_NEAR(a.weights.value()(n, 0), 1.0, 1e-12);
    for (int c = 0; c < 5; ++c) EXPECT_NEAR(a.aligned.value()(n, c), frame(0, c), 1e-12);
  }
}

TEST(AttentionTest, RowsAreNormalisedOnRandomInputs) {
  AttentionFixture f(6);
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.UniformInt(1, 8), t = rng.UniformInt(1, 40);
    Graph g(false);
    Alignment a = f.att.Forward(g, g.Constant(RandomMatrix(n, 6, &rng, 3.0)),
                                g.Constant(RandomMatrix(t, 5, &rng, 3.0)));
    const Matrix& w = a.weights.value();
    ASSERT_EQ(w.rows(), n);
    ASSERT_EQ(w.cols(), t);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(w.row(i).sum(), 1.0, 1e-5);
      EXPECT_GE(w.row(i).minCoeff(), 0.0);
    }
  }
}

TEST(AttentionTest, UniformWeightsGiveFrameMean) {
  AttentionFixture f(8);
  Rng rng(9);
  Graph g(false);
  Matrix frames = RandomMatrix(7, 5, &rng);
  Alignment a = f.att.Forward(g, g.Constant(RandomMatrix(4, 6, &rng)), g.Constant(frames), true);
  RowVector mean = RowVector::Zero(5);
  for (int t = 0; t < 7; ++t) mean += frames.row(t);
  mean /= 7.0;
  for (int n = 0; n < 4; ++n) {
    EXPECT_LT((a.aligned.value().row(n) - mean).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PosteriorTest, ShapesClampAndDeterminism) {
  ParameterSet params;
  Rng rng(10);
  PosteriorEncoder enc(&params, "post", 6, 5, 8, &rng);
  Matrix x = RandomMatrix(3, 6, &rng);
  Graph g(false);
  Posterior p = enc.Forward(g, g.Constant(x));
  EXPECT_EQ(p.mu.rows(), 3);
  EXPECT_EQ(p.mu.cols(), 8);
  EXPECT_EQ(p.log_sigma.rows(), 3);
  EXPECT_EQ(p.log_sigma.cols(), 8);
  Posterior again = enc.Forward(g, g.Constant(x));
  EXPECT_TRUE(p.mu.value() == again.mu.value());
  EXPECT_TRUE(p.log_sigma.value() == again.log_sigma.value());

  // Push every hidden unit into saturation so log_sigma runs into the clamp.
  for (const auto& param : params.all()) param->value *= 1e3;
  Posterior big = enc.Forward(g, g.Constant(x * 1e6));
  EXPECT_GE(big.log_sigma.value().minCoeff(), kLogSigmaMin);
  EXPECT_LE(big.log_sigma.value().maxCoeff(), kLogSigmaMax);
  EXPECT_TRUE(big.log_sigma.value().allFinite());
}

TEST(ReparameterizeTest, ZeroNoiseIsIdentity) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.UniformInt(1, 6), d = rng.UniformInt(1, 9);
    Graph g(false);
    Posterior p{g.Constant(RandomMatrix(n, d, &rng)), g.Constant(RandomMatrix(n, d, &rng))};
    Var z = Reparameterize(g, p, Matrix::Zero(n, d));
    EXPECT_TRUE(z.value() == p.mu.value());
  }
}

TEST(ReparameterizeTest, StandardPosteriorPassesNoiseThrough) {
  Rng rng(12);
  Graph g(false);
  Matrix eps = RandomMatrix(4, 3, &rng);
  Posterior p{g.Constant(Matrix::Zero(4, 3)), g.Constant(Matrix::Zero(4, 3))};
  EXPECT_TRUE(Reparameterize(g, p, eps).value() == eps);
  EXPECT_THROW(Reparameterize(g, p, Matrix::Zero(3, 3)), ShapeMismatch);
}

TEST(ReparameterizeTest, MonteCarloStddev) {
  const int draws = 100000;
  Rng rng(13);
  Graph g(false);
  Posterior p{g.Constant(Matrix::Zero(draws, 1)),
              g.Constant(Matrix::Constant(draws, 1, std::log(2.0)))};
  Matrix noise(draws, 1);
  for (int i = 0; i < draws; ++i) noise(i, 0) = rng.Normal();
  const Matrix& z = Reparameterize(g, p, noise).value();
  const double mean = z.mean();
  const double sd = std::sqrt((z.array() - mean).square().sum() / (draws - 1));
  EXPECT_NEAR(sd, 2.0, 0.04);
}

TEST(UpsampleTest, Examples) {
  EXPECT_EQ(FrameOwners({2, 1, 3}), (std::vector<int>{0, 0, 1, 2, 2, 2}));
  EXPECT_EQ(FrameOwners({0, 3}), (std::vector<int>{1, 1, 1}));

  Rng rng(14);
  Graph g(false);
  Matrix x = RandomMatrix(4, 5, &rng);
  Var ones = Upsample(g.Constant(x), {1, 1, 1, 1});
  EXPECT_TRUE(ones.value() == x);
  Var skip = Upsample(g.Constant(x.topRows(2)), {0, 3});
  EXPECT_EQ(skip.rows(), 3);
  for (int t = 0; t < 3; ++t) EXPECT_TRUE(skip.value().row(t) == x.row(1));

  EXPECT_THROW(Upsample(g.Constant(x.topRows(2)), {0, 0}), EmptyOutput);
  EXPECT_THROW(Upsample(g.Constant(x.topRows(2)), {1, -1}), InvalidInput);
  EXPECT_THROW(Upsample(g.Constant(x.topRows(2)), {1, 1, 1}), InvalidInput);
}

TEST(UpsampleTest, LengthAndOwnershipOnRandomDurations) {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.UniformInt(1, 10);
    std::vector<int> d(n);
    for (int& v : d) v = rng.UniformInt(0, 6);
    if (std::accumulate(d.begin(), d.end(), 0) == 0) d[0] = 1;
    Graph g(false);
    Matrix x = RandomMatrix(n, 3, &rng);
    Var u = Upsample(g.Constant(x), d);
    ASSERT_EQ(u.rows(), std::accumulate(d.begin(), d.end(), 0));
    int t = 0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d[i]; ++k, ++t) EXPECT_TRUE(u.value().row(t) == x.row(i));
    }
  }
}

TEST(DecoderTest, TeacherForcedAndFreeRunning) {
  ParameterSet params;
  Rng rng(16);
  Decoder dec(&params, "dec", 6, 5, 4, 7, 0.5, &rng);
  Matrix u = RandomMatrix(9, 6, &rng);
  Matrix teacher = RandomMatrix(9, 5, &rng);
  Graph g(false);
  Var tf = dec.TeacherForced(g, g.Constant(u), teacher);
  EXPECT_EQ(tf.rows(), teacher.rows());
  EXPECT_EQ(tf.cols(), teacher.cols());
  Var fr = dec.FreeRunning(g, g.Constant(u));
  EXPECT_LT((tf.value().row(0) - fr.value().row(0)).cwiseAbs().maxCoeff(), 1e-12);
  Graph g2(false);
  EXPECT_TRUE(dec.FreeRunning(g2, g2.Constant(u)).value() == fr.value());
  EXPECT_THROW(dec.TeacherForced(g, g.Constant(u), teacher.topRows(8)), ShapeMismatch);
}

TEST(DecoderTest, FreeRunningMatchesTeacherForcingOnItsOwnOutput) {
  ParameterSet params;
  Rng rng(17);
  Decoder dec(&params, "dec", 4, 3, 4, 5, 0.5, &rng);
  Matrix u = RandomMatrix(6, 4, &rng);
  Graph g(false);
  Matrix fr = dec.FreeRunning(g, g.Constant(u)).value();
  Matrix tf = dec.TeacherForced(g, g.Constant(u), fr).value();
  EXPECT_LT((fr - tf).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Stage1LossTest, Examples) {
  Rng rng(18);
  Matrix y = RandomMatrix(5, 4, &rng);
  LossBreakdown zero = Stage1Loss(y, y, Matrix::Zero(3, 8), Matrix::Zero(3, 8), 1.0);
  EXPECT_NEAR(zero.total, 0.0, 1e-12);

  LossBreakdown kl = Stage1Loss(y, y, Matrix::Ones(3, 8), Matrix::Zero(3, 8), 1.0);
  EXPECT_NEAR(kl.kl, 0.5 * 8, 1e-12);

  Matrix off = y.array() + 0.25;
  LossBreakdown no_kl = Stage1Loss(y, off, Matrix::Ones(3, 8), Matrix::Zero(3, 8), 0.0);
  EXPECT_NEAR(no_kl.reconstruction, 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(no_kl.total, no_kl.reconstruction);

  LossBreakdown mixed = Stage1Loss(y, off, RandomMatrix(3, 8, &rng), RandomMatrix(3, 8, &rng), 0.3);
  EXPECT_NEAR(mixed.total, mixed.reconstruction + 0.3 * mixed.kl, 1e-12);
  EXPECT_GE(mixed.kl, -1e-6);
  EXPECT_THROW(Stage1Loss(y, y.topRows(4), Matrix::Zero(3, 8), Matrix::Zero(3, 8), 1.0),
               ShapeMismatch);
}

TEST(Stage1LossTest, ClosedFormKlMatchesMonteCarlo) {
  Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const double mu = rng.Uniform(-1.5, 1.5), ls = rng.Uniform(-1.0, 0.5);
    const double sigma = std::exp(ls);
    const double closed = GaussianKl(mu, ls, 0.0, 0.0);
    if (closed < 0.05) continue;
    const int draws = 100000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double e = rng.Normal();
      const double z = mu + sigma * e;
      // log q(z) - log p(z)
      sum += -ls - 0.5 * e * e + 0.5 * z * z;
    }
    EXPECT_NEAR(sum / draws, closed, 0.01 * closed) << "mu " << mu << " ls " << ls;
  }
}

TEST(Stage1LossTest, KlWeightRamp) {
  EXPECT_DOUBLE_EQ(KlWeight(0, 2.0, 100), 0.0);
  EXPECT_DOUBLE_EQ(KlWeight(50, 2.0, 100), 1.0);
  EXPECT_DOUBLE_EQ(KlWeight(500, 2.0, 100), 2.0);
  EXPECT_DOUBLE_EQ(KlWeight(0, 2.0, 0), 2.0);
}

TEST(Stage1GradientTest, TinyModelMatchesFiniteDifferences) {
  trainer::TtsModel model(testing::TinyConfig(), 21);
  corpus::UtteranceRecord rec = testing::TinyRecord();
  ASSERT_EQ(rec.token_ids.size(), 3u);
  model.norm().Fit({&rec.mel.frames});
  testing::JitterBiases(&model.params(), 23);
  const Rng noise(22);
  auto loss_fn = [&](Graph& g) {
    Rng n = noise;
    trainer::UtteranceLoss l = trainer::ComputeUtteranceLoss(model, g, rec, &n, nullptr);
    return trainer::CombineLoss(model, l, 1.0, 1.0, l.elements, l.tokens);
  };
  testing::GradCheckResult r = testing::CheckGradients(&model.params(), loss_fn);
  EXPECT_GT(r.checked, 100);
  EXPECT_LT(r.max_rel_error, 1e-3) << r.worst;
}

}  // namespace
}  // namespace fgtts::acoustic
