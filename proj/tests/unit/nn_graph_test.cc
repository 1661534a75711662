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

#include "fgtts/nn/adam.h"
#include "fgtts/nn/graph.h"
#include "fgtts/nn/layers.h"
#include "gradcheck.h"

namespace fgtts::nn {
namespace {

Parameter* RandomParam(ParameterSet* set, const std::string& name, int r, int c,
                       Rng* rng, double scale = 1.0) {
  Parameter* p = set->Create(name, r, c);
  for (Eigen::Index i = 0; i < p->value.size(); ++i) {
    p->value.data()[i] = scale * rng->Normal();
  }
  return p;
}

// Weighted sum so that every output entry carries a distinct gradient.
Var Probe(Graph& g, Var y, Rng seed_rng) {
  Matrix w(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = seed_rng.Normal();
  return SumAll(Mul(y, g.Constant(w)));
}

class OpGradTest : public ::testing::Test {
 protected:
  void Expect(const std::function<Var(Graph&)>& f) {
    auto res = testing::CheckGradients(&set_, f);
    EXPECT_LT(res.max_rel_error, 1e-5) << res.worst;
    EXPECT_GT(res.checked, 0);
  }
  ParameterSet set_;
  Rng rng_{7};
};

TEST_F(OpGradTest, MatMulAddBroadcast) {
  Parameter* a = RandomParam(&set_, "a", 3, 4, &rng_);
  Parameter* b = RandomParam(&set_, "b", 4, 2, &rng_);
  Parameter* bias = RandomParam(&set_, "bias", 1, 2, &rng_);
  Expect([&](Graph& g) {
    return Probe(g, Add(MatMul(g.Param(a), g.Param(b)), g.Param(bias)), Rng(1));
  });
}

TEST_F(OpGradTest, Elementwise) {
  Parameter* a = RandomParam(&set_, "a", 3, 5, &rng_);
  Parameter* b = RandomParam(&set_, "b", 3, 5, &rng_);
  Expect([&](Graph& g) {
    Var x = g.Param(a), y = g.Param(b);
    Var t = Add(Tanh(x), Mul(Sigmoid(y), Exp(Scale(x, 0.3))));
    t = Sub(t, Square(AddScalar(y, 0.1)));
    t = Add(t, Relu(x));
    t = Add(t, Abs(y));
    return Probe(g, t, Rng(2));
  });
}

TEST_F(OpGradTest, Softmax) {
  Parameter* a = RandomParam(&set_, "a", 4, 6, &rng_);
  Expect([&](Graph& g) { return Probe(g, SoftmaxRows(g.Param(a)), Rng(3)); });
}

TEST_F(OpGradTest, ShapeOps) {
  Parameter* a = RandomParam(&set_, "a", 4, 3, &rng_);
  Parameter* b = RandomParam(&set_, "b", 4, 2, &rng_);
  Parameter* r = RandomParam(&set_, "r", 1, 5, &rng_);
  Expect([&](Graph& g) {
    Var c = ConcatCols({g.Param(a), g.Param(b)});
    Var s = SliceCols(c, 1, 3);
    Var rows = ConcatRows({s, SliceRows(s, 1, 2)});
    Var gathered = GatherRows(rows, {0, 5, 5, 2, 1});
    Var t = Transpose(gathered);
    Var br = BroadcastRows(SliceCols(g.Param(r), 0, 5), 3);
    Var out = Add(Probe(g, t, Rng(4)), Probe(g, Mul(br, ReverseRows(t)), Rng(5)));
    out = Add(out, Probe(g, SumRows(c), Rng(6)));
    out = Add(out, Probe(g, MeanRows(c), Rng(7)));
    out = Add(out, Probe(g, SumCols(c), Rng(8)));
    return Add(out, MeanAll(Square(c)));
  });
}

TEST_F(OpGradTest, Im2ColStridedPadded) {
  Parameter* x = RandomParam(&set_, "x", 9, 3, &rng_);
  Expect([&](Graph& g) { return Probe(g, Im2Col(g.Param(x), 3, 2, 1), Rng(9)); });
  EXPECT_EQ(ConvOutputLength(9, 3, 2, 1), 5);
  EXPECT_EQ(ConvOutputLength(15, 3, 2, 0), 7);
  EXPECT_EQ(ConvOutputLength(2, 3, 1, 0), 0);
}

TEST_F(OpGradTest, LstmSequence) {
  const int h = 3;
  Parameter* x = RandomParam(&set_, "x", 5, 4 * h, &rng_);
  Parameter* w = RandomParam(&set_, "w", h, 4 * h, &rng_, 0.5);
  Parameter* h0 = RandomParam(&set_, "h0", 1, h, &rng_, 0.5);
  Parameter* c0 = RandomParam(&set_, "c0", 1, h, &rng_, 0.5);
  Expect([&](Graph& g) {
    Var out = LstmSequence(g.Param(x), g.Param(w), g.Param(h0), g.Param(c0));
    return Probe(g, out, Rng(10));
  });
}

TEST_F(OpGradTest, GaussianKl) {
  Parameter* mq = RandomParam(&set_, "mq", 3, 2, &rng_);
  Parameter* lq = RandomParam(&set_, "lq", 3, 2, &rng_, 0.5);
  Parameter* mp = RandomParam(&set_, "mp", 3, 2, &rng_);
  Parameter* lp = RandomParam(&set_, "lp", 3, 2, &rng_, 0.5);
  Expect([&](Graph& g) {
    return Probe(g, GaussianKl(g.Param(mq), g.Param(lq), g.Param(mp), g.Param(lp)),
                 Rng(11));
  });
}

TEST_F(OpGradTest, ClampPassesInsideOnly) {
  Parameter* a = set_.Create("a", 1, 3);
  a->value << -5.0, 0.5, 5.0;
  Graph g;
  Var y = SumAll(Clamp(g.Param(a), -1.0, 1.0));
  g.Backward(y);
  EXPECT_DOUBLE_EQ(y.scalar(), -1.0 + 0.5 + 1.0);
  EXPECT_EQ(a->grad(0, 0), 0.0);
  EXPECT_EQ(a->grad(0, 1), 1.0);
  EXPECT_EQ(a->grad(0, 2), 0.0);
}

TEST(GraphTest, FrozenParametersReceiveNoGradient) {
  ParameterSet set;
  Rng rng(3);
  Parameter* a = RandomParam(&set, "a", 2, 2, &rng);
  Parameter* b = RandomParam(&set, "b", 2, 2, &rng);
  b->frozen = true;
  Graph g;
  g.Backward(SumAll(MatMul(g.Param(a), g.Param(b))));
  EXPECT_GT(a->grad.norm(), 0.0);
  EXPECT_EQ(b->grad.norm(), 0.0);
}

TEST(GraphTest, StopGradientBlocksFlow) {
  ParameterSet set;
  Rng rng(3);
  Parameter* a = RandomParam(&set, "a", 2, 2, &rng);
  Graph g;
  g.Backward(SumAll(StopGradient(Square(g.Param(a)))));
  EXPECT_EQ(a->grad.norm(), 0.0);
}

TEST(GraphTest, LstmStepMatchesSequence) {
  ParameterSet set;
  Rng rng(5);
  Lstm lstm(&set, "lstm", 3, 4, &rng);
  Matrix x(6, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  Graph g(false);
  Var full = lstm.Forward(g, g.Constant(x));
  LstmState s = lstm.ZeroState(g);
  for (int t = 0; t < 6; ++t) {
    s = lstm.Step(g, g.Constant(x.row(t)), s);
    EXPECT_LT((s.h.value() - full.value().row(t)).norm(), 1e-12);
  }
}

TEST(AdamTest, MinimisesQuadraticAndKeepsFloatWeights) {
  ParameterSet set;
  Parameter* p = set.Create("p", 1, 2);
  p->value << 3.0, -2.0;
  AdamOptions opt;
  opt.learning_rate = 0.1;
  opt.warmup_steps = 0;
  opt.decay_steps = 0;
  Adam adam(&set, opt);
  for (int i = 0; i < 500; ++i) {
    set.ZeroGrad();
    Graph g;
    g.Backward(SumAll(Square(g.Param(p))));
    adam.Step();
  }
  EXPECT_LT(p->value.norm(), 1e-2);
  for (Eigen::Index i = 0; i < p->value.size(); ++i) {
    double v = p->value.data()[i];
    EXPECT_EQ(v, static_cast<double>(static_cast<float>(v)));
  }
}

TEST(AdamTest, WarmupThenDecay) {
  ParameterSet set;
  AdamOptions opt;
  opt.learning_rate = 1.0;
  opt.warmup_steps = 10;
  opt.decay_rate = 0.5;
  opt.decay_steps = 20;
  Adam adam(&set, opt);
  EXPECT_DOUBLE_EQ(adam.LearningRate(5), 0.5);
  EXPECT_DOUBLE_EQ(adam.LearningRate(10), 1.0);
  EXPECT_DOUBLE_EQ(adam.LearningRate(30), 0.5);
}

}  // namespace
}  // namespace fgtts::nn
