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

#include "fgtts/trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <spdlog/spdlog.h>

#include "fgtts/common/error.h"
#include "fgtts/evalkit/metrics.h"
#include "fgtts/nn/adam.h"

namespace fgtts::trainer {

namespace {

using corpus::CorpusManifest;
using corpus::UtteranceRecord;

Matrix Noise(Eigen::Index rows, Eigen::Index cols, Rng* rng) {
  Matrix m = Matrix::Zero(rows, cols);
  if (rng != nullptr) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng->Normal();
  }
  return m;
}

void RequireDurations(const CorpusManifest& corpus) {
  if (corpus.utterances.empty()) throw InvalidInput("empty corpus");
  for (const auto& u : corpus.utterances) {
    if (!u.durations) throw MissingDurations(u.utt_id);
  }
}

int InferVocab(const CorpusManifest& corpus) {
  int v = 0;
  for (const auto& u : corpus.utterances) {
    for (int id : u.token_ids) v = std::max(v, id + 1);
  }
  return std::max(v, 4);
}

Config WithVocab(Config config, const CorpusManifest& corpus) {
  if (config.GetInt("model.vocab_size") == 0) {
    config.Set("model.vocab_size", std::to_string(InferVocab(corpus)));
  }
  return config;
}

// Buckets of similar length, shuffled per epoch.
class BatchSampler {
 public:
  BatchSampler(const CorpusManifest& corpus, std::vector<int> indices, int batch_size,
               int bucket_batches, Rng rng)
      : corpus_(corpus),
        indices_(std::move(indices)),
        batch_size_(batch_size),
        bucket_(batch_size * bucket_batches),
        rng_(rng) {}

  std::vector<int> Next() {
    if (cursor_ >= batches_.size()) Refill();
    return batches_[cursor_++];
  }

 private:
  void Refill() {
    std::vector<int> order = indices_;
    rng_.Shuffle(&order);
    batches_.clear();
    cursor_ = 0;
    for (size_t b = 0; b < order.size(); b += bucket_) {
      auto end = order.begin() + std::min(order.size(), b + bucket_);
      std::vector<int> group(order.begin() + b, end);
      std::stable_sort(group.begin(), group.end(), [&](int x, int y) {
        return corpus_.utterances[x].num_frames() < corpus_.utterances[y].num_frames();
      });
      for (size_t i = 0; i < group.size(); i += batch_size_) {
        batches_.emplace_back(group.begin() + i,
                              group.begin() + std::min(group.size(), i + batch_size_));
      }
    }
    rng_.Shuffle(&batches_);
  }

  const CorpusManifest& corpus_;
  std::vector<int> indices_;
  size_t batch_size_;
  size_t bucket_;
  Rng rng_;
  std::vector<std::vector<int>> batches_;
  size_t cursor_ = 0;
};

struct StepValues {
  double total = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
  double prior_kl = 0.0;
  double duration = 0.0;
};

// Frozen stage-1 quantities for stage-2 training.
struct Stage1Cache {
  Matrix h;
  Matrix mu;
  Matrix log_sigma;
  Matrix y_norm;
};

class Runner {
 public:
  Runner(const Config& config, const CorpusManifest& corpus, TtsModel* model)
      : config_(config),
        corpus_(corpus),
        model_(model),
        opts_(TrainOptions::FromConfig(config)),
        split_(SplitCorpus(corpus, opts_.heldout_fraction, opts_.seed)) {}

  void UseStage1Cache() {
    cache_.resize(corpus_.utterances.size());
    for (size_t i = 0; i < corpus_.utterances.size(); ++i) {
      const UtteranceRecord& rec = corpus_.utterances[i];
      Graph g(false);
      Stage1Cache& c = cache_[i];
      c.y_norm = model_->norm().Normalize(rec.mel.frames);
      Var h = model_->EncodeText(g, rec.token_ids);
      acoustic::Posterior post =
          model_->PosteriorOf(g, model_->Align(g, h, g.Constant(c.y_norm)).aligned, Var());
      c.h = h.value();
      c.mu = post.mu.value();
      c.log_sigma = post.log_sigma.value();
    }
  }

  TrainResult Run(const std::string& stage_tag) {
    nn::Adam adam(&model_->params(), opts_.adam);
    Rng root(opts_.seed);
    BatchSampler sampler(corpus_, split_.train, opts_.batch_size, opts_.bucket_batches,
                         root.Derive("batches"));
    Rng noise = root.Derive("noise");
    Rng dropout = root.Derive("dropout");
    std::vector<MetricRecord> metrics;
    double best = Evaluate(0, &metrics);
    int best_step = 0;
    std::vector<Matrix> best_values;
    if (opts_.keep_best) best_values = Snapshot();
    StepValues window;
    int window_steps = 0;
    for (int step = 1; step <= opts_.steps; ++step) {
      model_->params().ZeroGrad();
      const double beta = acoustic::KlWeight(step, opts_.kl_weight, opts_.kl_warmup_steps);
      StepValues v = Batch(sampler.Next(), beta, &noise, &dropout, true);
      adam.Step();
      window.total += v.total;
      window.reconstruction += v.reconstruction;
      window.kl += v.kl;
      window.prior_kl += v.prior_kl;
      window.duration += v.duration;
      ++window_steps;
      if (opts_.log_every > 0 && step % opts_.log_every == 0) {
        spdlog::info("{} step {}: total {:.4f} rec {:.4f} kl {:.4f} prior_kl {:.4f} dur {:.4f}",
                     stage_tag, step, v.total, v.reconstruction, v.kl, v.prior_kl, v.duration);
      }
      if (step % opts_.eval_every == 0 || step == opts_.steps) {
        const double n = window_steps;
        metrics.push_back({step, "train.total", window.total / n});
        metrics.push_back({step, "train.reconstruction", window.reconstruction / n});
        if (model_->config().has_latent()) metrics.push_back({step, "train.kl", window.kl / n});
        if (model_->config().has_prior()) {
          metrics.push_back({step, "train.prior_kl", window.prior_kl / n});
        }
        if (model_->config().has_duration_predictor()) {
          metrics.push_back({step, "train.duration", window.duration / n});
        }
        window = StepValues{};
        window_steps = 0;
        const double value = Evaluate(step, &metrics);
        if (opts_.keep_best && value < best) {
          best = value;
          best_step = step;
          best_values = Snapshot();
        }
      }
    }
    int final_step = opts_.steps;
    if (opts_.keep_best && !split_.heldout.empty()) {
      const auto& all = model_->params().all();
      for (size_t i = 0; i < all.size(); ++i) all[i]->value = best_values[i];
      final_step = best_step;
      spdlog::info("{}: keeping step {} (heldout {:.6f})", stage_tag, best_step, best);
    }
    TrainResult r;
    r.checkpoint = Checkpoint::FromParameters(model_->params(), stage_tag, final_step, config_);
    r.checkpoint.metrics = std::move(metrics);
    r.split = split_;
    return r;
  }

 private:
  StepValues Batch(const std::vector<int>& batch, double beta, Rng* noise, Rng* dropout,
                   bool backward) {
    const bool stage2 = model_->config().stage == Stage::kStage2;
    double elements = 0.0, tokens = 0.0;
    for (int i : batch) {
      elements += static_cast<double>(corpus_.utterances[i].mel.frames.size());
      tokens += corpus_.utterances[i].num_tokens();
    }
    StepValues v;
    for (int i : batch) {
      Graph g(backward);
      if (stage2) {
        Var kl = Stage2Loss(g, i);
        Var total = nn::Scale(kl, opts_.joint_prior_weight / tokens);
        if (backward) g.Backward(total);
        v.prior_kl += kl.scalar() / tokens;
        v.total += total.scalar();
        continue;
      }
      UtteranceLoss loss = ComputeUtteranceLoss(*model_, g, corpus_.utterances[i], noise, dropout);
      Var total = CombineLoss(*model_, loss, beta, opts_.joint_prior_weight, elements, tokens);
      if (backward) g.Backward(total);
      v.total += total.scalar();
      v.reconstruction += loss.reconstruction.scalar() / elements;
      if (loss.kl.valid()) v.kl += loss.kl.scalar() / tokens;
      if (loss.prior_kl.valid()) v.prior_kl += loss.prior_kl.scalar() / tokens;
      if (loss.duration.valid()) v.duration += loss.duration.scalar() / tokens;
    }
    return v;
  }

  Var Stage2Loss(Graph& g, int index) {
    const Stage1Cache& c = cache_[index];
    const UtteranceRecord& rec = corpus_.utterances[index];
    Var gvec = model_->EncodeReference(g, c.y_norm);
    Var z_ext = g.Constant(prior::ExtendedTeacher(c.mu, *rec.durations));
    prior::PriorParams p = model_->Prior(g, g.Constant(c.h), gvec, z_ext);
    return prior::Stage2KlSum(g, g.Constant(c.mu), g.Constant(c.log_sigma), *rec.durations, p);
  }

  std::vector<Matrix> Snapshot() const {
    std::vector<Matrix> out;
    for (const auto& p : model_->params().all()) out.push_back(p->value);
    return out;
  }

  // Returns the selection loss: held-out prior KL in stage 2, held-out total
  // otherwise.
  double Evaluate(int step, std::vector<MetricRecord>* metrics) {
    if (split_.heldout.empty()) return 0.0;
    const double beta = opts_.kl_weight;
    StepValues v = Batch(split_.heldout, beta, nullptr, nullptr, false);
    const ModelConfig& mc = model_->config();
    if (mc.stage == Stage::kStage2) {
      metrics->push_back({step, "heldout.prior_kl", v.prior_kl});
    } else {
      metrics->push_back({step, "heldout.total", v.total});
      metrics->push_back({step, "heldout.reconstruction", v.reconstruction});
      if (mc.has_latent()) metrics->push_back({step, "heldout.kl", v.kl});
      if (mc.has_prior()) metrics->push_back({step, "heldout.prior_kl", v.prior_kl});
      if (mc.has_duration_predictor()) metrics->push_back({step, "heldout.duration", v.duration});
      const int k = std::min<int>(opts_.eval_mcd_utterances, split_.heldout.size());
      if (k > 0) {
        double mcd = 0.0;
        for (int j = 0; j < k; ++j) {
          const UtteranceRecord& rec = corpus_.utterances[split_.heldout[j]];
          Synthesis s = model_->CopySynthesize(rec, 0.0, nullptr);
          mcd += eval::McdFromMel(rec.mel.frames, s.frames);
        }
        metrics->push_back({step, "heldout.mcd", mcd / k});
      }
    }
    spdlog::info("eval step {}: {}", step, [&] {
      std::string s;
      for (const auto& m : *metrics) {
        if (m.step == step && m.name.rfind("heldout.", 0) == 0) {
          s += m.name + "=" + std::to_string(m.value) + " ";
        }
      }
      return s;
    }());
    return mc.stage == Stage::kStage2 ? v.prior_kl : v.total;
  }

  Config config_;
  const CorpusManifest& corpus_;
  TtsModel* model_;
  TrainOptions opts_;
  CorpusSplit split_;
  std::vector<Stage1Cache> cache_;
};

}  // namespace

CorpusSplit SplitCorpus(const CorpusManifest& corpus, double heldout_fraction, uint64_t seed) {
  const int n = static_cast<int>(corpus.utterances.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng(seed).Derive("split");
  rng.Shuffle(&order);
  int heldout = static_cast<int>(std::floor(heldout_fraction * n));
  heldout = std::min(heldout, n - 1);
  CorpusSplit s;
  s.heldout.assign(order.begin(), order.begin() + std::max(heldout, 0));
  s.train.assign(order.begin() + std::max(heldout, 0), order.end());
  std::sort(s.heldout.begin(), s.heldout.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

UtteranceLoss ComputeUtteranceLoss(const TtsModel& model, Graph& g,
                                   const UtteranceRecord& rec, Rng* noise_rng,
                                   Rng* dropout_rng) {
  if (!rec.durations) throw MissingDurations(rec.utt_id);
  const ModelConfig& mc = model.config();
  UtteranceLoss out;
  out.elements = static_cast<int>(rec.mel.frames.size());
  out.tokens = rec.num_tokens();
  const std::vector<int>& d = *rec.durations;
  Matrix y = model.norm().Normalize(rec.mel.frames);
  Var h = model.EncodeText(g, rec.token_ids);
  Var gvec = mc.has_reference() ? model.EncodeReference(g, y) : Var();
  Var z;
  if (mc.has_latent()) {
    acoustic::Posterior post;
    if (mc.stage == Stage::kStage2) {
      // Stage-1 networks are frozen; only the prior terms train.
      post = model.PosteriorOf(g, model.Align(g, h, g.Constant(y)).aligned, Var());
    } else {
      post = model.PosteriorOf(g, model.Align(g, h, g.Constant(y)).aligned, gvec);
      out.kl = acoustic::StandardNormalKlSum(g, post);
      z = acoustic::Reparameterize(g, post, Noise(post.mu.rows(), post.mu.cols(), noise_rng));
    }
    if (mc.has_prior()) {
      // The reference encoder learns from the prior only in stage 2; the
      // joint baseline's prior is fitted alongside without shaping g.
      Var hs = nn::StopGradient(h);
      Var gs = mc.stage == Stage::kStage2 ? gvec : nn::StopGradient(gvec);
      Var mu = nn::StopGradient(post.mu);
      Matrix teacher = mu.value();
      if (mc.prior_sampled_teacher && noise_rng != nullptr) {
        Matrix eps = Noise(teacher.rows(), teacher.cols(), noise_rng);
        teacher += post.log_sigma.value().array().exp().matrix().cwiseProduct(eps);
      }
      Var z_ext = g.Constant(prior::ExtendedTeacher(teacher, d));
      prior::PriorParams p = model.Prior(g, hs, gs, z_ext);
      out.prior_kl = prior::Stage2KlSum(g, mu, nn::StopGradient(post.log_sigma), d, p);
    }
  }
  if (mc.stage != Stage::kStage2) {
    Var u = acoustic::Upsample(model.TokenConditioning(g, h, z, gvec), d);
    Var pred = model.DecodeTeacherForced(g, u, y, dropout_rng);
    out.reconstruction = acoustic::L1Sum(g, pred, y, model.norm().stddev());
  }
  if (mc.has_duration_predictor()) {
    Matrix target(out.tokens, 1);
    for (int i = 0; i < out.tokens; ++i) target(i, 0) = prior::EncodeDuration(d[i]);
    Var err = nn::Sub(model.Durations(g, h, gvec), g.Constant(std::move(target)));
    out.duration = nn::SumAll(nn::Square(err));
  }
  return out;
}

Var CombineLoss(const TtsModel& model, const UtteranceLoss& loss, double kl_weight,
                double prior_weight, double total_elements, double total_tokens) {
  std::vector<Var> terms;
  if (loss.reconstruction.valid()) terms.push_back(nn::Scale(loss.reconstruction, 1.0 / total_elements));
  if (loss.kl.valid()) terms.push_back(nn::Scale(loss.kl, kl_weight / total_tokens));
  if (loss.prior_kl.valid()) terms.push_back(nn::Scale(loss.prior_kl, prior_weight / total_tokens));
  if (loss.duration.valid()) terms.push_back(nn::Scale(loss.duration, 1.0 / total_tokens));
  if (terms.empty()) throw Error("no loss terms for stage " + StageName(model.config().stage));
  Var total = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) total = nn::Add(total, terms[i]);
  return total;
}

const std::vector<std::string>& Stage1DimensionKeys() {
  static const std::vector<std::string> keys{
      "features.n_mels",       "model.vocab_size",      "model.d_emb",
      "model.d_h",             "model.text_conv_layers", "model.text_conv_kernel",
      "model.d_z",             "model.d_att",           "model.loc_kernel",
      "model.posterior_hidden", "model.prenet_dim",     "model.decoder_hidden"};
  return keys;
}

std::unique_ptr<TtsModel> ModelFromCheckpoint(const Checkpoint& ckpt) {
  ModelConfig mc;
  try {
    Config c = ckpt.config;
    c.Set("train.stage", ckpt.stage);
    mc = ModelConfig::FromConfig(c);
  } catch (const ConfigError& e) {
    throw CorruptCheckpoint(std::string("config snapshot: ") + e.what());
  }
  auto model = std::make_unique<TtsModel>(mc, 0);
  ckpt.LoadInto(&model->params());
  return model;
}

TrainResult TrainStage2(const Config& config_in, const CorpusManifest& corpus,
                        const Checkpoint& stage1) {
  if (stage1.stage != "stage1") {
    throw StageMismatch("stage2 needs a stage1 checkpoint, got '" + stage1.stage + "'");
  }
  RequireDurations(corpus);
  Config config = config_in;
  if (config.GetInt("model.vocab_size") == 0 && stage1.config.Has("model.vocab_size")) {
    config.Set("model.vocab_size", stage1.config.GetString("model.vocab_size"));
  }
  for (const auto& key : Stage1DimensionKeys()) {
    if (!stage1.config.Has(key)) throw CorruptCheckpoint("stage-1 config lacks " + key);
    if (stage1.config.GetString(key) != config.GetString(key)) {
      throw DimMismatch(key + " is " + stage1.config.GetString(key) +
                        " in the stage-1 checkpoint but " + config.GetString(key) +
                        " in this run");
    }
  }
  ModelConfig mc = ModelConfig::FromConfig(config);
  auto model = std::make_unique<TtsModel>(mc, static_cast<uint64_t>(config.GetInt("train.seed")));
  stage1.LoadInto(&model->params(), Stage1Prefixes());
  for (const auto& p : Stage1Prefixes()) model->params().SetFrozen(p, true);
  const uint64_t before = TensorHash(model->params(), Stage1Prefixes());
  Runner runner(config, corpus, model.get());
  runner.UseStage1Cache();
  TrainResult r = runner.Run("stage2");
  if (TensorHash(model->params(), Stage1Prefixes()) != before) {
    throw Error("stage-1 tensors changed during stage-2 training");
  }
  r.model = std::move(model);
  return r;
}

TrainResult Train(const Config& config_in, const CorpusManifest& corpus) {
  Stage stage = ParseStage(config_in.GetString("train.stage"));
  if (stage == Stage::kStage2) {
    const std::string path = config_in.GetString("train.stage1_checkpoint");
    if (path.empty()) throw ConfigError("stage2 requires train.stage1_checkpoint");
    return TrainStage2(config_in, corpus, LoadCheckpoint(path, {"stage1"}));
  }
  RequireDurations(corpus);
  Config config = WithVocab(config_in, corpus);
  if (stage == Stage::kNatPlain || stage == Stage::kNatGlobal) config.Set("model.d_z", "0");
  ModelConfig mc = ModelConfig::FromConfig(config);
  auto model = std::make_unique<TtsModel>(mc, static_cast<uint64_t>(config.GetInt("train.seed")));
  std::vector<const Matrix*> frames;
  CorpusSplit split = SplitCorpus(corpus, config.GetDouble("train.heldout_fraction"),
                                  static_cast<uint64_t>(config.GetInt("train.seed")));
  for (int i : split.train) frames.push_back(&corpus.utterances[i].mel.frames);
  model->norm().Fit(frames);
  Runner runner(config, corpus, model.get());
  TrainResult r = runner.Run(StageName(stage));
  r.model = std::move(model);
  return r;
}

}  // namespace fgtts::trainer
