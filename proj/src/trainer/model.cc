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

#include "fgtts/trainer/model.h"

#include <cmath>

#include "fgtts/common/error.h"
#include "fgtts/common/strings.h"

namespace fgtts::trainer {

Stage ParseStage(const std::string& name) {
  if (name == "stage1") return Stage::kStage1;
  if (name == "stage2") return Stage::kStage2;
  if (name == "joint_baseline") return Stage::kJointBaseline;
  if (name == "nat_plain") return Stage::kNatPlain;
  if (name == "nat_global") return Stage::kNatGlobal;
  throw ConfigError("unknown stage '" + name +
                    "' (expected stage1, stage2, joint_baseline, nat_plain or nat_global)");
}

std::string StageName(Stage stage) {
  switch (stage) {
    case Stage::kStage1: return "stage1";
    case Stage::kStage2: return "stage2";
    case Stage::kJointBaseline: return "joint_baseline";
    case Stage::kNatPlain: return "nat_plain";
    case Stage::kNatGlobal: return "nat_global";
  }
  return "?";
}

void ModelConfig::Validate() const {
  auto positive = [](int v, const char* key) {
    if (v <= 0) throw ConfigError(std::string(key) + " must be positive");
  };
  positive(vocab_size, "model.vocab_size");
  positive(n_mels, "model.n_mels");
  positive(d_emb, "model.d_emb");
  positive(d_h, "model.d_h");
  positive(text_conv_kernel, "model.text_conv_kernel");
  positive(prenet_dim, "model.prenet_dim");
  positive(decoder_hidden, "model.decoder_hidden");
  if (d_h % 2) throw ConfigError("model.d_h must be even");
  if (text_conv_kernel % 2 == 0) throw ConfigError("model.text_conv_kernel must be odd");
  if (text_conv_layers < 0) throw ConfigError("model.text_conv_layers must be >= 0");
  if (has_latent()) {
    positive(d_z, "model.d_z");
    positive(d_att, "model.d_att");
    positive(posterior_hidden, "model.posterior_hidden");
    if (loc_kernel <= 0 || loc_kernel % 2 == 0) {
      throw ConfigError("model.loc_kernel must be odd and positive");
    }
  } else if (d_z != 0) {
    throw ConfigError("model.d_z must be 0 for " + StageName(stage));
  }
  if (has_reference()) {
    positive(d_g, "model.d_g");
    positive(ref_channels, "model.ref_channels");
    positive(ref_hidden, "model.ref_hidden");
  }
  if (has_prior()) positive(prior_hidden, "model.prior_hidden");
  if (has_duration_predictor()) positive(duration_hidden, "model.duration_hidden");
  if (duration_floor < 0) throw ConfigError("model.duration_floor must be >= 0");
  if (prenet_dropout < 0.0 || prenet_dropout >= 1.0) {
    throw ConfigError("model.prenet_dropout must lie in [0, 1)");
  }
}

ModelConfig ModelConfig::FromConfig(const Config& c) {
  ModelConfig m;
  m.stage = ParseStage(c.GetString("train.stage"));
  m.vocab_size = c.GetInt("model.vocab_size");
  m.n_mels = c.GetInt("features.n_mels");
  m.d_emb = c.GetInt("model.d_emb");
  m.d_h = c.GetInt("model.d_h");
  m.text_conv_layers = c.GetInt("model.text_conv_layers");
  m.text_conv_kernel = c.GetInt("model.text_conv_kernel");
  m.d_z = c.GetInt("model.d_z");
  m.d_att = c.GetInt("model.d_att");
  m.loc_kernel = c.GetInt("model.loc_kernel");
  m.posterior_hidden = c.GetInt("model.posterior_hidden");
  m.prenet_dim = c.GetInt("model.prenet_dim");
  m.decoder_hidden = c.GetInt("model.decoder_hidden");
  m.prenet_dropout = c.GetDouble("model.prenet_dropout");
  m.d_g = c.GetInt("model.d_g");
  m.ref_channels = c.GetInt("model.ref_channels");
  m.ref_hidden = c.GetInt("model.ref_hidden");
  m.prior_hidden = c.GetInt("model.prior_hidden");
  m.prior_include_current_h = c.GetBool("model.prior_include_current_h");
  m.prior_sampled_teacher = c.GetBool("model.prior_sampled_teacher");
  m.duration_hidden = c.GetInt("model.duration_hidden");
  m.duration_floor = c.GetInt("model.duration_floor");
  m.Validate();
  return m;
}

void ModelConfig::ToConfig(Config* c) const {
  c->Set("train.stage", StageName(stage));
  c->Set("model.vocab_size", std::to_string(vocab_size));
  c->Set("features.n_mels", std::to_string(n_mels));
  c->Set("model.d_emb", std::to_string(d_emb));
  c->Set("model.d_h", std::to_string(d_h));
  c->Set("model.text_conv_layers", std::to_string(text_conv_layers));
  c->Set("model.text_conv_kernel", std::to_string(text_conv_kernel));
  c->Set("model.d_z", std::to_string(d_z));
  c->Set("model.d_att", std::to_string(d_att));
  c->Set("model.loc_kernel", std::to_string(loc_kernel));
  c->Set("model.posterior_hidden", std::to_string(posterior_hidden));
  c->Set("model.prenet_dim", std::to_string(prenet_dim));
  c->Set("model.decoder_hidden", std::to_string(decoder_hidden));
  c->Set("model.prenet_dropout", FormatDouble(prenet_dropout));
  c->Set("model.d_g", std::to_string(d_g));
  c->Set("model.ref_channels", std::to_string(ref_channels));
  c->Set("model.ref_hidden", std::to_string(ref_hidden));
  c->Set("model.prior_hidden", std::to_string(prior_hidden));
  c->Set("model.prior_include_current_h", prior_include_current_h ? "true" : "false");
  c->Set("model.prior_sampled_teacher", prior_sampled_teacher ? "true" : "false");
  c->Set("model.duration_hidden", std::to_string(duration_hidden));
  c->Set("model.duration_floor", std::to_string(duration_floor));
}

const std::vector<std::string>& Stage1Prefixes() {
  static const std::vector<std::string> prefixes{"norm.", "text.", "att.", "post.", "dec."};
  return prefixes;
}

TtsModel::TtsModel(const ModelConfig& config, uint64_t seed) : config_(config) {
  config_.Validate();
  // Each component draws from its own stream so that adding a component
  // does not change the initialisation of the others.
  Rng root(seed);
  auto stream = [&](const char* name) { return root.Derive(std::string("init.") + name); };
  const ModelConfig& c = config_;
  norm_ = acoustic::FeatureNorm(&params_, "norm", c.n_mels);
  Rng r = stream("text");
  text_ = acoustic::TextEncoder(&params_, "text", c.vocab_size, c.d_emb, c.d_h,
                                c.text_conv_layers, c.text_conv_kernel, &r);
  const int dz = c.effective_d_z();
  const int dg = c.effective_d_g();
  if (c.has_latent()) {
    r = stream("att");
    attention_ = acoustic::LocationAttention(&params_, "att", c.d_h, c.n_mels, c.d_att,
                                             c.loc_kernel, &r);
    r = stream("post");
    const int post_in = c.n_mels + (c.stage == Stage::kJointBaseline ? dg : 0);
    posterior_ = acoustic::PosteriorEncoder(&params_, "post", post_in, c.posterior_hidden,
                                            dz, &r);
  }
  r = stream("dec");
  const int d_u = c.d_h + dz + (c.stage == Stage::kNatGlobal ? dg : 0);
  decoder_ = acoustic::Decoder(&params_, "dec", d_u, c.n_mels, c.prenet_dim,
                               c.decoder_hidden, c.prenet_dropout, &r);
  if (c.has_reference()) {
    r = stream("ref");
    reference_ = prior::ReferenceEncoder(&params_, "ref", c.n_mels, c.ref_channels,
                                         c.ref_hidden, dg, &r);
  }
  if (c.has_prior()) {
    r = stream("prior");
    prior_ = prior::ArPrior(&params_, "prior", dz, c.d_h, dg, c.prior_hidden,
                            c.prior_include_current_h, &r);
  }
  if (c.has_duration_predictor()) {
    r = stream("dur");
    duration_ = acoustic::DurationPredictor(&params_, "dur", c.d_h + dg, c.duration_hidden,
                                            &r);
  }
}

Var TtsModel::EncodeText(Graph& g, const std::vector<int>& ids) const {
  return text_.Forward(g, ids);
}

Var TtsModel::EncodeReference(Graph& g, const Matrix& frames_norm) const {
  if (!config_.has_reference()) throw StageMismatch(StageName(config_.stage) +
                                                    " has no reference encoder");
  return reference_.Forward(g, frames_norm);
}

acoustic::Alignment TtsModel::Align(Graph& g, Var h, Var frames_norm, bool uniform) const {
  return attention_.Forward(g, h, frames_norm, uniform);
}

acoustic::Posterior TtsModel::PosteriorOf(Graph& g, Var aligned, Var gvec) const {
  if (config_.stage == Stage::kJointBaseline) {
    aligned = nn::ConcatCols({aligned, nn::BroadcastRows(gvec, aligned.rows())});
  }
  return posterior_.Forward(g, aligned);
}

Var TtsModel::TokenConditioning(Graph&, Var h, Var z, Var gvec) const {
  std::vector<Var> parts{h};
  if (config_.has_latent()) parts.push_back(z);
  if (config_.stage == Stage::kNatGlobal) parts.push_back(nn::BroadcastRows(gvec, h.rows()));
  return parts.size() == 1 ? h : nn::ConcatCols(parts);
}

Var TtsModel::DecodeTeacherForced(Graph& g, Var u, const Matrix& teacher_norm,
                                  Rng* dropout_rng) const {
  return decoder_.TeacherForced(g, u, teacher_norm, dropout_rng);
}

Var TtsModel::DecodeFreeRunning(Graph& g, Var u) const { return decoder_.FreeRunning(g, u); }

prior::PriorParams TtsModel::Prior(Graph& g, Var h, Var gvec, Var z_ext) const {
  if (!config_.has_prior()) throw StageMismatch(StageName(config_.stage) + " has no prior");
  return prior_.Forward(g, h, gvec, z_ext);
}

Var TtsModel::Durations(Graph& g, Var h, Var gvec) const {
  if (!config_.has_duration_predictor()) {
    throw StageMismatch(StageName(config_.stage) + " has no duration predictor");
  }
  Var x = config_.stage == Stage::kNatGlobal
              ? nn::ConcatCols({h, nn::BroadcastRows(gvec, h.rows())})
              : h;
  return duration_.Forward(g, x);
}

RowVector TtsModel::ReferenceEmbedding(const Matrix& frames) const {
  if (!config_.has_reference()) return RowVector();
  Graph g(false);
  return EncodeReference(g, norm_.Normalize(frames)).value();
}

Matrix TtsModel::PosteriorMeans(const corpus::UtteranceRecord& rec) const {
  if (!config_.has_latent()) return Matrix(rec.num_tokens(), 0);
  Graph g(false);
  Matrix y = norm_.Normalize(rec.mel.frames);
  Var h = EncodeText(g, rec.token_ids);
  Var gvec = config_.has_reference() ? EncodeReference(g, y) : Var();
  Var frames = g.Constant(y);
  return PosteriorOf(g, Align(g, h, frames).aligned, gvec).mu.value();
}

Synthesis TtsModel::CopySynthesize(const corpus::UtteranceRecord& rec, double temperature,
                                   Rng* rng) const {
  if (!rec.durations) throw MissingDurations(rec.utt_id);
  Graph g(false);
  Matrix y = norm_.Normalize(rec.mel.frames);
  Var h = EncodeText(g, rec.token_ids);
  Var gvec = config_.has_reference() ? EncodeReference(g, y) : Var();
  Var z;
  Synthesis out;
  if (config_.has_latent()) {
    Var frames = g.Constant(y);
    acoustic::Posterior post = PosteriorOf(g, Align(g, h, frames).aligned, gvec);
    Matrix noise = Matrix::Zero(post.mu.rows(), post.mu.cols());
    if (temperature > 0.0) {
      for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = temperature * rng->Normal();
    }
    z = acoustic::Reparameterize(g, post, noise);
    out.latents = z.value();
  }
  Var u = acoustic::Upsample(TokenConditioning(g, h, z, gvec), *rec.durations);
  out.frames = norm_.Denormalize(DecodeFreeRunning(g, u).value());
  out.durations = *rec.durations;
  return out;
}

Synthesis TtsModel::SynthesizeFromText(const std::vector<int>& token_ids,
                                       const Matrix* reference, double temperature,
                                       Rng* rng,
                                       const std::vector<int>* forced_durations) const {
  if (config_.stage == Stage::kStage1) {
    throw StageMismatch("a stage1 checkpoint has no prior; train stage2 first");
  }
  if (config_.has_reference() && reference == nullptr) {
    throw UsageError(StageName(config_.stage) + " needs a reference");
  }
  Graph g(false);
  Var h = EncodeText(g, token_ids);
  Var gvec;
  Matrix gmat;
  if (config_.has_reference()) {
    gvec = EncodeReference(g, norm_.Normalize(*reference));
    gmat = gvec.value();
  }
  Synthesis out;
  Var z;
  if (config_.has_prior()) {
    prior::PriorSample s = prior_.Sample(h.value(), config_.has_reference() ? &gmat : nullptr,
                                         temperature, rng, config_.duration_floor,
                                         forced_durations);
    z = g.Constant(s.z);
    out.latents = s.z;
    out.durations = s.durations;
  } else if (forced_durations != nullptr) {
    if (forced_durations->size() != token_ids.size()) {
      throw ShapeMismatch("forced durations do not match the token count");
    }
    out.durations = *forced_durations;
  } else {
    const Matrix v = Durations(g, h, gvec).value();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      out.durations.push_back(prior::DecodeDuration(v(i, 0), config_.duration_floor));
    }
  }
  Var u = acoustic::Upsample(TokenConditioning(g, h, z, gvec), out.durations);
  out.frames = norm_.Denormalize(DecodeFreeRunning(g, u).value());
  return out;
}

}  // namespace fgtts::trainer
