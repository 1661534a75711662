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

#include "fgtts/trainer/train_config.h"

#include "fgtts/common/error.h"
#include "fgtts/corpus/synthetic.h"

namespace fgtts::trainer {

Config DefaultConfig() {
  Config c;
  corpus::SyntheticSpecToConfig(corpus::SyntheticCorpusSpec{}, &c);
  c.Set("text.mode", "whitespace");
  c.Set("text.add_bos", "false");
  c.Set("text.add_eos", "false");
  c.Set("text.allow_unknown", "false");

  c.Set("model.vocab_size", "0");  // 0: one past the largest id in the corpus
  c.Set("model.d_emb", "32");
  c.Set("model.d_h", "32");
  c.Set("model.text_conv_layers", "1");
  c.Set("model.text_conv_kernel", "5");
  c.Set("model.d_z", "8");
  c.Set("model.d_att", "32");
  c.Set("model.loc_kernel", "15");
  c.Set("model.posterior_hidden", "64");
  c.Set("model.prenet_dim", "32");
  c.Set("model.decoder_hidden", "64");
  c.Set("model.prenet_dropout", "0.5");
  c.Set("model.d_g", "16");
  c.Set("model.ref_channels", "16");
  c.Set("model.ref_hidden", "16");
  c.Set("model.prior_hidden", "64");
  c.Set("model.prior_include_current_h", "false");
  c.Set("model.prior_sampled_teacher", "false");
  c.Set("model.duration_hidden", "32");
  c.Set("model.duration_floor", "1");

  c.Set("train.stage", "stage1");
  c.Set("train.seed", "1");
  c.Set("train.steps", "1000");
  c.Set("train.batch_size", "16");
  c.Set("train.bucket_batches", "4");
  c.Set("train.learning_rate", "0.002");
  c.Set("train.warmup_steps", "100");
  c.Set("train.decay_rate", "0.5");
  c.Set("train.decay_steps", "1000");
  c.Set("train.clip_norm", "1.0");
  c.Set("train.kl_weight", "0.005");
  c.Set("train.kl_warmup_steps", "400");
  c.Set("train.heldout_fraction", "0.1");
  c.Set("train.eval_every", "200");
  c.Set("train.eval_mcd_utterances", "4");
  c.Set("train.log_every", "50");
  c.Set("train.joint_prior_weight", "1.0");
  c.Set("train.stage1_checkpoint", "");
  c.Set("train.keep_best", "false");

  c.Set("eval.seed", "7");
  c.Set("eval.posterior_temperature", "1.0");
  c.Set("eval.prior_temperature", "1.0");
  c.Set("eval.max_utterances", "0");  // 0: whole split
  c.Set("eval.references", "15");
  c.Set("eval.sentences_per_reference", "14");
  c.Set("eval.probe_folds", "5");
  c.Set("eval.probe_l2", "0.01");
  c.Set("eval.hypotheses", "");
  c.Set("eval.embeddings", "");
  return c;
}

Config ResolveConfig(const std::string& path, const std::vector<std::string>& overrides) {
  Config schema = DefaultConfig();
  Config c = schema;
  if (!path.empty()) {
    Config file = Config::FromFile(path);
    file.RejectUnknown(schema);
    c.Merge(file);
  }
  c.ApplyEnvironment();
  Config over;
  over.ApplyOverrides(overrides);
  over.RejectUnknown(schema);
  c.Merge(over);
  return c;
}

TrainOptions TrainOptions::FromConfig(const Config& c) {
  TrainOptions o;
  o.steps = c.GetInt("train.steps");
  o.batch_size = c.GetInt("train.batch_size");
  o.bucket_batches = c.GetInt("train.bucket_batches");
  o.seed = static_cast<uint64_t>(c.GetInt("train.seed"));
  o.kl_weight = c.GetDouble("train.kl_weight");
  o.kl_warmup_steps = c.GetInt("train.kl_warmup_steps");
  o.heldout_fraction = c.GetDouble("train.heldout_fraction");
  o.eval_every = c.GetInt("train.eval_every");
  o.eval_mcd_utterances = c.GetInt("train.eval_mcd_utterances");
  o.log_every = c.GetInt("train.log_every");
  o.joint_prior_weight = c.GetDouble("train.joint_prior_weight");
  o.stage1_checkpoint = c.GetString("train.stage1_checkpoint");
  o.keep_best = c.GetBool("train.keep_best");
  o.adam.learning_rate = c.GetDouble("train.learning_rate");
  o.adam.warmup_steps = c.GetInt("train.warmup_steps");
  o.adam.decay_rate = c.GetDouble("train.decay_rate");
  o.adam.decay_steps = c.GetInt("train.decay_steps");
  o.adam.clip_norm = c.GetDouble("train.clip_norm");
  if (o.steps < 0) throw ConfigError("train.steps must be >= 0");
  if (o.batch_size < 1) throw ConfigError("train.batch_size must be positive");
  if (o.bucket_batches < 1) throw ConfigError("train.bucket_batches must be positive");
  if (o.heldout_fraction < 0.0 || o.heldout_fraction >= 1.0) {
    throw ConfigError("train.heldout_fraction must lie in [0, 1)");
  }
  if (o.kl_weight < 0.0) throw ConfigError("train.kl_weight must be >= 0");
  if (o.adam.learning_rate <= 0.0) throw ConfigError("train.learning_rate must be positive");
  if (o.eval_every < 1) throw ConfigError("train.eval_every must be positive");
  return o;
}

}  // namespace fgtts::trainer
