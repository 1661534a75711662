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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "fgtts/common/config.h"
#include "fgtts/common/error.h"
#include "fgtts/common/feature_io.h"
#include "fgtts/common/random.h"
#include "fgtts/common/strings.h"
#include "fgtts/corpus/manifest.h"
#include "fgtts/corpus/mel.h"
#include "fgtts/corpus/pitch.h"
#include "fgtts/corpus/synthetic.h"
#include "fgtts/corpus/wav.h"
#include "fgtts/evalkit/metrics.h"
#include "fgtts/evalkit/probe.h"
#include "fgtts/evalkit/protocols.h"
#include "fgtts/text_frontend/inventory.h"
#include "fgtts/trainer/checkpoint.h"
#include "fgtts/trainer/train_config.h"
#include "fgtts/trainer/trainer.h"

namespace fgtts::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSnapshotName = "config.txt";
constexpr const char* kInventoryName = "inventory.tsv";
constexpr const char* kCheckpointDir = "checkpoint";

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
};

void AddCommon(CLI::App* app, Common* c, bool needs_out = true) {
  app->add_option("-c,--config", c->config_path, "config file of dotted key = value lines");
  app->add_option("-s,--set", c->overrides, "override, key=value (repeatable)");
  auto* out = app->add_option("-o,--out", c->out, "output directory");
  if (needs_out) out->required();
}

Config Resolve(const Common& c) { return trainer::ResolveConfig(c.config_path, c.overrides); }

void PrepareOut(const std::string& dir, const Config& config) {
  fs::create_directories(dir);
  config.Save((fs::path(dir) / kSnapshotName).string());
}

corpus::MelConfig MelConfigOf(const Config& c) { return corpus::SyntheticSpecFromConfig(c).mel; }

text::EncodeOptions EncodeOptionsOf(const Config& c) {
  text::EncodeOptions o;
  o.mode = text::ParseTokenizeMode(c.GetString("text.mode"));
  o.add_bos = c.GetBool("text.add_bos");
  o.add_eos = c.GetBool("text.add_eos");
  o.allow_unknown = c.GetBool("text.allow_unknown");
  return o;
}

std::vector<int> ParseInts(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const std::string& t : SplitWhitespace(s)) {
    const double v = ParseDouble(t);
    if (v != static_cast<int>(v)) throw InvalidInput(what + ": not an integer: " + t);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string JoinInts(const std::vector<int>& v) {
  std::vector<std::string> parts;
  for (int x : v) parts.push_back(std::to_string(x));
  return Join(parts, " ");
}

// ---------------------------------------------------------------- prepare

// List lines: utt_id <TAB> wav path <TAB> transcript [<TAB> durations
// [<TAB> coarse label]]. Relative wav paths are resolved against the list.
struct PrepareArgs {
  Common common;
  std::string list;
};

int Prepare(const PrepareArgs& a) {
  Config config = Resolve(a.common);
  const corpus::MelConfig mel = MelConfigOf(config);
  mel.Validate();
  const corpus::PitchConfig pitch_config;
  const text::EncodeOptions enc = EncodeOptionsOf(config);

  std::ifstream in(a.list);
  if (!in) throw InvalidInput("cannot read list " + a.list);
  const fs::path base = fs::path(a.list).parent_path();
  std::vector<std::vector<std::string>> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = Split(line, "\t");
    if (f.size() < 3 || f.size() > 5) {
      throw InvalidInput(fmt::format("{}:{}: expected 3 to 5 tab-separated fields", a.list, lineno));
    }
    lines.push_back(f);
  }
  if (lines.empty()) throw InvalidInput("list " + a.list + " is empty");

  std::vector<std::string> transcripts;
  for (const auto& f : lines) transcripts.push_back(f[2]);
  const text::SymbolInventory inventory =
      text::SymbolInventory::Build(transcripts, enc.mode, enc.allow_unknown);

  corpus::CorpusManifest m;
  m.sample_rate_hz = mel.sample_rate_hz;
  m.frame_shift_ms = mel.frame_shift_ms();
  m.n_mels = mel.n_mels;
  for (const auto& f : lines) {
    fs::path wav_path = f[1];
    if (wav_path.is_relative()) wav_path = base / wav_path;
    const corpus::Waveform wav = corpus::ReadWav(wav_path.string());
    if (wav.sample_rate_hz != mel.sample_rate_hz) {
      throw InvalidInput(fmt::format("{}: sample rate {} but features.sample_rate_hz is {}",
                                     wav_path.string(), wav.sample_rate_hz, mel.sample_rate_hz));
    }
    corpus::UtteranceRecord rec;
    rec.utt_id = f[0];
    rec.transcript = f[2];
    rec.token_ids = inventory.Encode(f[2], enc);
    rec.mel = corpus::ExtractMel(wav.samples, wav.sample_rate_hz, mel);
    rec.pitch = corpus::ExtractPitch(wav.samples, wav.sample_rate_hz, mel, pitch_config);
    if (f.size() > 3 && Trim(f[3]) != "-") rec.durations = ParseInts(f[3], rec.utt_id);
    if (f.size() > 4 && Trim(f[4]) != "-") rec.coarse_label = Trim(f[4]);
    m.utterances.push_back(std::move(rec));
  }
  PrepareOut(a.common.out, config);
  corpus::SaveManifest(m, (fs::path(a.common.out) / corpus::kManifestFileName).string());
  inventory.Save((fs::path(a.common.out) / kInventoryName).string());
  spdlog::info("prepared {} utterances into {}", m.size(), a.common.out);
  return kExitOk;
}

// ---------------------------------------------------------- gen-synthetic

struct GenArgs {
  Common common;
  bool audio = false;
};

int GenSynthetic(const GenArgs& a) {
  Config config = Resolve(a.common);
  const corpus::SyntheticCorpusSpec spec = corpus::SyntheticSpecFromConfig(config);
  corpus::SyntheticCorpusGenerator gen(spec);
  std::vector<corpus::SyntheticUtterance> truth;
  const corpus::CorpusManifest m = gen.Generate(&truth);
  PrepareOut(a.common.out, config);
  const fs::path out(a.common.out);
  corpus::SaveManifest(m, (out / corpus::kManifestFileName).string());
  text::SymbolInventory::Build(m, text::TokenizeMode::kWhitespace)
      .Save((out / kInventoryName).string());
  if (a.audio) {
    fs::create_directories(out / "audio");
    for (size_t i = 0; i < m.size(); ++i) {
      corpus::Waveform w{gen.RenderWaveform(truth[i]), spec.mel.sample_rate_hz};
      corpus::WriteWav((out / "audio" / (m.utterances[i].utt_id + ".wav")).string(), w);
    }
  }
  spdlog::info("generated {} utterances into {}", m.size(), a.common.out);
  return kExitOk;
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  Common common;
  std::string corpus;
};

int TrainCommand(const TrainArgs& a) {
  Config config = Resolve(a.common);
  // Checked before loading data so the message names the key.
  if (config.GetString("train.stage") == "stage2" &&
      config.GetString("train.stage1_checkpoint").empty()) {
    throw ConfigError("stage2 training needs train.stage1_checkpoint");
  }
  const corpus::CorpusManifest m = corpus::LoadManifest(a.corpus);
  PrepareOut(a.common.out, config);
  trainer::TrainResult r = trainer::Train(config, m);
  const std::string dir = (fs::path(a.common.out) / kCheckpointDir).string();
  trainer::SaveCheckpoint(r.checkpoint, dir);
  spdlog::info("saved {} checkpoint at step {} to {}", r.checkpoint.stage, r.checkpoint.step, dir);
  return kExitOk;
}

// -------------------------------------------------------------- synthesize

std::unique_ptr<trainer::TtsModel> LoadModel(const std::string& dir, trainer::Checkpoint* ckpt) {
  *ckpt = trainer::LoadCheckpoint(dir);
  return trainer::ModelFromCheckpoint(*ckpt);
}

struct SynthArgs {
  Common common;
  std::string checkpoint;
  std::string text;
  std::string tokens;
  std::string inventory;
  std::string reference;
  bool no_reference = false;
  std::optional<double> temperature;
  uint64_t seed = 1;
  std::string name = "synth";
};

int Synthesize(const SynthArgs& a) {
  Config config = Resolve(a.common);
  trainer::Checkpoint ckpt;
  auto model = LoadModel(a.checkpoint, &ckpt);
  const bool needs_ref = model->config().has_reference();
  if (a.no_reference == !a.reference.empty()) {
    throw UsageError("give exactly one of --reference and --no-reference");
  }
  if (needs_ref && a.no_reference) {
    throw UsageError(ckpt.stage + " model needs a reference; --no-reference is for nat_plain");
  }
  if (!needs_ref && !a.reference.empty()) {
    throw UsageError(ckpt.stage + " model takes no reference; use --no-reference");
  }
  if (a.text.empty() == a.tokens.empty()) throw UsageError("give exactly one of --text and --tokens");

  std::vector<int> ids;
  if (!a.tokens.empty()) {
    ids = ParseInts(a.tokens, "--tokens");
  } else {
    if (a.inventory.empty()) throw UsageError("--text needs --inventory");
    ids = text::SymbolInventory::Load(a.inventory).Encode(a.text, EncodeOptionsOf(ckpt.config));
  }
  std::optional<Matrix> ref;
  if (!a.reference.empty()) ref = ReadFeatureFile(a.reference);
  const double temperature = a.temperature ? *a.temperature : config.GetDouble("eval.prior_temperature");
  if (temperature < 0.0) throw UsageError("--temperature must be >= 0");

  Rng rng(a.seed);
  trainer::Synthesis s = model->SynthesizeFromText(ids, ref ? &*ref : nullptr, temperature, &rng);
  PrepareOut(a.common.out, config);
  const fs::path out(a.common.out);
  WriteFeatureFile((out / (a.name + ".mel")).string(), s.frames);
  std::ofstream((out / (a.name + ".dur")).string()) << JoinInts(s.durations) << "\n";
  spdlog::info("synthesised {} frames for {} tokens", s.frames.rows(), ids.size());
  return kExitOk;
}

// -------------------------------------------------------------- copy-synth

std::vector<int> Heldout(const Config& ckpt_config, const corpus::CorpusManifest& m) {
  return trainer::SplitCorpus(m, ckpt_config.GetDouble("train.heldout_fraction"),
                              static_cast<uint64_t>(ckpt_config.GetInt("train.seed")))
      .heldout;
}

std::vector<int> Cap(std::vector<int> v, const Config& config) {
  const int cap = config.GetInt("eval.max_utterances");
  if (cap > 0 && static_cast<int>(v.size()) > cap) v.resize(static_cast<size_t>(cap));
  return v;
}

std::vector<int> SelectUtterances(const corpus::CorpusManifest& m, const std::string& ids) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < m.size(); ++i) index[m.utterances[i].utt_id] = static_cast<int>(i);
  std::vector<int> out;
  for (const std::string& id : Split(ids, ",")) {
    auto it = index.find(Trim(id));
    if (it == index.end()) throw InvalidInput("no utterance '" + id + "' in the corpus");
    out.push_back(it->second);
  }
  return out;
}

struct CopyArgs {
  Common common;
  std::string checkpoint;
  std::string corpus;
  std::string utts;
};

int CopySynth(const CopyArgs& a) {
  Config config = Resolve(a.common);
  trainer::Checkpoint ckpt;
  auto model = LoadModel(a.checkpoint, &ckpt);
  const corpus::CorpusManifest m = corpus::LoadManifest(a.corpus);
  const std::vector<int> idx =
      a.utts.empty() ? Cap(Heldout(ckpt.config, m), config) : SelectUtterances(m, a.utts);
  PrepareOut(a.common.out, config);
  const Rng base(static_cast<uint64_t>(config.GetInt("eval.seed")));
  const double temperature = config.GetDouble("eval.posterior_temperature");
  for (int i : idx) {
    const corpus::UtteranceRecord& rec = m.utterances[i];
    Rng rng = base.Derive("posterior/" + rec.utt_id);
    trainer::Synthesis s = model->CopySynthesize(rec, temperature, &rng);
    WriteFeatureFile((fs::path(a.common.out) / (rec.utt_id + ".mel")).string(), s.frames);
  }
  spdlog::info("copy-synthesised {} utterances", idx.size());
  return kExitOk;
}

// --------------------------------------------------------------- evaluate

// Optional embedder and matcher plus the pitch estimator, owned together.
struct EvalTools {
  std::unique_ptr<corpus::MelPitchEstimator> pitch;
  std::unique_ptr<eval::Embedder> embedder;
  std::unique_ptr<eval::TokenMatcher> matcher;
  std::unique_ptr<std::map<std::string, std::string>> hypotheses;
  eval::EvalContext ctx;
};

std::unique_ptr<EvalTools> MakeTools(const Config& config, const corpus::CorpusManifest& m,
                                     const std::vector<int>& fit, const std::string& tag) {
  auto t = std::make_unique<EvalTools>();
  t->pitch = std::make_unique<corpus::MelPitchEstimator>(MelConfigOf(config),
                                                         corpus::MelPitchConfig{});
  t->ctx = eval::EvalContext::FromConfig(config);
  t->ctx.pitch = t->pitch.get();
  t->ctx.model_tag = tag;
  const std::string emb = config.GetString("eval.embeddings");
  if (!emb.empty()) {
    t->embedder = std::make_unique<eval::FileEmbedder>(emb);
  } else {
    std::vector<const Matrix*> frames;
    for (int i : fit) frames.push_back(&m.utterances[i].mel.frames);
    t->embedder = std::make_unique<eval::SummaryEmbedder>(t->pitch.get(), frames);
  }
  t->ctx.embedder = t->embedder.get();
  const std::string hyp = config.GetString("eval.hypotheses");
  if (!hyp.empty()) {
    t->hypotheses = std::make_unique<std::map<std::string, std::string>>(eval::LoadHypotheses(hyp));
    t->ctx.hypotheses = t->hypotheses.get();
  } else if (!m.prior_sampling_only()) {
    t->matcher = std::make_unique<eval::TokenMatcher>();
    t->matcher->Fit(m, fit);
    t->ctx.matcher = t->matcher.get();
  }
  return t;
}

struct EvalArgs {
  Common common;
  std::string checkpoint;
  std::string corpus;
  std::string protocol = "posterior";
  bool real = false;
};

int Evaluate(const EvalArgs& a) {
  Config config = Resolve(a.common);
  const corpus::CorpusManifest m = corpus::LoadManifest(a.corpus);
  std::unique_ptr<trainer::TtsModel> model;
  trainer::Checkpoint ckpt;
  Config split_config = config;
  if (a.real) {
    if (a.protocol != "posterior") throw UsageError("--real applies to the posterior protocol only");
  } else {
    if (a.checkpoint.empty()) throw UsageError("evaluate needs --checkpoint or --real");
    model = LoadModel(a.checkpoint, &ckpt);
    split_config = ckpt.config;
  }
  const trainer::CorpusSplit split =
      trainer::SplitCorpus(m, split_config.GetDouble("train.heldout_fraction"),
                           static_cast<uint64_t>(split_config.GetInt("train.seed")));
  const std::vector<int> idx = Cap(split.heldout, config);
  auto tools = MakeTools(config, m, split.train, a.real ? "real" : ckpt.stage);

  eval::EvalReport report;
  if (a.protocol == "posterior") {
    report = eval::EvaluatePosterior(model.get(), m, idx, tools->ctx);
  } else if (a.protocol == "prior") {
    report = eval::EvaluatePrior(*model, m, idx, tools->ctx);
  } else if (a.protocol == "prior-aligned") {
    report = eval::EvaluatePriorAligned(*model, m, idx, tools->ctx);
  } else {
    throw UsageError("unknown protocol '" + a.protocol +
                     "'; expected posterior, prior or prior-aligned");
  }
  PrepareOut(a.common.out, config);
  const fs::path out(a.common.out);
  report.Save((out / (a.protocol + ".records")).string(), (out / (a.protocol + ".txt")).string());
  std::cout << report.ToTable();
  return kExitOk;
}

// ------------------------------------------------------------------ probe

double ProbeModel(const trainer::TtsModel& model, const corpus::CorpusManifest& m,
                  const Config& config) {
  std::vector<int> all(m.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  eval::LatentPools pools = eval::PoolLatents(model, m, all);
  eval::ProbeOptions opt;
  opt.folds = config.GetInt("eval.probe_folds");
  opt.l2 = config.GetDouble("eval.probe_l2");
  opt.seed = static_cast<uint64_t>(config.GetInt("eval.seed"));
  return eval::LeakageProbe(pools.pools, pools.labels, opt);
}

struct ProbeArgs {
  Common common;
  std::string checkpoint;
  std::string corpus;
};

int Probe(const ProbeArgs& a) {
  Config config = Resolve(a.common);
  trainer::Checkpoint ckpt;
  auto model = LoadModel(a.checkpoint, &ckpt);
  const corpus::CorpusManifest m = corpus::LoadManifest(a.corpus);
  const double acc = ProbeModel(*model, m, config);
  const std::string line = fmt::format("probe_accuracy\t{:.17g}\n", acc);
  if (!a.common.out.empty()) {
    PrepareOut(a.common.out, config);
    std::ofstream((fs::path(a.common.out) / "probe.tsv").string()) << line;
  }
  std::cout << line;
  return kExitOk;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
  Common common;
  std::string corpus;
  std::string dims;
};

int Sweep(const SweepArgs& a) {
  Config config = Resolve(a.common);
  std::vector<int> dims;
  for (const std::string& d : Split(a.dims, ",")) {
    if (Trim(d).empty()) continue;
    const double v = ParseDouble(d);
    if (v != static_cast<int>(v) || v < 1) throw UsageError("--dims: bad dimension '" + d + "'");
    dims.push_back(static_cast<int>(v));
  }
  if (dims.size() < 2) throw UsageError("sweep needs at least two --dims values");
  config.Set("train.stage", "stage1");
  PrepareOut(a.common.out, config);
  const fs::path out(a.common.out);

  std::string corpus_path = a.corpus;
  if (corpus_path.empty()) {
    // Generated once and reloaded, so every run trains on the stored
    // float32 features.
    corpus_path = (out / "corpus").string();
    fs::create_directories(corpus_path);
    corpus::SaveManifest(corpus::GenerateSyntheticCorpus(corpus::SyntheticSpecFromConfig(config)),
                         (fs::path(corpus_path) / corpus::kManifestFileName).string());
  }
  const corpus::CorpusManifest m = corpus::LoadManifest(corpus_path);

  std::ostringstream trend;
  trend << "d_z\tmcd\tffe\tprobe_accuracy\n";
  std::string table = fmt::format("{:>6} {:>12} {:>10} {:>10}\n", "d_z", "mcd", "ffe", "probe");
  for (int d : dims) {
    Config c = config;
    c.Set("model.d_z", std::to_string(d));
    const fs::path dir = out / fmt::format("dz{}", d);
    PrepareOut(dir.string(), c);
    spdlog::info("sweep: training d_z={}", d);
    trainer::TrainResult r = trainer::Train(c, m);
    trainer::SaveCheckpoint(r.checkpoint, (dir / kCheckpointDir).string());
    auto tools = MakeTools(c, m, r.split.train, fmt::format("stage1-dz{}", d));
    eval::EvalReport report =
        eval::EvaluatePosterior(r.model.get(), m, Cap(r.split.heldout, c), tools->ctx);
    report.Save((dir / "posterior.records").string(), (dir / "posterior.txt").string());
    const double acc = ProbeModel(*r.model, m, c);
    std::ofstream((dir / "probe.tsv").string()) << fmt::format("probe_accuracy\t{:.17g}\n", acc);
    const auto agg = report.Aggregates();
    const double mcd = agg.count("mcd") ? agg.at("mcd").mean : std::nan("");
    const double ffe = agg.count("ffe") ? agg.at("ffe").mean : std::nan("");
    trend << fmt::format("{}\t{:.17g}\t{:.17g}\t{:.17g}\n", d, mcd, ffe, acc);
    table += fmt::format("{:>6} {:>12.4f} {:>10.4f} {:>10.4f}\n", d, mcd, ffe, acc);
  }
  std::ofstream((out / "trend.tsv").string()) << trend.str();
  std::ofstream((out / "trend.txt").string()) << table;
  std::cout << table;
  return kExitOk;
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app{"Two-stage expressive TTS: corpus, training, synthesis and evaluation"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  PrepareArgs prep;
  auto* p = app.add_subcommand("prepare", "extract features from a list of wav files");
  AddCommon(p, &prep.common);
  p->add_option("--list", prep.list, "utt_id<TAB>wav<TAB>transcript[<TAB>durations[<TAB>label]]")
      ->required();

  GenArgs gen;
  auto* g = app.add_subcommand("gen-synthetic", "generate a synthetic corpus");
  AddCommon(g, &gen.common);
  g->add_flag("--audio", gen.audio, "also render sinusoidal wav files");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "train the stage or variant named by train.stage");
  AddCommon(t, &tr.common);
  t->add_option("--corpus", tr.corpus, "corpus directory or manifest")->required();

  SynthArgs syn;
  auto* s = app.add_subcommand("synthesize", "synthesise from text");
  AddCommon(s, &syn.common);
  s->add_option("--checkpoint", syn.checkpoint, "checkpoint directory")->required();
  s->add_option("--text", syn.text, "transcript, encoded with --inventory");
  s->add_option("--tokens", syn.tokens, "space-separated token ids");
  s->add_option("--inventory", syn.inventory, "symbol inventory file");
  s->add_option("--reference", syn.reference, "reference log-mel feature file");
  s->add_flag("--no-reference", syn.no_reference, "synthesise without a reference");
  s->add_option("--temperature", syn.temperature, "prior temperature (default eval.prior_temperature)");
  s->add_option("--seed", syn.seed, "sampling seed");
  s->add_option("--name", syn.name, "output file stem");

  CopyArgs cp;
  auto* c = app.add_subcommand("copy-synth", "copy synthesis with ground-truth durations");
  AddCommon(c, &cp.common);
  c->add_option("--checkpoint", cp.checkpoint, "checkpoint directory")->required();
  c->add_option("--corpus", cp.corpus, "corpus directory or manifest")->required();
  c->add_option("--utts", cp.utts, "comma-separated utterance ids (default: held-out split)");

  EvalArgs ev;
  auto* e = app.add_subcommand("evaluate", "score a checkpoint on the held-out split");
  AddCommon(e, &ev.common);
  e->add_option("--checkpoint", ev.checkpoint, "checkpoint directory");
  e->add_option("--corpus", ev.corpus, "corpus directory or manifest")->required();
  e->add_option("--protocol", ev.protocol, "posterior, prior or prior-aligned");
  e->add_flag("--real", ev.real, "score the recordings themselves");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "stage-1 latent size sweep");
  AddCommon(w, &sw.common);
  w->add_option("--corpus", sw.corpus, "corpus (default: generate from the config)");
  w->add_option("--dims", sw.dims, "comma-separated d_z values, at least two")->required();

  ProbeArgs pr;
  auto* q = app.add_subcommand("probe", "coarse-factor leakage probe on pooled latents");
  AddCommon(q, &pr.common, false);
  q->add_option("--checkpoint", pr.checkpoint, "checkpoint directory")->required();
  q->add_option("--corpus", pr.corpus, "corpus directory or manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto level = spdlog::level::from_str(log_level);
    if (level == spdlog::level::off && log_level != "off") {
      throw UsageError("unknown --log-level '" + log_level + "'");
    }
    spdlog::set_level(level);
    if (p->parsed()) return Prepare(prep);
    if (g->parsed()) return GenSynthetic(gen);
    if (t->parsed()) return TrainCommand(tr);
    if (s->parsed()) return Synthesize(syn);
    if (c->parsed()) return CopySynth(cp);
    if (e->parsed()) return Evaluate(ev);
    if (w->parsed()) return Sweep(sw);
    if (q->parsed()) return Probe(pr);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace fgtts::cli
