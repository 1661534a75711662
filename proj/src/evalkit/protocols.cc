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

#include "fgtts/evalkit/protocols.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "fgtts/common/error.h"
#include "fgtts/common/random.h"
#include "fgtts/common/strings.h"
#include "fgtts/corpus/synthetic.h"
#include "fgtts/evalkit/metrics.h"
#include "fgtts/prior_network/prior.h"

namespace fgtts::eval {

std::map<std::string, MetricSummary> EvalReport::Aggregates() const {
  std::map<std::string, std::vector<double>> values;
  for (const ReportRow& r : rows) {
    for (const auto& [k, v] : r.values) values[k].push_back(v);
  }
  std::map<std::string, MetricSummary> out;
  for (const auto& [k, v] : values) {
    out[k] = {Mean(v), SampleStddev(v), static_cast<int>(v.size())};
  }
  return out;
}

namespace {

std::string Num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::string EvalReport::ToRecords() const {
  std::ostringstream os;
  os << kReportSchema << "\n";
  os << "model\t" << model_tag << "\n";
  os << "protocol\t" << protocol << "\n";
  os << "columns\t" << Join(columns, ",") << "\n";
  for (const ReportRow& r : rows) {
    for (const std::string& c : columns) {
      auto v = r.values.find(c);
      if (v != r.values.end()) os << "row\t" << r.id << "\t" << c << "\t" << Num(v->second) << "\n";
      auto e = r.errors.find(c);
      if (e != r.errors.end()) os << "error\t" << r.id << "\t" << c << "\t" << e->second << "\n";
    }
  }
  const auto agg = Aggregates();
  for (const std::string& c : columns) {
    auto a = agg.find(c);
    if (a == agg.end()) continue;
    os << "aggregate\t" << c << "\t" << Num(a->second.mean) << "\t" << Num(a->second.stddev)
       << "\t" << a->second.count << "\n";
  }
  return os.str();
}

EvalReport EvalReport::FromRecords(const std::string& text) {
  EvalReport r;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kReportSchema) {
    throw InvalidInput("not an evaluation report");
  }
  std::map<std::string, size_t> index;
  auto row = [&](const std::string& id) -> ReportRow& {
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, r.rows.size()).first;
      r.rows.push_back({id, {}, {}});
    }
    return r.rows[it->second];
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = Split(line, "\t");
    if (f[0] == "model" && f.size() == 2) {
      r.model_tag = f[1];
    } else if (f[0] == "protocol" && f.size() == 2) {
      r.protocol = f[1];
    } else if (f[0] == "columns" && f.size() == 2) {
      r.columns = Split(f[1], ",");
    } else if (f[0] == "row" && f.size() == 4) {
      row(f[1]).values[f[2]] = ParseDouble(f[3]);
    } else if (f[0] == "error" && f.size() == 4) {
      row(f[1]).errors[f[2]] = f[3];
    } else if (f[0] == "aggregate") {
      continue;
    } else {
      throw InvalidInput("bad report line: " + line);
    }
  }
  return r;
}

std::string EvalReport::ToTable() const {
  const auto agg = Aggregates();
  std::ostringstream os;
  os << fmt::format("model: {}   protocol: {}   rows: {}\n", model_tag, protocol, rows.size());
  os << fmt::format("{:<16} {:>12} {:>12} {:>6}\n", "metric", "mean", "stddev", "n");
  for (const std::string& c : columns) {
    auto a = agg.find(c);
    if (a == agg.end()) {
      os << fmt::format("{:<16} {:>12} {:>12} {:>6}\n", c, "-", "-", 0);
    } else {
      os << fmt::format("{:<16} {:>12.4f} {:>12.4f} {:>6}\n", c, a->second.mean,
                        a->second.stddev, a->second.count);
    }
  }
  return os.str();
}

void EvalReport::Save(const std::string& records_path, const std::string& table_path) const {
  std::ofstream rec(records_path);
  if (!rec) throw InvalidInput("cannot write " + records_path);
  rec << ToRecords();
  if (!table_path.empty()) {
    std::ofstream tab(table_path);
    if (!tab) throw InvalidInput("cannot write " + table_path);
    tab << ToTable();
  }
}

SummaryEmbedder::SummaryEmbedder(const corpus::MelPitchEstimator* pitch,
                                 const std::vector<const Matrix*>& fit_frames)
    : pitch_(pitch) {
  if (fit_frames.empty()) throw InvalidInput("summary embedder needs utterances to fit");
  std::vector<RowVector> raw;
  for (const Matrix* f : fit_frames) raw.push_back(Raw(*f));
  const Eigen::Index d = raw.front().size();
  mean_ = RowVector::Zero(d);
  for (const auto& r : raw) mean_ += r;
  mean_ /= static_cast<double>(raw.size());
  scale_ = RowVector::Zero(d);
  for (const auto& r : raw) scale_ += (r - mean_).cwiseAbs2();
  scale_ /= static_cast<double>(raw.size());
  for (Eigen::Index i = 0; i < d; ++i) scale_(i) = scale_(i) > 1e-24 ? std::sqrt(scale_(i)) : 1.0;
}

RowVector SummaryEmbedder::Raw(const Matrix& log_mel) const {
  const Matrix c = MelCepstra(log_mel);
  const Eigen::Index k = c.cols();
  RowVector out(2 * k + 1);
  RowVector mean = c.colwise().mean();
  out.head(k) = mean;
  for (Eigen::Index j = 0; j < k; ++j) {
    out(k + j) = std::sqrt((c.col(j).array() - mean(j)).square().mean());
  }
  const double f0 = corpus::MeanVoicedF0(pitch_->Estimate(log_mel));
  out(2 * k) = std::isfinite(f0) ? std::log(f0) : 0.0;
  return out;
}

RowVector SummaryEmbedder::Embed(const std::string&, const Matrix& log_mel) const {
  return (Raw(log_mel) - mean_).cwiseQuotient(scale_);
}

FileEmbedder::FileEmbedder(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read embeddings file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = Split(line, "\t");
    if (f.size() != 2) throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected key<TAB>vector");
    std::vector<std::string> parts = Split(f[1], ",");
    RowVector v(static_cast<Eigen::Index>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = ParseDouble(parts[i]);
    vectors_[f[0]] = v;
  }
}

RowVector FileEmbedder::Embed(const std::string& key, const Matrix&) const {
  auto it = vectors_.find(key);
  if (it == vectors_.end()) throw InvalidInput("no embedding for '" + key + "'");
  return it->second;
}

namespace {

RowVector SegmentShape(const Matrix& cepstra, int start, int length) {
  return cepstra.middleRows(start, length).colwise().mean();
}

}  // namespace

void TokenMatcher::Fit(const corpus::CorpusManifest& corpus, const std::vector<int>& indices) {
  std::map<int, std::pair<RowVector, int>> sums;
  for (int i : indices) {
    const corpus::UtteranceRecord& rec = corpus.utterances[i];
    if (!rec.durations) throw MissingDurations(rec.utt_id);
    const Matrix c = MelCepstra(rec.mel.frames);
    int t = 0;
    for (size_t n = 0; n < rec.token_ids.size(); ++n) {
      const int d = (*rec.durations)[n];
      if (d > 0) {
        auto& s = sums[rec.token_ids[n]];
        if (s.second == 0) s.first = RowVector::Zero(c.cols());
        s.first += SegmentShape(c, t, d);
        ++s.second;
      }
      t += d;
    }
  }
  centroids_.clear();
  for (const auto& [id, s] : sums) centroids_[id] = s.first / static_cast<double>(s.second);
  if (centroids_.empty()) throw InvalidInput("token matcher: no tokens to fit");
}

std::vector<int> TokenMatcher::Recognize(const Matrix& log_mel,
                                         const std::vector<int>& durations) const {
  if (centroids_.empty()) throw InvalidInput("token matcher is not fitted");
  const Matrix c = MelCepstra(log_mel);
  std::vector<int> out;
  int t = 0;
  for (int d : durations) {
    if (d <= 0) continue;
    if (t + d > c.rows()) throw ShapeMismatch("token matcher: durations exceed frames");
    RowVector shape = SegmentShape(c, t, d);
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& [id, centroid] : centroids_) {
      double dist = (shape - centroid).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = id;
      }
    }
    out.push_back(best);
    t += d;
  }
  return out;
}

std::map<std::string, std::string> LoadHypotheses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read hypotheses file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected utt_id<TAB>text");
    }
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

EvalContext EvalContext::FromConfig(const Config& c) {
  EvalContext ctx;
  ctx.posterior_temperature = c.GetDouble("eval.posterior_temperature");
  ctx.prior_temperature = c.GetDouble("eval.prior_temperature");
  ctx.seed = static_cast<uint64_t>(c.GetInt("eval.seed"));
  ctx.references = c.GetInt("eval.references");
  ctx.sentences_per_reference = c.GetInt("eval.sentences_per_reference");
  if (ctx.posterior_temperature < 0.0 || ctx.prior_temperature < 0.0) {
    throw ConfigError("eval temperatures must be non-negative");
  }
  if (ctx.references < 1 || ctx.sentences_per_reference < 1) {
    throw ConfigError("eval.references and eval.sentences_per_reference must be positive");
  }
  ctx.f0_bases = c.GetDoubleList("corpus.f0_base_per_factor");
  return ctx;
}

namespace {

// Runs `fn` and records its value, or the error message when it throws.
template <typename Fn>
void Score(ReportRow* row, const std::string& name, Fn&& fn) {
  try {
    row->values[name] = fn();
  } catch (const Error& e) {
    row->errors[name] = e.what();
  }
}

void ScoreProsody(ReportRow* row, const Matrix& log_mel, const corpus::PitchTrack& pitch,
                  const std::vector<int>& durations) {
  ProsodyStats s;
  try {
    s = ProsodyTokenStddev(log_mel, pitch, durations);
  } catch (const Error& e) {
    for (const char* n : {"f0_stddev", "energy_stddev", "dur_stddev"}) row->errors[n] = e.what();
    return;
  }
  Score(row, "f0_stddev", [&] { return s.Get("f0"); });
  Score(row, "energy_stddev", [&] { return s.Get("energy"); });
  Score(row, "dur_stddev", [&] { return s.Get("duration"); });
}

std::string TokenString(const std::vector<int>& ids) {
  std::vector<std::string> words;
  for (int id : ids) words.push_back(std::to_string(id));
  return Join(words, " ");
}

int CoarseFactor(const corpus::UtteranceRecord& rec) {
  return rec.coarse_label ? corpus::ParseCoarseLabel(*rec.coarse_label) : -1;
}

void RequirePitch(const EvalContext& ctx) {
  if (ctx.pitch == nullptr) throw InvalidInput("evaluation needs a pitch estimator");
}

}  // namespace

EvalReport EvaluatePosterior(const trainer::TtsModel* model, const corpus::CorpusManifest& corpus,
                             const std::vector<int>& indices, const EvalContext& ctx) {
  RequirePitch(ctx);
  EvalReport report;
  report.model_tag = model == nullptr ? "real" : ctx.model_tag;
  report.protocol = "posterior";
  report.columns = {"mcd", "ffe", "energy_stddev", "f0_stddev", "dur_stddev"};
  if (ctx.embedder) report.columns.push_back("similarity");
  const Rng base(ctx.seed);
  for (int i : indices) {
    const corpus::UtteranceRecord& rec = corpus.utterances[i];
    if (!rec.durations) throw MissingDurations(rec.utt_id);
    ReportRow row{rec.utt_id, {}, {}};
    Matrix syn;
    try {
      if (model == nullptr) {
        syn = rec.mel.frames;
      } else {
        Rng rng = base.Derive("posterior/" + rec.utt_id);
        syn = model->CopySynthesize(rec, ctx.posterior_temperature, &rng).frames;
      }
    } catch (const Error& e) {
      for (const auto& c : report.columns) row.errors[c] = e.what();
      report.rows.push_back(std::move(row));
      continue;
    }
    const corpus::PitchTrack ref_pitch = ctx.pitch->Estimate(rec.mel.frames);
    const corpus::PitchTrack syn_pitch = ctx.pitch->Estimate(syn);
    Score(&row, "mcd", [&] { return McdFromMel(rec.mel.frames, syn); });
    Score(&row, "ffe", [&] { return Ffe(ref_pitch, syn_pitch); });
    ScoreProsody(&row, syn, syn_pitch, *rec.durations);
    if (ctx.embedder) {
      Score(&row, "similarity", [&] {
        return CosineSimilarity(ctx.embedder->Embed(rec.utt_id, rec.mel.frames),
                                ctx.embedder->Embed(rec.utt_id + "/syn", syn));
      });
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvalReport EvaluatePrior(const trainer::TtsModel& model, const corpus::CorpusManifest& corpus,
                         const std::vector<int>& indices, const EvalContext& ctx) {
  RequirePitch(ctx);
  const bool needs_reference = model.config().has_reference();
  std::vector<int> refs, sentences;
  for (int i : indices) {
    const corpus::UtteranceRecord& rec = corpus.utterances[i];
    const bool usable = !needs_reference || rec.num_frames() >= prior::ReferenceEncoder::MinFrames();
    if (static_cast<int>(refs.size()) < ctx.references && usable) {
      refs.push_back(i);
    } else if (static_cast<int>(sentences.size()) < ctx.sentences_per_reference) {
      sentences.push_back(i);
    }
  }
  if (refs.empty() || sentences.empty()) {
    throw InvalidInput("prior evaluation needs at least one reference and one sentence");
  }
  EvalReport report;
  report.model_tag = ctx.model_tag;
  report.protocol = "prior";
  const bool with_wer = ctx.hypotheses != nullptr || (ctx.matcher && ctx.matcher->fitted());
  if (with_wer) report.columns.push_back("wer");
  if (ctx.embedder) report.columns.push_back("similarity");
  report.columns.insert(report.columns.end(), {"f0_stddev", "energy_stddev", "dur_stddev", "mean_f0"});
  if (!ctx.f0_bases.empty()) report.columns.push_back("coarse_match");

  const Rng base(ctx.seed);
  for (int r : refs) {
    const corpus::UtteranceRecord& ref = corpus.utterances[r];
    const int factor = CoarseFactor(ref);
    for (int s : sentences) {
      const corpus::UtteranceRecord& sent = corpus.utterances[s];
      const std::string key = ref.utt_id + "/" + sent.utt_id;
      ReportRow row{key, {}, {}};
      trainer::Synthesis syn;
      try {
        Rng rng = base.Derive("prior/" + key);
        syn = model.SynthesizeFromText(sent.token_ids, needs_reference ? &ref.mel.frames : nullptr,
                                       ctx.prior_temperature, &rng);
      } catch (const Error& e) {
        for (const auto& c : report.columns) row.errors[c] = e.what();
        report.rows.push_back(std::move(row));
        continue;
      }
      const corpus::PitchTrack pitch = ctx.pitch->Estimate(syn.frames);
      if (ctx.hypotheses != nullptr) {
        Score(&row, "wer", [&] {
          auto it = ctx.hypotheses->find(key);
          if (it == ctx.hypotheses->end()) throw InvalidInput("no hypothesis for " + key);
          return Wer(sent.transcript, it->second);
        });
      } else if (with_wer) {
        Score(&row, "wer", [&] {
          return Wer(TokenString(sent.token_ids),
                     TokenString(ctx.matcher->Recognize(syn.frames, syn.durations)));
        });
      }
      if (ctx.embedder) {
        Score(&row, "similarity", [&] {
          return CosineSimilarity(ctx.embedder->Embed(ref.utt_id, ref.mel.frames),
                                  ctx.embedder->Embed(key, syn.frames));
        });
      }
      ScoreProsody(&row, syn.frames, pitch, syn.durations);
      const double f0 = corpus::MeanVoicedF0(pitch);
      if (std::isfinite(f0)) {
        row.values["mean_f0"] = f0;
      } else {
        row.errors["mean_f0"] = "no voiced frames";
      }
      if (!ctx.f0_bases.empty()) {
        if (factor < 0) {
          row.errors["coarse_match"] = "reference has no coarse label";
        } else {
          // An utterance without voiced frames cannot match.
          row.values["coarse_match"] =
              std::isfinite(f0) && corpus::NearestBase(f0, ctx.f0_bases) == factor ? 1.0 : 0.0;
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

EvalReport EvaluatePriorAligned(const trainer::TtsModel& model,
                                const corpus::CorpusManifest& corpus,
                                const std::vector<int>& indices, const EvalContext& ctx) {
  RequirePitch(ctx);
  EvalReport report;
  report.model_tag = ctx.model_tag;
  report.protocol = "prior";
  report.columns = {"mcd", "ffe"};
  const Rng base(ctx.seed);
  const bool needs_reference = model.config().has_reference();
  for (int i : indices) {
    const corpus::UtteranceRecord& rec = corpus.utterances[i];
    if (!rec.durations) throw MissingDurations(rec.utt_id);
    ReportRow row{rec.utt_id, {}, {}};
    Matrix syn;
    try {
      Rng rng = base.Derive("prior_aligned/" + rec.utt_id);
      syn = model.SynthesizeFromText(rec.token_ids, needs_reference ? &rec.mel.frames : nullptr,
                                     ctx.prior_temperature, &rng, &*rec.durations)
                .frames;
    } catch (const Error& e) {
      for (const auto& c : report.columns) row.errors[c] = e.what();
      report.rows.push_back(std::move(row));
      continue;
    }
    Score(&row, "mcd", [&] { return McdFromMel(rec.mel.frames, syn); });
    Score(&row, "ffe", [&] {
      return Ffe(ctx.pitch->Estimate(rec.mel.frames), ctx.pitch->Estimate(syn));
    });
    report.rows.push_back(std::move(row));
  }
  return report;
}

LatentPools PoolLatents(const trainer::TtsModel& model, const corpus::CorpusManifest& corpus,
                        const std::vector<int>& indices) {
  if (!model.config().has_latent()) throw StageMismatch("model has no token latents to probe");
  LatentPools out;
  std::vector<RowVector> rows;
  for (int i : indices) {
    const corpus::UtteranceRecord& rec = corpus.utterances[i];
    const int factor = CoarseFactor(rec);
    if (factor < 0) continue;
    rows.push_back(model.PosteriorMeans(rec).colwise().mean());
    out.labels.push_back(factor);
  }
  out.pools.resize(static_cast<Eigen::Index>(rows.size()), model.config().d_z);
  for (size_t r = 0; r < rows.size(); ++r) out.pools.row(static_cast<Eigen::Index>(r)) = rows[r];
  return out;
}

}  // namespace fgtts::eval
