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

#ifndef FGTTS_EVALKIT_PROTOCOLS_H_
#define FGTTS_EVALKIT_PROTOCOLS_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fgtts/common/config.h"
#include "fgtts/common/matrix.h"
#include "fgtts/corpus/pitch.h"
#include "fgtts/corpus/types.h"
#include "fgtts/evalkit/probe.h"
#include "fgtts/trainer/model.h"

namespace fgtts::eval {

inline constexpr const char* kReportSchema = "#fgtts-eval v1";

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample stddev over utterances
  int count = 0;
};

struct ReportRow {
  std::string id;
  std::map<std::string, double> values;
  // Metrics that could not be computed for this row, with the reason.
  std::map<std::string, std::string> errors;
};

struct EvalReport {
  std::string model_tag;
  std::string protocol;  // "posterior" or "prior"
  std::vector<std::string> columns;  // metric names in display order
  std::vector<ReportRow> rows;

  // Mean and stddev of each column over the rows that have it.
  std::map<std::string, MetricSummary> Aggregates() const;

  // Tab-separated line records: a header, one "row" line per value, one
  // "error" line per failed metric and one "aggregate" line per column.
  std::string ToRecords() const;
  static EvalReport FromRecords(const std::string& text);
  // Aligned table of the aggregates, one line per column.
  std::string ToTable() const;
  void Save(const std::string& records_path, const std::string& table_path) const;
};

// Utterance-level embedding for similarity scores. Keys name the
// utterance being embedded: "<utt_id>" for corpus audio, "<utt_id>/syn" for
// copy synthesis and "<ref_id>/<sentence_id>" for prior samples.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual RowVector Embed(const std::string& key, const Matrix& log_mel) const = 0;
};

// Stand-in for a speaker-verification model: mean and stddev over frames
// of each mel-cepstral coefficient plus log mean f0, each z-scored with
// statistics fitted on a set of corpus utterances.
class SummaryEmbedder : public Embedder {
 public:
  SummaryEmbedder(const corpus::MelPitchEstimator* pitch,
                  const std::vector<const Matrix*>& fit_frames);
  RowVector Embed(const std::string& key, const Matrix& log_mel) const override;
  RowVector Raw(const Matrix& log_mel) const;

 private:
  const corpus::MelPitchEstimator* pitch_;
  RowVector mean_;
  RowVector scale_;
};

// Vectors produced by an external embedder, one "key<TAB>v1,v2,..." line
// each. Embed() throws InvalidInput for unknown keys.
class FileEmbedder : public Embedder {
 public:
  explicit FileEmbedder(const std::string& path);
  RowVector Embed(const std::string& key, const Matrix& log_mel) const override;

 private:
  std::map<std::string, RowVector> vectors_;
};

// Stand-in recogniser: each token segment is assigned the token id whose
// mean cepstral shape (c1..c13, so energy-invariant) is nearest.
class TokenMatcher {
 public:
  void Fit(const corpus::CorpusManifest& corpus, const std::vector<int>& indices);
  std::vector<int> Recognize(const Matrix& log_mel, const std::vector<int>& durations) const;
  bool fitted() const { return !centroids_.empty(); }

 private:
  std::map<int, RowVector> centroids_;
};

// "utt_id<TAB>text" lines from an external recogniser.
std::map<std::string, std::string> LoadHypotheses(const std::string& path);

// Everything the protocols need besides the model.
struct EvalContext {
  // Shared settings from the resolved config (eval.* and corpus.*).
  double posterior_temperature = 1.0;
  double prior_temperature = 1.0;
  uint64_t seed = 7;
  int references = 15;
  int sentences_per_reference = 14;
  std::vector<double> f0_bases;  // for the coarse match; empty disables it
  std::string model_tag;

  const corpus::MelPitchEstimator* pitch = nullptr;  // required
  const Embedder* embedder = nullptr;                // optional
  const TokenMatcher* matcher = nullptr;             // optional
  const std::map<std::string, std::string>* hypotheses = nullptr;  // optional

  static EvalContext FromConfig(const Config& config);
};

// Copy synthesis of every listed utterance from a posterior sample at the
// configured temperature with ground-truth durations, scored with MCD,
// FFE, per-token prosody stddevs and (with an embedder) similarity to the
// original. With `model` null the synthesis is the utterance itself, which
// gives the real-speech row.
EvalReport EvaluatePosterior(const trainer::TtsModel* model,
                             const corpus::CorpusManifest& corpus,
                             const std::vector<int>& indices, const EvalContext& ctx);

// Prior sampling: the first `references` usable utterances of `indices`
// serve as references and the next `sentences_per_reference` as sentences;
// every pair is synthesised from text. Rows report WER (with a matcher or
// hypotheses), prosody stddevs, similarity to the reference, mean f0 and
// the coarse match against the reference's factor.
EvalReport EvaluatePrior(const trainer::TtsModel& model, const corpus::CorpusManifest& corpus,
                         const std::vector<int>& indices, const EvalContext& ctx);

// Prior sampling of each utterance from its own text and reference with
// its ground-truth durations, so MCD and FFE against it are defined.
EvalReport EvaluatePriorAligned(const trainer::TtsModel& model,
                                const corpus::CorpusManifest& corpus,
                                const std::vector<int>& indices, const EvalContext& ctx);

// Mean-pooled posterior means of each utterance labelled with its coarse
// factor. Utterances without a "c<k>" label are skipped.
struct LatentPools {
  Matrix pools;
  std::vector<int> labels;
};
LatentPools PoolLatents(const trainer::TtsModel& model, const corpus::CorpusManifest& corpus,
                        const std::vector<int>& indices);

}  // namespace fgtts::eval

#endif  // FGTTS_EVALKIT_PROTOCOLS_H_
