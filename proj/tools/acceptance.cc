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

// Acceptance suite. Runs the unit-test groups behind criteria 1-3 and the
// sweep, two-stage/joint comparison, posterior/prior ordering and
// reproducibility experiments behind criteria 4-8 through the fgtts
// command, then prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "fgtts/common/config.h"
#include "fgtts/common/error.h"
#include "fgtts/common/strings.h"
#include "fgtts/evalkit/protocols.h"

namespace fs = std::filesystem;
using fgtts::eval::EvalReport;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Paths {
  std::string tests_dir;
  std::string cli;
  std::string config;
  std::string work;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw fgtts::InvalidInput("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

// Runs a shell command with output appended to `log`; true on exit 0.
bool Shell(const std::string& cmd, const fs::path& log) {
  const std::string full = cmd + " >> " + Quote(log.string()) + " 2>&1";
  std::ofstream(log, std::ios::app) << "$ " << cmd << "\n";
  return std::system(full.c_str()) == 0;
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------- unit-test groups

struct Group {
  std::string binary;
  std::string filter;
};

Outcome RunGroups(const Paths& p, const std::string& name, const std::vector<Group>& groups,
                  double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path log = fs::path(p.work) / (name + ".log");
  std::vector<std::string> failed;
  for (const Group& g : groups) {
    const std::string bin = (fs::path(p.tests_dir) / g.binary).string();
    if (!Shell(Quote(bin) + " --gtest_filter=" + Quote(g.filter), log)) failed.push_back(g.binary);
  }
  const double secs = Seconds(t0);
  Outcome o;
  o.pass = failed.empty() && secs < budget_s;
  o.detail = failed.empty() ? fmt::format("{} groups in {:.1f}s (budget {:.0f}s)", groups.size(),
                                          secs, budget_s)
                            : "failing: " + fgtts::Join(failed, ", ") + " (see " +
                                  log.string() + ")";
  return o;
}

// Every worked example and oracle value of the modules.
const std::vector<Group> kOracleGroups{
    {"nn_graph_test", "OpGradTest.GaussianKl:GraphTest.*:AdamTest.*"},
    {"corpus_test", "*"},
    {"text_frontend_test", "*"},
    {"acoustic_model_test",
     "TextEncoderTest.*:AttentionTest.SingleFrameTakesAllWeight:"
     "AttentionTest.UniformWeightsGiveFrameMean:PosteriorTest.*:"
     "ReparameterizeTest.StandardPosteriorPassesNoiseThrough:ReparameterizeTest.MonteCarloStddev:"
     "UpsampleTest.Examples:DecoderTest.*:Stage1LossTest.*"},
    {"prior_network_test",
     "ReferenceEncoderTest.*:DurationChannelTest.*:ArPriorTest.SingleTokenDependsOnlyOnStartAndGlobal:"
     "ArPriorTest.SampleShapesAndDurationFloor:Stage2KlTest.*"},
    {"evalkit_test", "MetricsTest.*:ProbeTest.*:ProtocolTest.*"},
};

// Randomised structural properties, each over at least 100 cases.
const std::vector<Group> kInvariantGroups{
    {"acoustic_model_test",
     "AttentionTest.RowsAreNormalisedOnRandomInputs:UpsampleTest.LengthAndOwnershipOnRandomDurations:"
     "ReparameterizeTest.ZeroNoiseIsIdentity"},
    {"prior_network_test",
     "ArPriorTest.CausalityUnderPerturbation:ArPriorTest.CausalityWithCurrentEncoding:"
     "ArPriorTest.TemperatureZeroIsTheMeanRollout"},
    {"trainer_test", "CheckpointTest.RoundTripOnRandomParameterSets:Stage2Test.FrozenHashHoldsOnRandomUpdates"},
};

// Finite-difference checks on the tiny configuration.
const std::vector<Group> kGradientGroups{
    {"nn_graph_test", "OpGradTest.*"},
    {"acoustic_model_test", "Stage1GradientTest.*"},
    {"prior_network_test", "Stage2GradientTest.*"},
};

// ------------------------------------------------------------- experiments

struct TrendRow {
  int d_z = 0;
  double mcd = 0.0;
  double ffe = 0.0;
  double probe = 0.0;
};

std::vector<TrendRow> ReadTrend(const fs::path& path) {
  std::istringstream in(Slurp(path));
  std::string line;
  std::getline(in, line);  // header
  std::vector<TrendRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = fgtts::Split(line, "\t");
    if (f.size() != 4) throw fgtts::InvalidInput("bad trend line: " + line);
    rows.push_back({static_cast<int>(fgtts::ParseDouble(f[0])), fgtts::ParseDouble(f[1]),
                    fgtts::ParseDouble(f[2]), fgtts::ParseDouble(f[3])});
  }
  return rows;
}

// Compares two text files field by field, numbers within `tol`.
bool SameNumbers(const fs::path& a, const fs::path& b, double tol, std::string* why) {
  std::istringstream ia(Slurp(a)), ib(Slurp(b));
  std::string la, lb;
  int line = 0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(ia, la));
    const bool gb = static_cast<bool>(std::getline(ib, lb));
    ++line;
    if (!ga && !gb) return true;
    if (ga != gb) {
      *why = fmt::format("{}: line count differs", a.filename().string());
      return false;
    }
    auto fa = fgtts::Split(la, "\t");
    auto fb = fgtts::Split(lb, "\t");
    if (fa.size() != fb.size()) {
      *why = fmt::format("{}:{}: field count differs", a.string(), line);
      return false;
    }
    for (size_t i = 0; i < fa.size(); ++i) {
      if (fa[i] == fb[i]) continue;
      try {
        const double x = fgtts::ParseDouble(fa[i]), y = fgtts::ParseDouble(fb[i]);
        if (std::abs(x - y) <= tol) continue;
        *why = fmt::format("{}:{}: {} vs {}", a.string(), line, fa[i], fb[i]);
      } catch (const fgtts::Error&) {
        *why = fmt::format("{}:{}: '{}' vs '{}'", a.string(), line, fa[i], fb[i]);
      }
      return false;
    }
  }
}

// The prior overfits long before the stage-1 schedule ends, so stage 2 runs
// shorter and keeps its best held-out step.
constexpr const char* kStage2Schedule =
    "-s train.steps=2000 -s train.decay_steps=1000 -s train.eval_every=100 -s train.keep_best=true";

class Experiments {
 public:
  explicit Experiments(const Paths& p) : p_(p), log_(fs::path(p.work) / "experiments.log") {}

  // `args` starts with the subcommand; the config goes right after it.
  std::string Cli(const std::string& args) const {
    const size_t sp = args.find(' ');
    return Quote(p_.cli) + " " + args.substr(0, sp) + " -c " + Quote(p_.config) +
           (sp == std::string::npos ? "" : args.substr(sp));
  }

  // The sweep, run once per output directory on demand.
  bool Sweep(const std::string& name) {
    if (done_.count(name)) return ok_[name];
    const fs::path out = fs::path(p_.work) / name;
    fs::remove_all(out);
    const auto t0 = std::chrono::steady_clock::now();
    ok_[name] = Shell(Cli("sweep --dims 2,8,16 -o " + Quote(out.string())), log_);
    seconds_[name] = Seconds(t0);
    done_.insert(name);
    return ok_[name];
  }
  double SweepSeconds(const std::string& name) const { return seconds_.at(name); }
  fs::path Dir(const std::string& name) const { return fs::path(p_.work) / name; }
  const fs::path& log() const { return log_; }

  // Two-stage (d_z 16, d_g 16) and joint (d_z 64, d_g 16) models with
  // their prior-sampling reports.
  bool Comparison() {
    if (comparison_done_) return comparison_ok_;
    comparison_done_ = true;
    if (!Sweep("sweep")) return comparison_ok_ = false;
    const auto t0 = std::chrono::steady_clock::now();
    const std::string corpus = Quote((Dir("sweep") / "corpus").string());
    const std::string s1 = (Dir("sweep") / "dz16" / "checkpoint").string();
    const fs::path two = Dir("two_stage"), joint = Dir("joint");
    fs::remove_all(two);
    fs::remove_all(joint);
    comparison_ok_ =
        Shell(Cli("train -s train.stage=stage2 -s model.d_z=16 -s model.d_g=16 -s "
                  "train.stage1_checkpoint=" + Quote(s1) + " " + kStage2Schedule +
                  " --corpus " + corpus + " -o " + Quote(two.string())), log_) &&
        Shell(Cli("train -s train.stage=joint_baseline -s model.d_z=64 -s model.d_g=16 --corpus " +
                  corpus + " -o " + Quote(joint.string())), log_);
    for (const fs::path& d : {two, joint}) {
      comparison_ok_ = comparison_ok_ &&
                       Shell(Cli("evaluate --protocol prior --checkpoint " +
                                 Quote((d / "checkpoint").string()) + " --corpus " + corpus +
                                 " -o " + Quote((d / "eval").string())), log_);
    }
    comparison_seconds_ = Seconds(t0) + SweepSeconds("sweep") / 3.0;
    return comparison_ok_;
  }
  double ComparisonSeconds() const { return comparison_seconds_; }

 private:
  Paths p_;
  fs::path log_;
  std::set<std::string> done_;
  std::map<std::string, bool> ok_;
  std::map<std::string, double> seconds_;
  bool comparison_done_ = false;
  bool comparison_ok_ = false;
  double comparison_seconds_ = 0.0;
};

EvalReport LoadReport(const fs::path& p) { return EvalReport::FromRecords(Slurp(p)); }

fgtts::eval::MetricSummary Aggregate(const EvalReport& r, const std::string& metric) {
  const auto agg = r.Aggregates();
  auto it = agg.find(metric);
  if (it == agg.end()) throw fgtts::InvalidInput("report has no " + metric);
  return it->second;
}

Outcome SweepCorpusCheck(Experiments& ex) {
  const fgtts::Config c = fgtts::Config::FromFile((ex.Dir("sweep") / "config.txt").string());
  Outcome o;
  const int n = c.GetInt("corpus.n_utterances"), k = c.GetInt("corpus.n_coarse_factors");
  o.pass = n >= 500 && k == 4;
  o.detail = fmt::format("corpus {} utterances, {} factors", n, k);
  return o;
}

Outcome Criterion4(Experiments& ex) {
  if (!ex.Sweep("sweep")) return {false, "sweep failed, see " + ex.log().string()};
  Outcome size = SweepCorpusCheck(ex);
  auto t = ReadTrend(ex.Dir("sweep") / "trend.tsv");
  if (t.size() != 3) return {false, "trend has wrong shape"};
  const bool monotone = t[0].mcd > t[1].mcd && t[1].mcd > t[2].mcd;
  const bool ratio = t[2].mcd <= 0.9 * t[0].mcd;
  const double secs = ex.SweepSeconds("sweep");
  Outcome o;
  o.pass = size.pass && monotone && ratio && secs <= 4 * 3600.0;
  o.detail = fmt::format("MCD d_z=2 {:.4f}, 8 {:.4f}, 16 {:.4f}; ratio {:.3f} (<= 0.9); {}; {:.0f}s",
                         t[0].mcd, t[1].mcd, t[2].mcd, t[2].mcd / t[0].mcd, size.detail, secs);
  return o;
}

Outcome Criterion5(Experiments& ex) {
  if (!ex.Sweep("sweep")) return {false, "sweep failed, see " + ex.log().string()};
  auto t = ReadTrend(ex.Dir("sweep") / "trend.tsv");
  if (t.size() != 3) return {false, "trend has wrong shape"};
  const double gain = t[2].probe - t[0].probe;
  return {gain >= 0.10, fmt::format("probe accuracy d_z=2 {:.4f}, 8 {:.4f}, 16 {:.4f}; gain {:+.1f}pp (>= 10)",
                                    t[0].probe, t[1].probe, t[2].probe, 100.0 * gain)};
}

Outcome Criterion6(Experiments& ex) {
  if (!ex.Comparison()) return {false, "training or evaluation failed, see " + ex.log().string()};
  const auto two = Aggregate(LoadReport(ex.Dir("two_stage") / "eval" / "prior.records"), "coarse_match");
  const auto joint = Aggregate(LoadReport(ex.Dir("joint") / "eval" / "prior.records"), "coarse_match");
  const double secs = ex.ComparisonSeconds();
  Outcome o;
  o.pass = two.count >= 200 && joint.count >= 200 && two.mean > joint.mean && secs <= 1.5 * 3600.0;
  o.detail = fmt::format("coarse match two-stage {:.4f} (n={}) vs joint d_z=64 {:.4f} (n={}); {:.0f}s",
                         two.mean, two.count, joint.mean, joint.count, secs);
  return o;
}

Outcome Criterion7(Experiments& ex) {
  if (!ex.Comparison()) return {false, "training failed, see " + ex.log().string()};
  const fs::path two = ex.Dir("two_stage");
  const std::string corpus = Quote((ex.Dir("sweep") / "corpus").string());
  const std::string ck = Quote((two / "checkpoint").string());
  for (const char* protocol : {"posterior", "prior-aligned"}) {
    if (!Shell(ex.Cli(std::string("evaluate --protocol ") + protocol + " --checkpoint " + ck +
                      " --corpus " + corpus + " -o " + Quote((two / "eval").string())),
               ex.log())) {
      return {false, "evaluation failed, see " + ex.log().string()};
    }
  }
  const auto post = Aggregate(LoadReport(two / "eval" / "posterior.records"), "ffe");
  const auto prior = Aggregate(LoadReport(two / "eval" / "prior-aligned.records"), "ffe");
  return {post.count == prior.count && post.mean < prior.mean,
          fmt::format("held-out FFE copy synthesis {:.4f} vs prior sampling {:.4f} on {} utterances",
                      post.mean, prior.mean, post.count)};
}

Outcome Criterion8(Experiments& ex) {
  if (!ex.Sweep("sweep") || !ex.Sweep("sweep_rerun")) {
    return {false, "sweep failed, see " + ex.log().string()};
  }
  std::vector<fs::path> files{"trend.tsv"};
  for (const char* d : {"dz2", "dz8", "dz16"}) {
    files.push_back(fs::path(d) / "posterior.records");
    files.push_back(fs::path(d) / "probe.tsv");
    files.push_back(fs::path(d) / "checkpoint" / "metrics.tsv");
  }
  for (const fs::path& f : files) {
    std::string why;
    if (!SameNumbers(ex.Dir("sweep") / f, ex.Dir("sweep_rerun") / f, 1e-6, &why)) {
      return {false, why};
    }
  }
  return {true, fmt::format("{} report files agree within 1e-6", files.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgtts acceptance suite"};
  Paths p;
  std::vector<int> only;
  app.add_option("--tests-dir", p.tests_dir, "directory with the unit-test binaries")->required();
  app.add_option("--cli", p.cli, "fgtts executable")->required();
  app.add_option("--config", p.config, "experiment config")->required();
  app.add_option("--work", p.work, "scratch directory")->required();
  app.add_option("--criteria", only, "subset of criteria to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(p.work);
  Experiments ex(p);
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [&] { return RunGroups(p, "oracles", kOracleGroups, 60.0); }},
      {2, [&] { return RunGroups(p, "invariants", kInvariantGroups, 300.0); }},
      {3, [&] { return RunGroups(p, "gradients", kGradientGroups, 120.0); }},
      {4, [&] { return Criterion4(ex); }},
      {5, [&] { return Criterion5(ex); }},
      {6, [&] { return Criterion6(ex); }},
      {7, [&] { return Criterion7(ex); }},
      {8, [&] { return Criterion8(ex); }},
  };
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("criterion {}: {}  {}", id, o.pass ? "PASS" : "FAIL", o.detail)
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
