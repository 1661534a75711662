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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "cli.h"
#include "fgtts/common/config.h"
#include "fgtts/corpus/manifest.h"
#include "fgtts/trainer/checkpoint.h"

namespace fgtts::cli {
namespace {

namespace fs = std::filesystem;

std::string TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fgtts_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int Call(std::vector<std::string> args) {
  args.insert(args.begin(), "fgtts");
  args.insert(args.begin() + 1, {"--log-level", "warn"});
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return Run(static_cast<int>(argv.size()), argv.data());
}

// Tiny corpus and model; enough utterances per coarse factor for the probe.
std::vector<std::string> Tiny(std::vector<std::string> args) {
  for (const char* kv :
       {"corpus.n_utterances=40", "corpus.min_tokens=8", "corpus.max_tokens=9",
        "corpus.token_vocab_size=8", "features.n_mels=20", "model.d_emb=8", "model.d_h=8",
        "model.d_att=8", "model.posterior_hidden=8", "model.prenet_dim=8",
        "model.decoder_hidden=8", "model.d_g=4", "model.ref_channels=2", "model.ref_hidden=4",
        "model.prior_hidden=8", "model.duration_hidden=4", "train.steps=6",
        "train.batch_size=4", "train.eval_every=100", "train.heldout_fraction=0.2",
        "eval.references=2", "eval.sentences_per_reference=2"}) {
    args.push_back("-s");
    args.push_back(kv);
  }
  return args;
}

TEST(CliTest, GenSyntheticIsDeterministic) {
  const std::string d = TempDir("gen");
  ASSERT_EQ(Call(Tiny({"gen-synthetic", "-o", d + "/a"})), 0);
  ASSERT_EQ(Call(Tiny({"gen-synthetic", "-o", d + "/b"})), 0);
  EXPECT_EQ(Slurp(fs::path(d) / "a" / "manifest.tsv"), Slurp(fs::path(d) / "b" / "manifest.tsv"));
  EXPECT_TRUE(corpus::LoadManifest(d + "/a") == corpus::LoadManifest(d + "/b"));
  EXPECT_TRUE(fs::exists(fs::path(d) / "a" / "config.txt"));
  EXPECT_TRUE(fs::exists(fs::path(d) / "a" / "inventory.tsv"));
}

TEST(CliTest, UsageErrorsExitTwo) {
  const std::string d = TempDir("usage");
  ASSERT_EQ(Call(Tiny({"gen-synthetic", "-o", d + "/c"})), 0);
  EXPECT_EQ(Call({}), kExitUsage);
  EXPECT_EQ(Call({"no-such-command"}), kExitUsage);
  EXPECT_EQ(Call({"train", "--corpus", d + "/c"}), kExitUsage);  // no --out
  EXPECT_EQ(Call({"train", "-s", "model.no_such_key=1", "--corpus", d + "/c", "-o", d + "/t"}),
            kExitUsage);
  EXPECT_EQ(Call(Tiny({"sweep", "--dims", "4", "--corpus", d + "/c", "-o", d + "/s"})), kExitUsage);

  ::testing::internal::CaptureStderr();
  const int rc = Call(Tiny({"train", "-s", "train.stage=stage2", "--corpus", d + "/c", "-o",
                            d + "/t2"}));
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_EQ(rc, kExitUsage);
  EXPECT_NE(err.find("train.stage1_checkpoint"), std::string::npos) << err;

  // Runtime failures exit 1.
  EXPECT_EQ(Call(Tiny({"train", "--corpus", d + "/missing", "-o", d + "/t3"})), kExitRuntime);
}

TEST(CliTest, TrainEvaluateSynthesize) {
  const std::string d = TempDir("pipeline");
  ASSERT_EQ(Call(Tiny({"gen-synthetic", "-o", d + "/c"})), 0);
  ASSERT_EQ(Call(Tiny({"train", "--corpus", d + "/c", "-o", d + "/s1"})), 0);
  ASSERT_EQ(Call(Tiny({"train", "-s", "train.stage=stage2", "-s",
                       "train.stage1_checkpoint=" + d + "/s1/checkpoint", "--corpus", d + "/c",
                       "-o", d + "/s2"})),
            0);
  const std::string ck = d + "/s2/checkpoint";
  EXPECT_EQ(trainer::LoadCheckpoint(ck).stage, "stage2");
  for (const char* protocol : {"posterior", "prior", "prior-aligned"}) {
    testing::internal::CaptureStdout();
    EXPECT_EQ(Call(Tiny({"evaluate", "--checkpoint", ck, "--corpus", d + "/c", "--protocol",
                         protocol, "-o", d + "/e"})),
              0);
    testing::internal::GetCapturedStdout();
    EXPECT_TRUE(fs::exists(fs::path(d) / "e" / (std::string(protocol) + ".records")));
  }
  EXPECT_EQ(Call(Tiny({"evaluate", "--checkpoint", ck, "--corpus", d + "/c", "--protocol", "nope",
                       "-o", d + "/e"})),
            kExitUsage);

  const std::string ref = (fs::path(d) / "c" / "features" / "syn00000.mel").string();
  ASSERT_EQ(Call({"synthesize", "--checkpoint", ck, "--tokens", "3 4 5", "--reference", ref, "-o",
                  d + "/y", "--temperature", "0"}),
            0);
  EXPECT_TRUE(fs::exists(fs::path(d) / "y" / "synth.mel"));
  EXPECT_EQ(Call({"synthesize", "--checkpoint", ck, "--text", "p03 p04", "--inventory",
                  d + "/c/inventory.tsv", "--reference", ref, "-o", d + "/y2"}),
            0);
  EXPECT_EQ(Call({"synthesize", "--checkpoint", ck, "--tokens", "3", "--no-reference", "-o",
                  d + "/y3"}),
            kExitUsage);
  ASSERT_EQ(Call({"copy-synth", "--checkpoint", d + "/s1/checkpoint", "--corpus", d + "/c",
                  "--utts", "syn00001,syn00002", "-o", d + "/cs"}),
            0);
  EXPECT_TRUE(fs::exists(fs::path(d) / "cs" / "syn00002.mel"));

  testing::internal::CaptureStdout();
  EXPECT_EQ(Call({"probe", "--checkpoint", d + "/s1/checkpoint", "--corpus", d + "/c"}), 0);
  EXPECT_NE(testing::internal::GetCapturedStdout().find("probe_accuracy"), std::string::npos);
}

TEST(CliTest, SnapshotReproducesRun) {
  const std::string d = TempDir("snapshot");
  ASSERT_EQ(Call(Tiny({"gen-synthetic", "-o", d + "/c"})), 0);
  ASSERT_EQ(Call(Tiny({"train", "--corpus", d + "/c", "-o", d + "/a"})), 0);
  ASSERT_EQ(Call({"train", "--config", d + "/a/config.txt", "--corpus", d + "/c", "-o", d + "/b"}),
            0);
  EXPECT_EQ(Slurp(fs::path(d) / "a" / "config.txt"), Slurp(fs::path(d) / "b" / "config.txt"));
  EXPECT_EQ(Slurp(fs::path(d) / "a" / "checkpoint" / "tensors.bin"),
            Slurp(fs::path(d) / "b" / "checkpoint" / "tensors.bin"));
}

TEST(CliTest, SweepWritesReportsAndTrend) {
  const std::string d = TempDir("sweep");
  testing::internal::CaptureStdout();
  ASSERT_EQ(Call(Tiny({"sweep", "--dims", "2,4", "-o", d + "/a"})), 0);
  ASSERT_EQ(Call(Tiny({"sweep", "--dims", "2,4", "-o", d + "/b"})), 0);
  testing::internal::GetCapturedStdout();
  for (const char* dim : {"dz2", "dz4"}) {
    EXPECT_TRUE(fs::exists(fs::path(d) / "a" / dim / "posterior.records"));
    EXPECT_TRUE(fs::exists(fs::path(d) / "a" / dim / "probe.tsv"));
  }
  const std::string trend = Slurp(fs::path(d) / "a" / "trend.tsv");
  EXPECT_EQ(std::count(trend.begin(), trend.end(), '\n'), 3);
  EXPECT_EQ(trend, Slurp(fs::path(d) / "b" / "trend.tsv"));
}

}  // namespace
}  // namespace fgtts::cli
