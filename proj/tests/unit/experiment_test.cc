// Copyright 2026 The gcnlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "gcnlab/checkpoint.h"
#include "gcnlab/experiment.h"
#include "test_support.h"

namespace gcnlab {
namespace {

namespace fs = std::filesystem;
using testing::scratch_dir;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" GCNLAB_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

const std::string kSmall = " --validation-size 30 --test-size 100";

// Small planted-partition dataset on disk, shared by the CLI tests.
fs::path sbm_on_disk() {
  static const fs::path dir = [] {
    testing::SbmOptions o;
    o.n = 300;
    o.classes = 3;
    o.p_in = 0.04;
    o.canonical_test = 100;
    auto root = scratch_dir("cli_data");
    save_dataset(testing::sbm_dataset(o), root / "sbm");
    return root / "sbm";
  }();
  return dir;
}

TEST(SplitKey, Formatting) {
  EXPECT_EQ(split_key(LabelRate{0.005}), "0.005");
  EXPECT_EQ(split_key(LabelRate{0.03}), "0.03");
  EXPECT_EQ(split_key(PerClass{20}), "20/class");
  EXPECT_EQ(split_header(LabelRate{0.005}), "0.5%");
  EXPECT_EQ(split_header(LabelRate{0.0003}), "0.03%");
}

TEST(RunsCsv, RoundTrip) {
  std::vector<RunRecord> recs(2);
  recs[0] = {"lp", "cora", "0.005", 3, 0.5625, 0, 0, 0, "", {}};
  recs[1] = {"union", "cora", "0.005", 4, 0, 120, 400, 12, "boom", {}};
  recs[1].accuracy = std::nan("");
  std::stringstream ss;
  write_runs_csv(recs, ss);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kRunsCsvHeader);
  auto back = read_runs_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].method, "lp");
  EXPECT_EQ(back[0].accuracy, 0.5625);
  EXPECT_TRUE(back[0].ok());
  EXPECT_FALSE(back[1].ok());
  EXPECT_EQ(back[1].labels_added, 120u);
  std::stringstream bad("wrong,header\n");
  EXPECT_THROW(read_runs_csv(bad), ParseError);
}

TEST(FormatTable, MeansOfPrintedAccuracies) {
  std::vector<RunRecord> recs;
  for (double a : {0.5, 0.6, 0.71}) recs.push_back({"lp", "d", "0.01", 0, a, 0, 0, 0, "", {}});
  recs.push_back({"lp", "d", "0.01", 0, 0.0, 0, 0, 0, "failed", {}});
  auto t = format_table(recs, {Method::kLp, Method::kUnion}, {LabelRate{0.01}}, "d");
  EXPECT_NE(t.find("| Label Rate | 1% |"), std::string::npos);
  EXPECT_NE(t.find("| lp | 60.3 |"), std::string::npos);
  EXPECT_NE(t.find("| union | - |"), std::string::npos);
}

TEST(BenchPlan, Validation) {
  BenchPlan p;
  p.methods = {Method::kLp};
  p.splits = {LabelRate{0.1}};
  EXPECT_NO_THROW(p.validate());
  p.runs = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.runs = 1;
  p.methods.clear();
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(RunBench, ParallelMatchesSequential) {
  auto ds = load_dataset(sbm_on_disk());
  BenchPlan p;
  p.methods = {Method::kLp, Method::kGcnMinusV, Method::kCoTrain};
  p.splits = {LabelRate{0.03}};
  p.runs = 2;
  p.seed = 9;
  p.validation_size = 0;
  p.test_size = 100;
  p.train.max_epochs = 40;
  auto seq = run_bench(ds, p);
  p.jobs = 4;
  auto par = run_bench(ds, p);
  ASSERT_EQ(seq.records.size(), 6u);
  std::stringstream a, b;
  write_runs_csv(seq.records, a);
  write_runs_csv(par.records, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(seq.failures, 0u);
  // Record order is (split, run, method).
  EXPECT_EQ(seq.records[0].method, "lp");
  EXPECT_EQ(seq.records[3].seed, 10u);
}

TEST(RunBench, FailedCellsAreRecorded) {
  auto ds = load_dataset(sbm_on_disk());
  BenchPlan p;
  p.methods = {Method::kLp};
  p.splits = {PerClass{500}, LabelRate{0.05}};
  p.runs = 1;
  p.validation_size = 0;
  p.test_size = 100;
  auto out = run_bench(ds, p);
  EXPECT_EQ(out.failures, 1u);
  EXPECT_FALSE(out.records[0].ok());
  EXPECT_TRUE(out.records[1].ok());
}

TEST(Cli, BenchIsReproducibleAndTableMatchesCsv) {
  auto out = scratch_dir("bench");
  const std::string args = "bench --dataset " + sbm_on_disk().string() +
                           " --method lp,gcn-v,selftrain --rate 0.02,0.05 --runs 2 --seed 3 --jobs 3 --epochs 30" + kSmall;
  ASSERT_EQ(run_cli(args + " --out " + (out / "a").string()), 0);
  ASSERT_EQ(run_cli(args + " --out " + (out / "b").string()), 0);
  EXPECT_EQ(slurp(out / "a" / "runs.csv"), slurp(out / "b" / "runs.csv"));
  EXPECT_EQ(slurp(out / "a" / "table.md"), slurp(out / "b" / "table.md"));
  EXPECT_EQ(count_lines(out / "a" / "runs.csv"), 1u + 3 * 2 * 2);
  EXPECT_TRUE(fs::exists(out / "a" / "loss" / "gcn-v_0.02_3.csv"));
  EXPECT_FALSE(fs::exists(out / "a" / "loss" / "lp_0.02_3.csv"));

  // Recompute every table cell from the CSV rows.
  std::ifstream csv(out / "a" / "runs.csv");
  auto recs = read_runs_csv(csv);
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  for (const auto& r : recs) cells[{r.method, r.split}].push_back(r.accuracy);
  const std::string table = slurp(out / "a" / "table.md");
  for (const std::string m : {"lp", "gcn-v", "selftrain"}) {
    std::string row = "| " + m + " |";
    for (const std::string s : {"0.02", "0.05"}) {
      const auto& v = cells[{m, s}];
      ASSERT_EQ(v.size(), 2u);
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.1f |", 100.0 * (v[0] + v[1]) / 2.0);
      row += buf;
    }
    EXPECT_NE(table.find(row), std::string::npos) << row << "\n" << table;
  }
}

TEST(Cli, UsageErrorsBeforeAnyWork) {
  auto out = scratch_dir("usage");
  EXPECT_EQ(run_cli("bench --dataset " + sbm_on_disk().string() + " --method lp,bogus --out " + (out / "x").string()), 2);
  EXPECT_FALSE(fs::exists(out / "x"));
  EXPECT_EQ(run_cli("train --dataset " + sbm_on_disk().string() + " --rate 0.1 --per-class 3"), 2);
  EXPECT_EQ(run_cli("bench --dataset /nonexistent/dir --method lp"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("smooth-demo --layers 11"), 2);
}

TEST(Cli, ExitCodeReflectsFailedCells) {
  auto out = scratch_dir("failcell");
  EXPECT_EQ(run_cli("bench --dataset " + sbm_on_disk().string() + " --method lp --per-class 500 --runs 1" + kSmall + " --out " +
                    out.string()),
            1);
  std::ifstream csv(out / "runs.csv");
  auto recs = read_runs_csv(csv);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_FALSE(recs[0].ok());
}

TEST(Cli, DatasetRootFromEnvironment) {
  auto out = scratch_dir("envroot");
  EXPECT_EQ(run_cli("bench --dataset sbm --method lp --rate 0.05 --runs 1" + kSmall + " --out " + out.string(),
                    "GCNLAB_DATA=\"" + sbm_on_disk().parent_path().string() + "\""),
            0);
  EXPECT_TRUE(fs::exists(out / "runs.csv"));
}

TEST(Cli, TrainWritesCheckpointExceptForLp) {
  auto out = scratch_dir("train");
  ASSERT_EQ(run_cli("train --dataset " + sbm_on_disk().string() + " --method gcn-v --per-class 5 --epochs 20" + kSmall + " --out " +
                    (out / "g").string()),
            0);
  auto model = load_checkpoint(out / "g" / "model.ckpt");
  EXPECT_EQ(model.layer_dims.back(), 3u);
  EXPECT_EQ(count_lines(out / "g" / "loss.csv"), 21u);
  ASSERT_EQ(run_cli("train --dataset " + sbm_on_disk().string() + " --method lp --per-class 5" + kSmall + " --out " +
                    (out / "l").string()),
            0);
  EXPECT_FALSE(fs::exists(out / "l" / "model.ckpt"));
}

TEST(Cli, SmoothDemoArtifacts) {
  auto out = scratch_dir("smooth");
  ASSERT_EQ(run_cli("smooth-demo --seed 4 --out " + (out / "a").string()), 0);
  ASSERT_EQ(run_cli("smooth-demo --seed 4 --out " + (out / "b").string()), 0);
  for (int l = 1; l <= 5; ++l) {
    const std::string stem = "embed_layer" + std::to_string(l);
    EXPECT_EQ(count_lines(out / "a" / (stem + ".csv")), 35u);
    EXPECT_EQ(slurp(out / "a" / (stem + ".svg")), slurp(out / "b" / (stem + ".svg")));
  }
  std::ifstream conv(out / "a" / "convergence.csv");
  std::string line, last;
  while (std::getline(conv, line)) last = line;
  EXPECT_EQ(last.substr(0, 5), "1000,");
  EXPECT_LT(std::stod(last.substr(5)), 1e-6);
}

TEST(SmoothDemo, LayerLimit) {
  SmoothDemoOptions o;
  o.out = scratch_dir("smooth_limit");
  o.layers = 11;
  EXPECT_THROW(smooth_demo(karate_club(), o), InvalidArgument);
}

}  // namespace
}  // namespace gcnlab
