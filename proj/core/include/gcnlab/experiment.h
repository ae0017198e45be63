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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gcnlab/data.h"
#include "gcnlab/pipelines.h"
#include "gcnlab/smoothing.h"

namespace gcnlab {

// "0.005" for label rates, "20/class" for per-class counts.
std::string split_key(const SplitSpec& spec);
// "0.5%" or "20/class", used as table column headers.
std::string split_header(const SplitSpec& spec);

struct BenchPlan {
  std::filesystem::path dataset;
  std::vector<Method> methods;
  std::vector<SplitSpec> splits;
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::size_t jobs = 1;
  double budget_multiplier = 3.0;
  TrainConfig train;
  std::size_t validation_size = 500;
  std::size_t test_size = 1000;
  // Fill the wall_ms column. Off by default so that runs.csv is a pure
  // function of the plan.
  bool record_timing = false;

  void validate() const;
};

// Seeds used by one (split, run) cell. The split and the training RNG
// depend only on the run seed, so `gcnlab train --seed S` replays the
// bench cell with seed S.
std::uint64_t split_seed(std::uint64_t run_seed);
std::uint64_t training_seed(std::uint64_t run_seed);

// Per-class splits use the canonical test set when it has test_size
// vertices; label-rate splits always sample the test set.
SplitOptions split_options_for(const Dataset& ds, const SplitSpec& spec, std::size_t validation_size,
                               std::size_t test_size, std::uint64_t run_seed);

struct RunRecord {
  std::string method;
  std::string dataset;
  std::string split;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::size_t labels_added = 0;
  std::size_t epochs = 0;
  double wall_ms = 0.0;
  std::string error;  // non-empty when the cell failed
  std::vector<double> loss_history;

  bool ok() const { return error.empty(); }
};

// One method on one split: sample, run, score on the split's test set.
RunRecord run_cell(const Dataset& ds, Method method, const SplitSpec& spec, std::uint64_t run_seed,
                   const BenchPlan& plan, StrategyResult* detail = nullptr);

struct BenchOutcome {
  std::vector<RunRecord> records;  // ordered by (split, run, method)
  std::size_t failures = 0;
};

// Runs every (method, split, run) cell on a worker pool. Records are
// collected by cell index, so the output order never depends on scheduling.
BenchOutcome run_bench(const Dataset& ds, const BenchPlan& plan);

inline constexpr const char* kRunsCsvHeader = "method,dataset,rate,seed,accuracy,labels_added,epochs,wall_ms";

void write_runs_csv(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> read_runs_csv(std::istream& in);

// Markdown table, methods as rows and splits as columns, each cell the
// mean accuracy in percent (one decimal) over successful runs. Means are
// computed from the values as written to runs.csv.
std::string format_table(const std::vector<RunRecord>& records, const std::vector<Method>& methods,
                         const std::vector<SplitSpec>& splits, const std::string& title);

// Writes runs.csv, table.md and loss/<method>_<split>_<seed>.csv under plan.out.
void write_bench_outputs(const BenchOutcome& outcome, const BenchPlan& plan, const std::string& dataset_name);

// Over-smoothing demo artifacts: embed_layer<L>.csv (vertex,x,y,class),
// embed_layer<L>.svg and convergence.csv (iteration,deviation).
struct SmoothDemoOptions {
  std::filesystem::path out;
  std::size_t layers = 5;
  std::uint64_t seed = 0;
  std::size_t iterations = 1000;
  double gamma = 0.5;
};
struct SmoothDemoResult {
  std::vector<std::filesystem::path> files;
  double final_deviation = 0.0;
};
SmoothDemoResult smooth_demo(const LabeledGraph& lg, const SmoothDemoOptions& opts);

std::string scatter_svg(const DenseMatrix& points, const std::vector<std::size_t>& labels,
                        const std::string& title);

}  // namespace gcnlab
