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

// gcnlab command line: bench, train, smooth-demo, stats.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gcnlab/checkpoint.h"
#include "gcnlab/data.h"
#include "gcnlab/error.h"
#include "gcnlab/experiment.h"
#include "gcnlab/pipelines.h"
#include "gcnlab/smoothing.h"

namespace fs = std::filesystem;
using namespace gcnlab;

namespace {

constexpr int kUsageError = 2;

// --dataset accepts a directory, or a bare name looked up under $GCNLAB_DATA
// (default ./data).
fs::path resolve_dataset(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_directory(p)) return p;
  const char* root = std::getenv("GCNLAB_DATA");
  fs::path candidate = fs::path(root && *root ? root : "data") / arg;
  if (fs::is_directory(candidate)) return candidate;
  throw InvalidArgument("dataset not found: " + arg + " (also tried " + candidate.string() + ")");
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.insert(out.end(), all_methods().begin(), all_methods().end());
    } else {
      out.push_back(parse_method(n));
    }
  }
  return out;
}

// Shared by bench and train.
struct CommonArgs {
  std::string dataset;
  std::vector<std::string> methods;
  std::vector<double> rates;
  std::size_t per_class = 0;
  std::uint64_t seed = 0;
  fs::path out = "out";
  double budget_multiplier = 3.0;
  bool no_feature_normalize = false;
  std::size_t layers = 2;
  std::size_t epochs = 200;
  std::size_t validation_size = 500;
  std::size_t test_size = 1000;

  std::vector<SplitSpec> splits() const {
    std::vector<SplitSpec> s;
    if (per_class > 0) s.push_back(PerClass{per_class});
    for (double r : rates) s.push_back(LabelRate{r});
    if (s.empty()) s.push_back(PerClass{20});
    return s;
  }
  TrainConfig train_config() const {
    TrainConfig t;
    t.normalize_features = !no_feature_normalize;
    t.layers = layers;
    t.max_epochs = epochs;
    return t;
  }
};

void add_common(CLI::App* cmd, CommonArgs& a, bool many_methods) {
  cmd->add_option("--dataset", a.dataset, "dataset directory or name under $GCNLAB_DATA")->required();
  auto* m = cmd->add_option("--method", a.methods,
                            many_methods ? "methods, comma separated (or 'all')" : "method name")
                ->delimiter(',');
  m->check([](const std::string& v) -> std::string {
    if (v == "all") return {};
    try {
      parse_method(v);
    } catch (const std::exception&) {
      return "unknown method '" + v + "'";
    }
    return {};
  });
  if (!many_methods) m->expected(1);
  auto* rate = cmd->add_option("--rate", a.rates, "label rates, comma separated")->delimiter(',');
  rate->check(CLI::Range(0.0, 1.0));
  auto* pc = cmd->add_option("--per-class", a.per_class, "labels per class")->check(CLI::PositiveNumber);
  rate->excludes(pc);
  cmd->add_option("--seed", a.seed, "base seed");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--budget-multiplier", a.budget_multiplier, "label budget multiplier")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-feature-normalize", a.no_feature_normalize, "use raw feature rows");
  cmd->add_option("--layers", a.layers, "graph convolution layers")->check(CLI::Range(1, 10));
  cmd->add_option("--epochs", a.epochs, "max training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--validation-size", a.validation_size, "validation vertices (gcn+v only reads them)");
  cmd->add_option("--test-size", a.test_size, "test vertices")->check(CLI::PositiveNumber);
}

int cmd_bench(const CommonArgs& a, std::size_t runs, std::size_t jobs, bool timing) {
  BenchPlan plan;
  plan.dataset = resolve_dataset(a.dataset);
  plan.methods = a.methods.empty() ? all_methods() : parse_methods(a.methods);
  plan.splits = a.splits();
  plan.runs = runs;
  plan.seed = a.seed;
  plan.out = a.out;
  plan.jobs = jobs;
  plan.budget_multiplier = a.budget_multiplier;
  plan.train = a.train_config();
  plan.validation_size = a.validation_size;
  plan.test_size = a.test_size;
  plan.record_timing = timing;
  plan.validate();

  const Dataset ds = load_dataset(plan.dataset);
  const BenchOutcome outcome = run_bench(ds, plan);
  write_bench_outputs(outcome, plan, ds.name);
  for (const auto& r : outcome.records)
    if (!r.ok())
      std::fprintf(stderr, "cell failed: %s %s seed=%llu: %s\n", r.method.c_str(), r.split.c_str(),
                   static_cast<unsigned long long>(r.seed), r.error.c_str());
  std::cout << format_table(outcome.records, plan.methods, plan.splits, ds.name);
  std::printf("\nseed base %llu, %zu cells, %zu failed, output in %s\n",
              static_cast<unsigned long long>(plan.seed), outcome.records.size(), outcome.failures,
              plan.out.string().c_str());
  return outcome.failures == 0 ? 0 : 1;
}

int cmd_train(const CommonArgs& a) {
  if (a.methods.size() > 1) throw InvalidArgument("train takes a single --method");
  const Method method = a.methods.empty() ? Method::kGcnMinusV : parse_method(a.methods.front());
  const auto splits = a.splits();
  if (splits.size() != 1) throw InvalidArgument("train takes a single split");

  BenchPlan plan;
  plan.methods = {method};
  plan.splits = splits;
  plan.runs = 1;
  plan.seed = a.seed;
  plan.budget_multiplier = a.budget_multiplier;
  plan.train = a.train_config();
  plan.validation_size = a.validation_size;
  plan.test_size = a.test_size;

  const Dataset ds = load_dataset(resolve_dataset(a.dataset));
  StrategyResult detail;
  RunRecord rec = run_cell(ds, method, splits.front(), a.seed, plan, &detail);
  if (!rec.ok()) {
    std::fprintf(stderr, "error: %s\n", rec.error.c_str());
    return 1;
  }
  fs::create_directories(a.out);
  std::printf("method %s, dataset %s, split %s, seed %llu\n", rec.method.c_str(), rec.dataset.c_str(),
              rec.split.c_str(), static_cast<unsigned long long>(rec.seed));
  std::printf("accuracy %.4f\n", rec.accuracy);
  std::printf("labels added %zu\n", rec.labels_added);
  if (detail.training) {
    const fs::path loss = a.out / "loss.csv";
    std::ofstream out(loss);
    out << "epoch,loss\n";
    const auto& h = detail.training->loss_history;
    for (std::size_t e = 0; e < h.size(); ++e) out << e << ',' << h[e] << '\n';
    const fs::path ckpt = a.out / "model.ckpt";
    save_checkpoint(detail.training->model, ckpt);
    std::printf("epochs %zu\nloss curve %s\ncheckpoint %s\n", rec.epochs, loss.string().c_str(),
                ckpt.string().c_str());
  } else {
    std::printf("no parameters, no checkpoint written\n");
  }
  return 0;
}

int cmd_stats(const std::string& dataset) {
  const Dataset ds = load_dataset(resolve_dataset(dataset));
  const StatsReport s = validate_stats(ds);
  std::printf("%s: nodes %zu, edges %zu, classes %zu, features %zu, components %zu, isolated %zu\n",
              ds.name.c_str(), s.nodes, s.edges, s.classes, s.features, s.components, s.isolated.size());
  return 0;
}

int cmd_smooth_demo(const std::string& graph, const SmoothDemoOptions& opts) {
  LabeledGraph lg = karate_club();
  if (!graph.empty() && graph != "karate") {
    std::ifstream in(graph);
    if (!in) throw InvalidArgument("cannot open " + graph);
    lg = parse_labeled_graph(in);
  }
  const SmoothDemoResult r = smooth_demo(lg, opts);
  for (const auto& f : r.files) std::printf("wrote %s\n", f.string().c_str());
  std::printf("final deviation %.3e after %zu iterations\n", r.final_deviation, opts.iterations);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcnlab: graph convolution experiments"};
  app.require_subcommand(1);

  CommonArgs bench_args;
  std::size_t runs = 10;
  std::size_t jobs = 1;
  bool timing = false;
  auto* bench = app.add_subcommand("bench", "run every (method, split, seed) cell and tabulate");
  add_common(bench, bench_args, true);
  bench->add_option("--runs", runs, "runs per cell")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--timing", timing, "fill the wall_ms column (output no longer reproducible)");

  CommonArgs train_args;
  auto* train = app.add_subcommand("train", "train one configuration");
  add_common(train, train_args, false);

  std::string graph;
  SmoothDemoOptions demo;
  demo.out = "smooth_demo";
  auto* sd = app.add_subcommand("smooth-demo", "over-smoothing demo on a small labeled graph");
  sd->add_option("--graph", graph, "labeled graph file, or 'karate' (default)");
  sd->add_option("--layers", demo.layers, "max layers")->check(CLI::Range(1, 10));
  sd->add_option("--seed", demo.seed, "seed");
  sd->add_option("--out", demo.out, "output directory");
  sd->add_option("--iterations", demo.iterations, "smoothing iterations for the convergence CSV");

  std::string stats_dataset;
  auto* stats = app.add_subcommand("stats", "load a dataset and check its declared statistics");
  stats->add_option("--dataset", stats_dataset)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*bench) return cmd_bench(bench_args, runs, jobs, timing);
    if (*train) return cmd_train(train_args);
    if (*sd) return cmd_smooth_demo(graph, demo);
    if (*stats) return cmd_stats(stats_dataset);
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
