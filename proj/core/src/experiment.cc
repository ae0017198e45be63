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

#include "gcnlab/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "gcnlab/error.h"

namespace gcnlab {

namespace fs = std::filesystem;

namespace {

std::string printf_string(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Shortest "%g"-style rendering of a label rate; 0.005 -> "0.005".
std::string format_rate(double rate) {
  for (int digits = 1; digits <= 17; ++digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, rate);
    if (std::strtod(buf, nullptr) == rate) return buf;
  }
  return printf_string("%.17g", rate);
}

}  // namespace

std::string split_key(const SplitSpec& spec) {
  if (const auto* pc = std::get_if<PerClass>(&spec)) return std::to_string(pc->count) + "/class";
  return format_rate(std::get<LabelRate>(spec).rate);
}

std::string split_header(const SplitSpec& spec) {
  if (std::holds_alternative<PerClass>(spec)) return split_key(spec);
  return format_rate(std::get<LabelRate>(spec).rate * 100.0) + "%";
}

void BenchPlan::validate() const {
  if (runs == 0) throw InvalidArgument("bench plan: runs must be >= 1");
  if (methods.empty()) throw InvalidArgument("bench plan: no methods");
  if (splits.empty()) throw InvalidArgument("bench plan: no label rates or per-class counts");
  if (!(budget_multiplier > 0.0)) throw InvalidArgument("bench plan: budget multiplier must be positive");
  train.validate();
}

std::uint64_t split_seed(std::uint64_t run_seed) { return derive_seed(run_seed, 100); }
std::uint64_t training_seed(std::uint64_t run_seed) { return derive_seed(run_seed, 200); }

SplitOptions split_options_for(const Dataset& ds, const SplitSpec& spec, std::size_t validation_size,
                               std::size_t test_size, std::uint64_t run_seed) {
  SplitOptions o;
  o.spec = spec;
  o.validation_size = validation_size;
  o.test_size = test_size;
  o.seed = split_seed(run_seed);
  o.test_mode = std::holds_alternative<PerClass>(spec) && ds.canonical_test.size() == test_size
                    ? TestSetMode::kCanonical
                    : TestSetMode::kSample;
  return o;
}

RunRecord run_cell(const Dataset& ds, Method method, const SplitSpec& spec, std::uint64_t run_seed,
                   const BenchPlan& plan, StrategyResult* detail) {
  RunRecord rec;
  rec.method = to_string(method);
  rec.dataset = ds.name;
  rec.split = split_key(spec);
  rec.seed = run_seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const LabelSplit split =
        sample_split(ds, split_options_for(ds, spec, plan.validation_size, plan.test_size, run_seed));
    StrategyConfig cfg;
    cfg.method = method;
    cfg.budget_multiplier = plan.budget_multiplier;
    cfg.train = plan.train;
    cfg.train.seed = training_seed(run_seed);
    const Task task{ds.graph, ds.features, ds.classes};
    StrategyResult result = run_strategy(task, split, cfg);

    std::size_t correct = 0;
    for (Index v : split.test)
      if (result.predictions[v] == ds.labels[v]) ++correct;
    rec.accuracy = static_cast<double>(correct) / static_cast<double>(split.test.size());
    rec.labels_added = result.added.size();
    rec.epochs = result.epochs;
    if (result.training) rec.loss_history = result.training->loss_history;
    if (detail) *detail = std::move(result);
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.accuracy = std::nan("");
  }
  if (plan.record_timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

BenchOutcome run_bench(const Dataset& ds, const BenchPlan& plan) {
  plan.validate();
  struct Cell {
    Method method;
    SplitSpec spec;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& spec : plan.splits)
    for (std::size_t r = 0; r < plan.runs; ++r)
      for (Method m : plan.methods) cells.push_back({m, spec, plan.seed + r});

  BenchOutcome outcome;
  outcome.records.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      outcome.records[i] = run_cell(ds, cells[i].method, cells[i].spec, cells[i].seed, plan);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(plan.jobs, cells.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  for (const auto& r : outcome.records)
    if (!r.ok()) ++outcome.failures;
  return outcome;
}

namespace {

std::string accuracy_field(const RunRecord& r) { return r.ok() ? printf_string("%.6f", r.accuracy) : "nan"; }

}  // namespace

void write_runs_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << kRunsCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.method << ',' << r.dataset << ',' << r.split << ',' << r.seed << ',' << accuracy_field(r) << ','
        << r.labels_added << ',' << r.epochs << ',' << printf_string("%.0f", r.wall_ms) << '\n';
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRunsCsvHeader) throw ParseError("runs.csv", 1, "unexpected header");
  std::vector<RunRecord> out;
  for (std::size_t no = 2; std::getline(in, line); ++no) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string tok; std::getline(ls, tok, ',');) f.push_back(tok);
    if (f.size() != 8) throw ParseError("runs.csv", no, "expected 8 fields");
    RunRecord r;
    r.method = f[0];
    r.dataset = f[1];
    r.split = f[2];
    r.seed = std::stoull(f[3]);
    r.accuracy = std::strtod(f[4].c_str(), nullptr);
    if (f[4] == "nan") r.error = "failed";
    r.labels_added = std::stoull(f[5]);
    r.epochs = std::stoull(f[6]);
    r.wall_ms = std::strtod(f[7].c_str(), nullptr);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_table(const std::vector<RunRecord>& records, const std::vector<Method>& methods,
                         const std::vector<SplitSpec>& splits, const std::string& title) {
  std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> sums;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    // Same rounding as runs.csv.
    const double written = std::strtod(accuracy_field(r).c_str(), nullptr);
    auto& [sum, count] = sums[{r.method, r.split}];
    sum += written;
    ++count;
  }
  std::ostringstream out;
  out << "**" << title << "**\n\n| Label Rate |";
  for (const auto& s : splits) out << ' ' << split_header(s) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < splits.size(); ++i) out << "---|";
  out << '\n';
  for (Method m : methods) {
    out << "| " << to_string(m) << " |";
    for (const auto& s : splits) {
      auto it = sums.find({to_string(m), split_key(s)});
      if (it == sums.end() || it->second.second == 0) {
        out << " - |";
      } else {
        out << ' ' << printf_string("%.1f", 100.0 * it->second.first / static_cast<double>(it->second.second))
            << " |";
      }
    }
    out << '\n';
  }
  return out.str();
}

void write_bench_outputs(const BenchOutcome& outcome, const BenchPlan& plan, const std::string& dataset_name) {
  fs::create_directories(plan.out / "loss");
  {
    std::ofstream out(plan.out / "runs.csv");
    write_runs_csv(outcome.records, out);
  }
  {
    std::ofstream out(plan.out / "table.md");
    out << format_table(outcome.records, plan.methods, plan.splits, dataset_name);
  }
  for (const auto& r : outcome.records) {
    if (r.loss_history.empty()) continue;
    std::string split = r.split;
    std::replace(split.begin(), split.end(), '/', '_');
    std::ofstream out(plan.out / "loss" / (r.method + "_" + split + "_" + std::to_string(r.seed) + ".csv"));
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < r.loss_history.size(); ++e)
      out << e << ',' << printf_string("%.10g", r.loss_history[e]) << '\n';
  }
}

std::string scatter_svg(const DenseMatrix& points, const std::vector<std::size_t>& labels,
                        const std::string& title) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
  constexpr double kSize = 320.0;
  constexpr double kMargin = 20.0;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const double x = points(i, 0), y = points(i, 1);
    if (i == 0 || x < lo_x) lo_x = x;
    if (i == 0 || x > hi_x) hi_x = x;
    if (i == 0 || y < lo_y) lo_y = y;
    if (i == 0 || y > hi_y) hi_y = y;
  }
  const double span_x = hi_x > lo_x ? hi_x - lo_x : 1.0;
  const double span_y = hi_y > lo_y ? hi_y - lo_y : 1.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 2 * kMargin << "\" height=\""
      << kSize + 2 * kMargin + 20 << "\">\n";
  out << "<text x=\"" << kMargin << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" << title << "</text>\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const double cx = kMargin + kSize * (points(i, 0) - lo_x) / span_x;
    const double cy = 20 + kMargin + kSize * (1.0 - (points(i, 1) - lo_y) / span_y);
    out << "<circle cx=\"" << printf_string("%.2f", cx) << "\" cy=\"" << printf_string("%.2f", cy)
        << "\" r=\"4\" fill=\"" << kPalette[labels[i] % 7] << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

SmoothDemoResult smooth_demo(const LabeledGraph& lg, const SmoothDemoOptions& opts) {
  if (opts.layers == 0 || opts.layers > 10) throw InvalidArgument("smooth demo: layers must be in 1..10");
  fs::create_directories(opts.out);
  SmoothDemoResult result;
  const auto embeddings = untrained_gcn_embed(lg.graph, opts.layers, opts.seed);
  for (std::size_t l = 0; l < embeddings.size(); ++l) {
    const DenseMatrix& e = embeddings[l];
    const std::string stem = "embed_layer" + std::to_string(l + 1);
    {
      std::ofstream out(opts.out / (stem + ".csv"));
      out << "vertex,x,y,class\n";
      for (std::size_t i = 0; i < e.rows(); ++i)
        out << i << ',' << printf_string("%.10g", e(i, 0)) << ',' << printf_string("%.10g", e(i, 1)) << ','
            << lg.labels[i] << '\n';
    }
    {
      std::ofstream out(opts.out / (stem + ".svg"));
      out << scatter_svg(e, lg.labels, std::to_string(l + 1) + "-layer GCN");
    }
    result.files.push_back(opts.out / (stem + ".csv"));
    result.files.push_back(opts.out / (stem + ".svg"));
  }

  Rng rng(derive_seed(opts.seed, 999));
  DenseMatrix signal(lg.graph.n(), 1);
  for (double& v : signal.values()) v = rng.uniform(-1.0, 1.0);
  const SmoothingConfig cfg{opts.gamma, SmoothingKind::kRw, opts.iterations};
  const auto profile = convergence_profile(signal, lg.graph, cfg);
  {
    std::ofstream out(opts.out / "convergence.csv");
    out << "iteration,deviation\n";
    for (const auto& p : profile) out << p.iteration << ',' << printf_string("%.10g", p.deviation) << '\n';
  }
  result.files.push_back(opts.out / "convergence.csv");
  result.final_deviation = profile.back().deviation;
  return result;
}

}  // namespace gcnlab
