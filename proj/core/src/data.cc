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

#include "gcnlab/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "gcnlab/random.h"

namespace gcnlab {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError(p.string(), 0, "cannot open file");
  return in;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

template <typename T>
T parse_number(const std::string& token, const fs::path& file, std::size_t line) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(file.string(), line, "expected a number, got '" + token + "'");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  std::string tok;
  while (ls >> tok) out.push_back(tok);
  return out;
}

DatasetMeta read_meta(const fs::path& p) {
  std::ifstream in = open_input(p);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(p.string(), 0, e.what());
  }
  DatasetMeta m;
  try {
    m.name = j.at("name").get<std::string>();
    m.n = j.at("n").get<std::size_t>();
    m.edges = j.at("edges").get<std::size_t>();
    m.classes = j.at("classes").get<std::size_t>();
    m.features = j.at("features").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(p.string(), 0, e.what());
  }
  return m;
}

std::vector<Edge> read_edges(const fs::path& p, std::size_t n) {
  std::ifstream in = open_input(p);
  std::vector<Edge> edges;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (blank(line)) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 2) throw ParseError(p.string(), no, "expected 'u v'");
    const auto u = parse_number<std::size_t>(tok[0], p, no);
    const auto v = parse_number<std::size_t>(tok[1], p, no);
    if (u >= n || v >= n) throw ParseError(p.string(), no, "vertex id out of range");
    if (u == v) throw ParseError(p.string(), no, "self-edge");
    edges.push_back({static_cast<Index>(u), static_cast<Index>(v), 1.0});
  }
  return edges;
}

SparseMatrix read_matrix_market(const fs::path& p) {
  std::ifstream in = open_input(p);
  std::string line;
  std::size_t no = 0;
  bool pattern = false;
  if (!std::getline(in, line)) throw ParseError(p.string(), 1, "empty file");
  ++no;
  {
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.rfind("%%matrixmarket", 0) != 0 || lower.find("coordinate") == std::string::npos) {
      throw ParseError(p.string(), no, "expected a MatrixMarket coordinate header");
    }
    if (lower.find("symmetric") != std::string::npos || lower.find("complex") != std::string::npos) {
      throw ParseError(p.string(), no, "only general real/integer/pattern matrices are supported");
    }
    pattern = lower.find("pattern") != std::string::npos;
  }
  std::size_t rows = 0, cols = 0, entries = 0;
  bool have_size = false;
  std::vector<Triplet> t;
  while (std::getline(in, line)) {
    ++no;
    if (blank(line) || line[0] == '%') continue;
    const auto tok = split_ws(line);
    if (!have_size) {
      if (tok.size() != 3) throw ParseError(p.string(), no, "expected 'rows cols entries'");
      rows = parse_number<std::size_t>(tok[0], p, no);
      cols = parse_number<std::size_t>(tok[1], p, no);
      entries = parse_number<std::size_t>(tok[2], p, no);
      t.reserve(entries);
      have_size = true;
      continue;
    }
    if (tok.size() != (pattern ? 2u : 3u)) throw ParseError(p.string(), no, "malformed entry");
    const auto i = parse_number<std::size_t>(tok[0], p, no);
    const auto j = parse_number<std::size_t>(tok[1], p, no);
    if (i == 0 || j == 0 || i > rows || j > cols) throw ParseError(p.string(), no, "index out of range");
    double v = 1.0;
    if (!pattern) {
      try {
        std::size_t used = 0;
        v = std::stod(tok[2], &used);
        if (used != tok[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(p.string(), no, "bad value '" + tok[2] + "'");
      }
    }
    t.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
  }
  if (!have_size) throw ParseError(p.string(), no, "missing size line");
  if (t.size() != entries) {
    throw ParseError(p.string(), 0, "declared " + std::to_string(entries) + " entries, found " +
                                        std::to_string(t.size()));
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

std::vector<std::size_t> read_index_list(const fs::path& p) {
  std::ifstream in = open_input(p);
  std::vector<std::size_t> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (blank(line)) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 1) throw ParseError(p.string(), no, "expected one integer");
    out.push_back(parse_number<std::size_t>(tok[0], p, no));
  }
  return out;
}

}  // namespace

Dataset load_dataset(const fs::path& dir) {
  for (const char* f : {"meta.json", "edges.txt", "features.mtx", "labels.txt", "test_index.txt"}) {
    if (!fs::exists(dir / f)) throw ParseError((dir / f).string(), 0, "missing file");
  }
  Dataset ds;
  ds.meta = read_meta(dir / "meta.json");
  ds.name = ds.meta.name;
  ds.graph = build_graph(ds.meta.n, read_edges(dir / "edges.txt", ds.meta.n));
  ds.features = read_matrix_market(dir / "features.mtx");
  ds.labels = read_index_list(dir / "labels.txt");
  std::size_t max_label = 0;
  for (std::size_t l : ds.labels) max_label = std::max(max_label, l);
  ds.classes = ds.labels.empty() ? 0 : max_label + 1;
  for (std::size_t v : read_index_list(dir / "test_index.txt")) {
    if (v >= ds.meta.n) throw ParseError((dir / "test_index.txt").string(), 0, "vertex id out of range");
    ds.canonical_test.push_back(static_cast<Index>(v));
  }
  validate_stats(ds);
  return ds;
}

void save_dataset(const Dataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  {
    nlohmann::ordered_json j;
    j["name"] = ds.name;
    j["n"] = ds.graph.n();
    j["edges"] = ds.graph.edge_count();
    j["classes"] = ds.classes;
    j["features"] = ds.features.cols();
    std::ofstream(dir / "meta.json") << j.dump() << "\n";
  }
  {
    std::ofstream out(dir / "edges.txt");
    const SparseMatrix& a = ds.graph.adjacency();
    for (std::size_t u = 0; u < a.rows(); ++u)
      for (Index v : a.row_cols(u))
        if (u < v) out << u << ' ' << v << '\n';
  }
  {
    std::ofstream out(dir / "features.mtx");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << ds.features.rows() << ' ' << ds.features.cols() << ' ' << ds.features.nnz() << '\n';
    out << std::setprecision(17);
    for (std::size_t r = 0; r < ds.features.rows(); ++r) {
      auto cols = ds.features.row_cols(r);
      auto vals = ds.features.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) out << r + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
    }
  }
  {
    std::ofstream out(dir / "labels.txt");
    for (std::size_t l : ds.labels) out << l << '\n';
  }
  {
    std::ofstream out(dir / "test_index.txt");
    for (Index v : ds.canonical_test) out << v << '\n';
  }
}

StatsReport validate_stats(const Dataset& ds) {
  StatsReport r;
  r.nodes = ds.graph.n();
  r.edges = ds.graph.edge_count();
  r.classes = ds.classes;
  r.features = ds.features.cols();
  std::ostringstream errors;
  auto check = [&](const char* what, std::size_t expected, std::size_t actual) {
    if (expected != actual) errors << " " << what << ": expected " << expected << ", actual " << actual << ";";
  };
  check("nodes", ds.meta.n, r.nodes);
  check("edges", ds.meta.edges, r.edges);
  check("classes", ds.meta.classes, r.classes);
  check("features", ds.meta.features, r.features);
  check("feature rows", ds.meta.n, ds.features.rows());
  check("labels", ds.meta.n, ds.labels.size());
  if (!errors.str().empty()) throw StatsMismatch("dataset '" + ds.name + "' stats mismatch:" + errors.str());

  r.components = connected_components(ds.graph).count;
  const std::vector<double> deg = degree_vector(ds.graph);
  for (std::size_t i = 0; i < deg.size(); ++i)
    if (deg[i] == 0.0) r.isolated.push_back(static_cast<Index>(i));
  return r;
}

namespace {

std::size_t training_size(const Dataset& ds, const SplitSpec& spec) {
  if (const auto* pc = std::get_if<PerClass>(&spec)) return pc->count * ds.classes;
  const double rate = std::get<LabelRate>(spec).rate;
  if (!(rate > 0.0 && rate < 1.0)) throw InvalidArgument("sample_split: label rate must be in (0,1)");
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(ds.graph.n())));
}

}  // namespace

LabelSplit sample_split(const Dataset& ds, const SplitOptions& opts) {
  const std::size_t n = ds.graph.n();
  if (ds.labels.size() != n) throw InvalidArgument("sample_split: label vector has wrong length");
  const std::size_t train_size = training_size(ds, opts.spec);
  if (train_size < ds.classes) {
    throw InvalidArgument("sample_split: " + std::to_string(train_size) +
                          " training labels cannot cover " + std::to_string(ds.classes) + " classes");
  }
  const bool canonical = opts.test_mode == TestSetMode::kCanonical;
  const std::size_t test_size = canonical ? ds.canonical_test.size() : opts.test_size;
  if (train_size + opts.validation_size + test_size > n) {
    throw InvalidArgument("sample_split: requested sizes exceed " + std::to_string(n) + " vertices");
  }

  std::vector<char> in_test(n, 0);
  if (canonical)
    for (Index v : ds.canonical_test) in_test[v] = 1;
  std::vector<Index> pool;
  for (std::size_t v = 0; v < n; ++v)
    if (!in_test[v]) pool.push_back(static_cast<Index>(v));

  Rng rng(opts.seed);
  LabelSplit split;
  split.seed = opts.seed;

  std::vector<Index> rest;
  if (const auto* pc = std::get_if<PerClass>(&opts.spec)) {
    rng.shuffle(pool);
    std::vector<std::size_t> taken(ds.classes, 0);
    for (Index v : pool) {
      const std::size_t y = ds.labels[v];
      if (taken[y] < pc->count) {
        ++taken[y];
        split.train.push_back({v, y});
      } else {
        rest.push_back(v);
      }
    }
    for (std::size_t k = 0; k < ds.classes; ++k) {
      if (taken[k] < pc->count) {
        throw InvalidArgument("sample_split: class " + std::to_string(k) + " has only " +
                              std::to_string(taken[k]) + " eligible vertices");
      }
    }
  } else {
    bool covered = false;
    for (std::size_t attempt = 0; attempt <= kMaxSplitRetries && !covered; ++attempt) {
      rng.shuffle(pool);
      std::vector<char> seen(ds.classes, 0);
      std::size_t distinct = 0;
      for (std::size_t i = 0; i < train_size; ++i) {
        const std::size_t y = ds.labels[pool[i]];
        if (!seen[y]) {
          seen[y] = 1;
          ++distinct;
        }
      }
      covered = distinct == ds.classes;
      if (!covered) ++split.sampling_retries;
    }
    if (!covered) {
      throw InvalidArgument("sample_split: no class-covering training set after " +
                            std::to_string(kMaxSplitRetries) + " retries");
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i < train_size) {
        split.train.push_back({pool[i], ds.labels[pool[i]]});
      } else {
        rest.push_back(pool[i]);
      }
    }
  }

  std::size_t cursor = 0;
  for (; cursor < opts.validation_size; ++cursor) split.validation.push_back({rest[cursor], ds.labels[rest[cursor]]});
  if (canonical) {
    split.test = ds.canonical_test;
  } else {
    split.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(cursor),
                      rest.begin() + static_cast<std::ptrdiff_t>(cursor + test_size));
  }
  return split;
}

}  // namespace gcnlab
