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

#include "gcnlab/smoothing.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "gcnlab/error.h"
#include "gcnlab/nn.h"

namespace gcnlab {

namespace detail {
extern const char kKarateClubText[];
}

void SmoothingConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("smoothing gamma must be in (0,1]");
}

namespace {

// Row-normalized (rw) or symmetrically normalized (sym) A + I.
SparseMatrix smoothing_operator(const Graph& g, SmoothingKind kind) {
  if (kind == SmoothingKind::kSym) return sym_normalize_with_self_loops(g);
  const Graph looped = add_self_loops(g);
  return row_normalize(looped.adjacency());
}

DenseMatrix blend(const DenseMatrix& x, const DenseMatrix& smoothed, double gamma) {
  if (gamma == 1.0) return smoothed;
  DenseMatrix out = smoothed;
  auto o = out.values();
  auto in = x.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - gamma) * in[i] + gamma * o[i];
  return out;
}

void check_rows(const DenseMatrix& x, const Graph& g) {
  if (x.rows() != g.n()) {
    throw ShapeMismatch("smoothing: signal has " + std::to_string(x.rows()) + " rows, graph has " +
                        std::to_string(g.n()) + " vertices");
  }
}

}  // namespace

// I - gamma D~^{-1} L~ = (1 - gamma) I + gamma D~^{-1} A~, and likewise for sym.
DenseMatrix smooth_once(const DenseMatrix& x, const Graph& g, double gamma, SmoothingKind kind) {
  check_rows(x, g);
  if (gamma == 0.0) return x;
  return blend(x, spmm(smoothing_operator(g, kind), x), gamma);
}

DenseMatrix smooth_once(const DenseMatrix& x, const Graph& g, const SmoothingConfig& cfg) {
  cfg.validate();
  return smooth_once(x, g, cfg.gamma, cfg.kind);
}

DenseMatrix smooth_iterate(const DenseMatrix& x, const Graph& g, const SmoothingConfig& cfg) {
  cfg.validate();
  check_rows(x, g);
  const SparseMatrix op = smoothing_operator(g, cfg.kind);
  DenseMatrix cur = x;
  for (std::size_t m = 0; m < cfg.iterations; ++m) cur = blend(cur, spmm(op, cur), cfg.gamma);
  return cur;
}

double component_deviation(const DenseMatrix& x, const Graph& g, SmoothingKind kind) {
  check_rows(x, g);
  const Components comps = connected_components(g);
  std::vector<double> scale(g.n(), 1.0);
  if (kind == SmoothingKind::kSym) {
    // d~ = d + 1 for the self-looped graph.
    const std::vector<double> deg = degree_vector(g);
    for (std::size_t i = 0; i < g.n(); ++i) scale[i] = 1.0 / std::sqrt(deg[i] + (g.has_self_loops() ? 0.0 : 1.0));
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    std::vector<double> lo(comps.count, std::numeric_limits<double>::infinity());
    std::vector<double> hi(comps.count, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double v = x(i, c) * scale[i];
      lo[comps.id[i]] = std::min(lo[comps.id[i]], v);
      hi[comps.id[i]] = std::max(hi[comps.id[i]], v);
    }
    for (std::size_t k = 0; k < comps.count; ++k) worst = std::max(worst, hi[k] - lo[k]);
  }
  return worst;
}

std::vector<DeviationPoint> convergence_profile(const DenseMatrix& x, const Graph& g,
                                                const SmoothingConfig& cfg) {
  cfg.validate();
  check_rows(x, g);
  const SparseMatrix op = smoothing_operator(g, cfg.kind);
  std::vector<DeviationPoint> profile;
  profile.reserve(cfg.iterations + 1);
  DenseMatrix cur = x;
  profile.push_back({0, component_deviation(cur, g, cfg.kind)});
  for (std::size_t m = 1; m <= cfg.iterations; ++m) {
    cur = blend(cur, spmm(op, cur), cfg.gamma);
    profile.push_back({m, component_deviation(cur, g, cfg.kind)});
  }
  return profile;
}

LabeledGraph parse_labeled_graph(std::istream& in) {
  LabeledGraph out;
  std::vector<Edge> edges;
  std::string line;
  std::size_t vertices = 0;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    char tag = 0;
    std::size_t a = 0, b = 0;
    if (!(ls >> tag >> a >> b) || (tag != 'v' && tag != 'e')) {
      throw ParseError("graph", no, "expected 'v <vertex> <class>' or 'e <u> <v>'");
    }
    if (tag == 'v') {
      if (out.labels.size() <= a) out.labels.resize(a + 1, 0);
      out.labels[a] = b;
      vertices = std::max(vertices, a + 1);
    } else {
      edges.push_back({static_cast<Index>(a), static_cast<Index>(b), 1.0});
      vertices = std::max({vertices, a + 1, b + 1});
    }
  }
  out.labels.resize(vertices, 0);
  out.graph = build_graph(vertices, edges);
  return out;
}

const LabeledGraph& karate_club() {
  static const LabeledGraph club = [] {
    std::istringstream in(detail::kKarateClubText);
    return parse_labeled_graph(in);
  }();
  return club;
}

std::vector<DenseMatrix> untrained_gcn_embed(const Graph& g, std::size_t max_layers,
                                             std::uint64_t seed) {
  if (max_layers == 0) throw InvalidArgument("untrained_gcn_embed: need at least one layer");
  const std::size_t n = g.n();
  const Propagation prop = Propagation::gcn(g);
  const SparseMatrix one_hot = SparseMatrix::identity(n);
  std::vector<DenseMatrix> out;
  for (std::size_t layers = 1; layers <= max_layers; ++layers) {
    std::vector<std::size_t> dims{n};
    for (std::size_t l = 1; l < layers; ++l) dims.push_back(16);
    dims.push_back(2);
    Rng rng(derive_seed(seed, layers));
    const GcnModel model = GcnModel::create(Architecture::kGcn, dims, rng);
    out.push_back(forward(model, prop, one_hot).logits);
  }
  return out;
}

std::vector<DenseMatrix> karate_embed(std::size_t max_layers, std::uint64_t seed) {
  return untrained_gcn_embed(karate_club().graph, max_layers, seed);
}

double silhouette(const DenseMatrix& points, const std::vector<std::size_t>& labels) {
  const std::size_t n = points.rows();
  if (labels.size() != n) throw ShapeMismatch("silhouette: label count mismatch");
  std::size_t classes = 0;
  for (std::size_t l : labels) classes = std::max(classes, l + 1);
  std::vector<std::size_t> size(classes, 0);
  for (std::size_t l : labels) ++size[l];

  auto dist = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t c = 0; c < points.cols(); ++c) {
      const double d = points(i, c) - points(j, c);
      s += d * d;
    }
    return std::sqrt(s);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(classes, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum[labels[j]] += dist(i, j);
    if (size[labels[i]] <= 1) continue;  // singleton clusters score 0
    const double a = sum[labels[i]] / static_cast<double>(size[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < classes; ++k)
      if (k != labels[i] && size[k] > 0) b = std::min(b, sum[k] / static_cast<double>(size[k]));
    const double denom = std::max(a, b);
    if (denom > 0.0 && std::isfinite(b)) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

}  // namespace gcnlab
