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

#include "gcnlab/graph.h"

#include <cmath>
#include <numeric>
#include <string>

#include "gcnlab/error.h"

namespace gcnlab {

Graph::Graph(SparseMatrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) throw InvalidArgument("Graph: adjacency not square");
  for (double w : adjacency_.values()) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("Graph: negative or non-finite weight");
  }
  if (!adjacency_.is_symmetric()) throw InvalidArgument("Graph: adjacency not symmetric");
  for (std::size_t i = 0; i < n(); ++i) {
    if (adjacency_.at(i, i) != 0.0) {
      has_self_loops_ = true;
      break;
    }
  }
}

std::size_t Graph::edge_count() const {
  std::size_t off_diagonal = 0;
  for (std::size_t r = 0; r < n(); ++r)
    for (Index c : adjacency_.row_cols(r))
      if (c != r) ++off_diagonal;
  return off_diagonal / 2;
}

Graph build_graph(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<Triplet> t;
  t.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InvalidArgument("build_graph: edge (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + ") out of range for n=" + std::to_string(n));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InvalidArgument("build_graph: non-positive weight on edge (" + std::to_string(e.u) +
                            "," + std::to_string(e.v) + ")");
    }
    if (e.u == e.v) {
      throw InvalidArgument("build_graph: self-edge at vertex " + std::to_string(e.u));
    }
    t.push_back({e.u, e.v, e.weight});
    t.push_back({e.v, e.u, e.weight});
  }
  return Graph(SparseMatrix::from_triplets(n, n, std::move(t)));
}

std::vector<double> degree_vector(const Graph& g) { return g.adjacency().row_sums(); }

Graph add_self_loops(const Graph& g) {
  if (g.has_self_loops()) throw InvalidArgument("add_self_loops: graph already has self-loops");
  return Graph(add(g.adjacency(), SparseMatrix::identity(g.n())));
}

SparseMatrix sym_normalize_with_self_loops(const Graph& g) {
  const Graph looped = add_self_loops(g);
  const SparseMatrix& a = looped.adjacency();
  std::vector<double> inv_sqrt = a.row_sums();
  for (double& d : inv_sqrt) d = 1.0 / std::sqrt(d);
  std::vector<double> values(a.values().begin(), a.values().end());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto cols = a.row_cols(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      values[a.row_ptr()[r] + k] *= inv_sqrt[r] * inv_sqrt[cols[k]];
  }
  return a.with_values(std::move(values));
}

SparseMatrix laplacian(const Graph& g, LaplacianKind kind) {
  const std::vector<double> deg = degree_vector(g);
  if (kind != LaplacianKind::kUnnormalized) {
    for (std::size_t i = 0; i < deg.size(); ++i) {
      if (deg[i] <= 0.0) {
        throw InvalidArgument("laplacian: vertex " + std::to_string(i) +
                              " has zero degree; normalized Laplacian undefined");
      }
    }
  }
  // D - A on the union pattern of A and the diagonal.
  SparseMatrix l = add(SparseMatrix::diagonal(deg), g.adjacency(), 1.0, -1.0);
  if (kind == LaplacianKind::kUnnormalized) return l;

  std::vector<double> values(l.values().begin(), l.values().end());
  for (std::size_t r = 0; r < l.rows(); ++r) {
    auto cols = l.row_cols(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      double& v = values[l.row_ptr()[r] + k];
      if (kind == LaplacianKind::kSym) {
        v /= std::sqrt(deg[r]) * std::sqrt(deg[cols[k]]);
      } else {
        v /= deg[r];
      }
    }
  }
  return l.with_values(std::move(values));
}

std::vector<std::vector<Index>> Components::members() const {
  std::vector<std::vector<Index>> out(count);
  for (std::size_t v = 0; v < id.size(); ++v) out[id[v]].push_back(static_cast<Index>(v));
  return out;
}

Components connected_components(const Graph& g) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  Components c;
  c.id.assign(g.n(), kUnset);
  std::vector<Index> stack;
  for (std::size_t start = 0; start < g.n(); ++start) {
    if (c.id[start] != kUnset) continue;
    const std::size_t label = c.count++;
    c.id[start] = label;
    stack.push_back(static_cast<Index>(start));
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index w : g.adjacency().row_cols(v)) {
        if (c.id[w] == kUnset) {
          c.id[w] = label;
          stack.push_back(w);
        }
      }
    }
  }
  return c;
}

double average_degree(const Graph& g) {
  if (g.n() == 0) throw InvalidArgument("average_degree: empty graph");
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.n());
}

}  // namespace gcnlab
