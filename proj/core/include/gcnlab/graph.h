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
#include <vector>

#include "gcnlab/sparse_matrix.h"

namespace gcnlab {

struct Edge {
  Index u;
  Index v;
  double weight = 1.0;
};

// Undirected weighted graph. The adjacency is symmetric and nonnegative.
// The diagonal is zero unless self-loops were added with add_self_loops().
class Graph {
 public:
  Graph() = default;
  // Validates symmetry and nonnegativity.
  explicit Graph(SparseMatrix adjacency);

  std::size_t n() const { return adjacency_.rows(); }
  const SparseMatrix& adjacency() const { return adjacency_; }
  bool has_self_loops() const { return has_self_loops_; }

  // Undirected edges, self-loops excluded, weights ignored.
  std::size_t edge_count() const;

 private:
  SparseMatrix adjacency_;
  bool has_self_loops_ = false;
};

// Duplicate edges are coalesced by summing their weights; (u,v) and (v,u)
// are the same edge. Self-edges are rejected.
Graph build_graph(std::size_t n, const std::vector<Edge>& edges);

std::vector<double> degree_vector(const Graph& g);

// A + I. Throws if any vertex already has a self-loop.
Graph add_self_loops(const Graph& g);

// D~^{-1/2} (A + I) D~^{-1/2}, the renormalized convolution operator.
SparseMatrix sym_normalize_with_self_loops(const Graph& g);

enum class LaplacianKind { kUnnormalized, kSym, kRw };

// D - A, D^{-1/2}(D - A)D^{-1/2}, or D^{-1}(D - A). The normalized kinds
// require every degree to be positive.
SparseMatrix laplacian(const Graph& g, LaplacianKind kind);

struct Components {
  std::vector<std::size_t> id;  // per vertex
  std::size_t count = 0;

  std::vector<std::vector<Index>> members() const;
};

// Ids are assigned in order of each component's smallest vertex.
Components connected_components(const Graph& g);

// 2|E|/n with every edge counted once regardless of weight.
double average_degree(const Graph& g);

}  // namespace gcnlab
