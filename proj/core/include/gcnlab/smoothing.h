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
#include <iosfwd>
#include <vector>

#include "gcnlab/dense_matrix.h"
#include "gcnlab/graph.h"

namespace gcnlab {

enum class SmoothingKind { kRw, kSym };

// One parameter covers both the smoothing weight gamma and the step size
// of the over-smoothing limit: the iterated operator is I - gamma * L~,
// with L~ the random-walk or symmetric Laplacian of A + I.
struct SmoothingConfig {
  double gamma = 1.0;
  SmoothingKind kind = SmoothingKind::kRw;
  std::size_t iterations = 1;

  void validate() const;
};

// (I - gamma D~^{-1} L~) x for rw, (I - gamma D~^{-1/2} L~ D~^{-1/2}) x for sym.
// g must not have self-loops; they are added internally. gamma = 0 is
// accepted here (identity) even though SmoothingConfig::validate rejects it.
DenseMatrix smooth_once(const DenseMatrix& x, const Graph& g, double gamma, SmoothingKind kind);
DenseMatrix smooth_once(const DenseMatrix& x, const Graph& g, const SmoothingConfig& cfg);

// smooth_once applied cfg.iterations times.
DenseMatrix smooth_iterate(const DenseMatrix& x, const Graph& g, const SmoothingConfig& cfg);

struct DeviationPoint {
  std::size_t iteration;
  double deviation;
};

// Largest within-component spread (max - min) over all channels, after
// dividing each row by sqrt(d~) for the sym kind.
double component_deviation(const DenseMatrix& x, const Graph& g, SmoothingKind kind);

// Deviation at iterations 0..cfg.iterations inclusive.
std::vector<DeviationPoint> convergence_profile(const DenseMatrix& x, const Graph& g,
                                                const SmoothingConfig& cfg);

// A graph with one class per vertex, in the bundled text format:
//   v <vertex> <class>
//   e <u> <v>
// with '#' comment lines.
struct LabeledGraph {
  Graph graph;
  std::vector<std::size_t> labels;
};
LabeledGraph parse_labeled_graph(std::istream& in);

// Bundled Zachary karate club: 34 vertices, 78 edges, two factions.
const LabeledGraph& karate_club();

// Outputs of untrained GCNs with 1..max_layers layers. Hidden width 16,
// output width 2, one-hot inputs, Glorot weights, ReLU between layers and
// a linear output layer. Entry i is the (n x 2) output of the (i+1)-layer net.
std::vector<DenseMatrix> untrained_gcn_embed(const Graph& g, std::size_t max_layers,
                                             std::uint64_t seed);
std::vector<DenseMatrix> karate_embed(std::size_t max_layers, std::uint64_t seed);

// Mean silhouette coefficient of a labeled point cloud (Euclidean).
double silhouette(const DenseMatrix& points, const std::vector<std::size_t>& labels);

}  // namespace gcnlab
