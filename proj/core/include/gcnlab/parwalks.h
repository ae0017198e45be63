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
#include <span>
#include <vector>

#include "gcnlab/graph.h"
#include "gcnlab/label_split.h"
#include "gcnlab/sparse_matrix.h"

namespace gcnlab {

// The linear system (L + alpha * Lambda) behind partially absorbing random
// walks. L is the unnormalized Laplacian of the graph without self-loops.
class AbsorptionSystem {
 public:
  AbsorptionSystem(const Graph& g, double alpha, std::vector<double> lambda_diag);
  // Lambda = I.
  AbsorptionSystem(const Graph& g, double alpha);

  std::size_t n() const { return matrix_.rows(); }
  double alpha() const { return alpha_; }
  const SparseMatrix& laplacian() const { return laplacian_; }
  std::span<const double> lambda_diag() const { return lambda_; }
  // L + alpha * Lambda.
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  double alpha_;
  std::vector<double> lambda_;
  SparseMatrix laplacian_;
  SparseMatrix matrix_;
};

inline constexpr double kDefaultAbsorptionAlpha = 1e-6;

struct CgOptions {
  double tol = 1e-8;
  // 0 means 10 * n.
  std::size_t max_iter = 0;
};

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

// Jacobi-preconditioned conjugate gradient on (L + alpha Lambda) x = rhs,
// stopping once ||r|| / ||rhs|| <= tol. Throws ConvergenceError carrying
// the final residual when max_iter is exhausted.
CgResult cg_solve(const AbsorptionSystem& sys, std::span<const double> rhs, const CgOptions& opts = {});

// Column k is P s_k = sum over class-k seeds of P[:, j], P = (L + alpha Lambda)^{-1}.
struct ConfidenceTable {
  std::vector<std::vector<double>> per_class;

  std::size_t classes() const { return per_class.size(); }
};

ConfidenceTable confidence_vectors(const AbsorptionSystem& sys, const LabelSplit& labels,
                                   std::size_t classes, const CgOptions& opts = {});

// Per-class top-t selection shared by the random-walk and self-training
// expanders. Classes are processed in ascending order; a vertex that is
// already labeled, or was claimed by an earlier class, is skipped. Ties in
// score go to the lower vertex index.
Expansion select_top_per_class(const std::vector<std::vector<double>>& scores_by_class,
                               std::span<const LabeledVertex> existing, std::size_t n,
                               std::size_t per_class);

// Adds the t most confident unlabeled vertices of each class.
Expansion expand_labels_parwalks(const AbsorptionSystem& sys, const LabelSplit& labels,
                                 std::size_t classes, std::size_t per_class,
                                 const CgOptions& opts = {});

// Class per vertex from the confidence table. Each class column is first
// divided by its total mass, so that the number of seeds per class does
// not bias the argmax; ties (within solver precision) go to the lowest
// class index.
std::vector<std::size_t> lp_classify(const AbsorptionSystem& sys, const LabelSplit& labels,
                                     std::size_t classes, const CgOptions& opts = {});

}  // namespace gcnlab
