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

#include "gcnlab/parwalks.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcnlab/error.h"

namespace gcnlab {

AbsorptionSystem::AbsorptionSystem(const Graph& g, double alpha, std::vector<double> lambda_diag)
    : alpha_(alpha), lambda_(std::move(lambda_diag)) {
  if (g.has_self_loops()) {
    throw InvalidArgument("AbsorptionSystem: expects the graph without self-loops");
  }
  if (!(alpha > 0.0)) throw InvalidArgument("AbsorptionSystem: alpha must be positive");
  if (lambda_.size() != g.n()) throw ShapeMismatch("AbsorptionSystem: Lambda has wrong length");
  bool any_positive = false;
  for (double l : lambda_) {
    if (!(l >= 0.0)) throw InvalidArgument("AbsorptionSystem: Lambda must be nonnegative");
    any_positive |= l > 0.0;
  }
  if (!any_positive) throw InvalidArgument("AbsorptionSystem: Lambda has no positive entry");
  laplacian_ = gcnlab::laplacian(g, LaplacianKind::kUnnormalized);
  std::vector<double> scaled(lambda_);
  for (double& l : scaled) l *= alpha_;
  matrix_ = add(laplacian_, SparseMatrix::diagonal(scaled));
}

AbsorptionSystem::AbsorptionSystem(const Graph& g, double alpha)
    : AbsorptionSystem(g, alpha, std::vector<double>(g.n(), 1.0)) {}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CgResult cg_solve(const AbsorptionSystem& sys, std::span<const double> rhs, const CgOptions& opts) {
  const std::size_t n = sys.n();
  if (rhs.size() != n) throw ShapeMismatch("cg_solve: rhs length mismatch");
  if (!(opts.tol > 0.0)) throw InvalidArgument("cg_solve: tolerance must be positive");
  const std::size_t max_iter = opts.max_iter ? opts.max_iter : 10 * n;

  CgResult out;
  out.x.assign(n, 0.0);
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) return out;

  const SparseMatrix& a = sys.matrix();
  std::vector<double> inv_diag = a.diagonal_values();
  for (double& d : inv_diag) d = 1.0 / d;

  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> z(n), p(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double res = 1.0;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const std::vector<double> q = spmv(a, p);
    const double step = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    res = std::sqrt(dot(r, r)) / rhs_norm;
    out.iterations = it;
    out.relative_residual = res;
    if (res <= opts.tol) return out;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw ConvergenceError("cg_solve: no convergence in " + std::to_string(max_iter) +
                             " iterations, relative residual " + std::to_string(res),
                         res, max_iter);
}

ConfidenceTable confidence_vectors(const AbsorptionSystem& sys, const LabelSplit& labels,
                                   std::size_t classes, const CgOptions& opts) {
  const auto seeds = labels.train_by_class(classes);
  ConfidenceTable table;
  table.per_class.reserve(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    std::vector<double> indicator(sys.n(), 0.0);
    for (Index v : seeds[k]) {
      if (v >= sys.n()) throw InvalidArgument("confidence_vectors: seed vertex out of range");
      indicator[v] = 1.0;
    }
    table.per_class.push_back(cg_solve(sys, indicator, opts).x);
  }
  return table;
}

Expansion select_top_per_class(const std::vector<std::vector<double>>& scores_by_class,
                               std::span<const LabeledVertex> existing, std::size_t n,
                               std::size_t per_class) {
  std::vector<char> taken(n, 0);
  for (const auto& lv : existing) {
    if (lv.vertex >= n) throw InvalidArgument("select_top_per_class: vertex out of range");
    taken[lv.vertex] = 1;
  }
  Expansion out;
  if (per_class == 0) return out;
  std::vector<Index> order(n);
  for (std::size_t k = 0; k < scores_by_class.size(); ++k) {
    const auto& s = scores_by_class[k];
    if (s.size() != n) throw ShapeMismatch("select_top_per_class: score vector length mismatch");
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return s[a] > s[b]; });
    std::size_t added = 0;
    for (Index v : order) {
      if (added == per_class) break;
      if (taken[v]) continue;
      taken[v] = 1;
      out.added.push_back({v, k});
      ++added;
    }
    if (added < per_class) out.truncated = true;
  }
  return out;
}

Expansion expand_labels_parwalks(const AbsorptionSystem& sys, const LabelSplit& labels,
                                 std::size_t classes, std::size_t per_class, const CgOptions& opts) {
  if (per_class == 0) return {};
  const ConfidenceTable table = confidence_vectors(sys, labels, classes, opts);
  return select_top_per_class(table.per_class, labels.train, sys.n(), per_class);
}

std::vector<std::size_t> lp_classify(const AbsorptionSystem& sys, const LabelSplit& labels,
                                     std::size_t classes, const CgOptions& opts) {
  ConfidenceTable table = confidence_vectors(sys, labels, classes, opts);
  for (auto& column : table.per_class) {
    const double mass = std::accumulate(column.begin(), column.end(), 0.0);
    if (mass > 0.0)
      for (double& v : column) v /= mass;
  }
  // Scores closer than the solver tolerance count as ties.
  constexpr double kTieTolerance = 1e-9;
  std::vector<std::size_t> pred(sys.n(), 0);
  for (std::size_t i = 0; i < sys.n(); ++i) {
    double best = table.per_class[0][i];
    for (std::size_t k = 1; k < classes; ++k) {
      const double v = table.per_class[k][i];
      if (v - best > kTieTolerance * std::max(std::abs(v), std::abs(best))) {
        best = v;
        pred[i] = k;
      }
    }
  }
  return pred;
}

}  // namespace gcnlab
