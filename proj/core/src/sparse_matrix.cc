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

#include "gcnlab/sparse_matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcnlab/error.h"

namespace gcnlab {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<Index> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
    throw InvalidArgument("SparseMatrix: inconsistent CSR buffer lengths");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) {
      throw InvalidArgument("SparseMatrix: row_ptr decreases at row " + std::to_string(r));
    }
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) {
        throw InvalidArgument("SparseMatrix: column index out of range in row " +
                              std::to_string(r));
      }
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
        throw InvalidArgument("SparseMatrix: columns not strictly increasing in row " +
                              std::to_string(r));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw InvalidArgument("SparseMatrix::from_triplets: entry (" + std::to_string(t.row) + "," +
                            std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j)
      sum += triplets[j].value;
    col_idx.push_back(t.col);
    values.push_back(sum);
    ++row_ptr[t.row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<Index> col_idx(n);
  for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) col_idx[i] = static_cast<Index>(i);
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx),
                      std::vector<double>(diag.begin(), diag.end()));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < dense.rows(); ++i)
    for (std::size_t j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0)
        t.push_back({static_cast<Index>(i), static_cast<Index>(j), dense(i, j)});
  return from_triplets(dense.rows(), dense.cols(), std::move(t));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Index>(c));
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (double v : row_values(r)) s[r] += v;
  return s;
}

std::vector<double> SparseMatrix::diagonal_values() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
  return d;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cols = row_cols(r);
    auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) d(r, cols[k]) = vals[k];
  }
  return d;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<std::size_t> row_ptr(cols_ + 1, 0);
  for (Index c : col_idx_) ++row_ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) row_ptr[c + 1] += row_ptr[c];
  std::vector<Index> col_idx(nnz());
  std::vector<double> values(nnz());
  std::vector<std::size_t> next(row_ptr.begin(), row_ptr.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      col_idx[dst] = static_cast<Index>(r);
      values[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cols = row_cols(r);
    auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (std::abs(at(cols[k], r) - vals[k]) > tol) return false;
  }
  return true;
}

SparseMatrix SparseMatrix::with_values(std::vector<double> values) const {
  return SparseMatrix(rows_, cols_, row_ptr_, col_idx_, std::move(values));
}

DenseMatrix spmm(const SparseMatrix& m, const DenseMatrix& x) {
  if (m.cols() != x.rows()) {
    throw ShapeMismatch("spmm: operator has " + std::to_string(m.cols()) +
                        " columns, input has " + std::to_string(x.rows()) + " rows");
  }
  const std::size_t width = x.cols();
  DenseMatrix out(m.rows(), width);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    if (cols.empty()) continue;
    auto o = out.row(r);
    auto first = x.row(cols[0]);
    for (std::size_t j = 0; j < width; ++j) o[j] = vals[0] * first[j];
    for (std::size_t k = 1; k < cols.size(); ++k) {
      auto xr = x.row(cols[k]);
      const double v = vals[k];
      for (std::size_t j = 0; j < width; ++j) o[j] += v * xr[j];
    }
  }
  return out;
}

DenseMatrix spmm_transposed(const SparseMatrix& m, const DenseMatrix& x) {
  if (m.rows() != x.rows()) {
    throw ShapeMismatch("spmm_transposed: operator has " + std::to_string(m.rows()) +
                        " rows, input has " + std::to_string(x.rows()) + " rows");
  }
  const std::size_t width = x.cols();
  DenseMatrix out(m.cols(), width);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    auto xr = x.row(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      auto o = out.row(cols[k]);
      const double v = vals[k];
      for (std::size_t j = 0; j < width; ++j) o[j] += v * xr[j];
    }
  }
  return out;
}

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) throw ShapeMismatch("spmv: dimension mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
  return y;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("add: shape mismatch");
  std::vector<std::size_t> row_ptr(a.rows() + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(a.nnz() + b.nnz());
  values.reserve(a.nnz() + b.nnz());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto ac = a.row_cols(r);
    auto av = a.row_values(r);
    auto bc = b.row_cols(r);
    auto bv = b.row_values(r);
    std::size_t i = 0, j = 0;
    while (i < ac.size() || j < bc.size()) {
      if (j == bc.size() || (i < ac.size() && ac[i] < bc[j])) {
        col_idx.push_back(ac[i]);
        values.push_back(alpha * av[i++]);
      } else if (i == ac.size() || bc[j] < ac[i]) {
        col_idx.push_back(bc[j]);
        values.push_back(beta * bv[j++]);
      } else {
        col_idx.push_back(ac[i]);
        values.push_back(alpha * av[i++] + beta * bv[j++]);
      }
    }
    row_ptr[r + 1] = col_idx.size();
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(row_ptr), std::move(col_idx),
                      std::move(values));
}

SparseMatrix row_normalize(const SparseMatrix& m) {
  std::vector<double> values(m.values().begin(), m.values().end());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (double v : m.row_values(r)) s += v;
    if (s == 0.0) continue;
    for (std::size_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) values[k] /= s;
  }
  return m.with_values(std::move(values));
}

}  // namespace gcnlab
