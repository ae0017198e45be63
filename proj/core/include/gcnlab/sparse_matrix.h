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
#include <span>
#include <vector>

#include "gcnlab/dense_matrix.h"

namespace gcnlab {

using Index = std::uint32_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed sparse row matrix. Column indices are strictly increasing
// within each row; the constructor rejects anything else.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<Index> col_idx, std::vector<double> values);

  // Duplicate (row, col) entries are summed. Explicit zeros are kept.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> diag);
  static SparseMatrix from_dense(const DenseMatrix& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  // Stored value at (r, c), or 0 when absent.
  double at(std::size_t r, std::size_t c) const;

  std::vector<double> row_sums() const;
  std::vector<double> diagonal_values() const;
  DenseMatrix to_dense() const;
  SparseMatrix transposed() const;
  bool is_symmetric(double tol = 0.0) const;

  // Same sparsity pattern, new values (length nnz).
  SparseMatrix with_values(std::vector<double> values) const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

// m * x. Each output entry accumulates in stored column order, starting
// from the first product, so an identity operator reproduces x exactly.
DenseMatrix spmm(const SparseMatrix& m, const DenseMatrix& x);
// m^T * x without forming the transpose.
DenseMatrix spmm_transposed(const SparseMatrix& m, const DenseMatrix& x);
std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x);

// alpha * a + beta * b with the union sparsity pattern.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);

// Each row scaled to sum to one; all-zero rows are left as zero.
SparseMatrix row_normalize(const SparseMatrix& m);

}  // namespace gcnlab
