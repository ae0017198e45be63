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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcnlab/dense_matrix.h"
#include "gcnlab/graph.h"
#include "gcnlab/label_split.h"
#include "gcnlab/random.h"
#include "gcnlab/sparse_matrix.h"

namespace gcnlab {

enum class Architecture { kGcn, kFcn, kCheby };

std::string to_string(Architecture arch);
Architecture parse_architecture(const std::string& name);

// Weights of a layered model. Layer l maps layer_dims[l] -> layer_dims[l+1]
// and owns taps() weight matrices (K+1 Chebyshev coefficients for cheby,
// one otherwise), stored layer-major.
struct GcnModel {
  Architecture arch = Architecture::kGcn;
  std::vector<std::size_t> layer_dims;
  std::size_t cheby_order = 2;
  std::vector<DenseMatrix> weights;

  std::size_t layers() const { return layer_dims.empty() ? 0 : layer_dims.size() - 1; }
  std::size_t taps() const { return arch == Architecture::kCheby ? cheby_order + 1 : 1; }
  DenseMatrix& weight(std::size_t layer, std::size_t tap = 0) { return weights[layer * taps() + tap]; }
  const DenseMatrix& weight(std::size_t layer, std::size_t tap = 0) const {
    return weights[layer * taps() + tap];
  }

  // Glorot-initialized model.
  static GcnModel create(Architecture arch, std::vector<std::size_t> layer_dims, Rng& rng,
                         std::size_t cheby_order = 2);

  void validate() const;
};

// Uniform on +-sqrt(6 / (rows + cols)).
DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

// The graph operator a model multiplies with on the left of every layer:
// A^ for gcn, the rescaled Laplacian 2 L_sym / lambda_max - I for cheby,
// nothing for fcn.
struct Propagation {
  Architecture arch = Architecture::kFcn;
  SparseMatrix op;
  std::size_t cheby_order = 2;
  double lambda_max = 0.0;

  static Propagation gcn(const Graph& g);
  static Propagation gcn(SparseMatrix a_hat);
  static Propagation fcn();
  // Isolated vertices get an identity row in L_sym.
  static Propagation chebyshev(const Graph& g, std::size_t order);
  static Propagation chebyshev(SparseMatrix scaled_laplacian, std::size_t order);
};

struct PowerIterationResult {
  double eigenvalue;
  std::size_t iterations;
};
// Largest eigenvalue of a symmetric positive semidefinite matrix.
PowerIterationResult largest_eigenvalue(const SparseMatrix& m, double tol = 1e-9,
                                        std::size_t max_iter = 20000, std::uint64_t seed = 7);

// T_0(m) x, ..., T_order(m) x via T_k = 2 m T_{k-1} - T_{k-2}.
std::vector<DenseMatrix> chebyshev_basis(const SparseMatrix& m, const DenseMatrix& x,
                                         std::size_t order);

// Inverted-dropout scale factors (0 or 1/(1-rate)). Layer 0 holds one
// factor per stored entry of the sparse input; deeper layers one per
// activation entry.
struct DropoutMasks {
  std::vector<std::vector<double>> layers;
};
DropoutMasks make_dropout_masks(const GcnModel& model, const SparseMatrix& x, double rate,
                                Rng& rng);

struct ForwardCache {
  SparseMatrix input;               // x after the layer-0 mask
  std::vector<DenseMatrix> hidden;  // ReLU outputs, before masking
  std::vector<DenseMatrix> masked;  // hidden[l] after mask l+1
  DenseMatrix logits;
  DenseMatrix z;
};

ForwardCache forward(const GcnModel& model, const Propagation& prop, const SparseMatrix& x,
                     const DropoutMasks* masks = nullptr);

// Z = softmax(A^ ReLU(... ReLU(A^ X W0) ...) W_last).
ForwardCache gcn_forward(const GcnModel& model, const SparseMatrix& a_hat, const SparseMatrix& x,
                         const DropoutMasks* masks = nullptr);
ForwardCache fcn_forward(const GcnModel& model, const SparseMatrix& x,
                         const DropoutMasks* masks = nullptr);
ForwardCache cheby_forward(const GcnModel& model, const Graph& g, const SparseMatrix& x,
                           const DropoutMasks* masks = nullptr);

enum class LossReduction { kSum, kMean };

struct LossOptions {
  double l2_weight = 0.0;
  bool l2_all_layers = false;
  LossReduction reduction = LossReduction::kSum;
};

// -sum_i ln Z[i, y_i] (divided by the label count for kMean, logs clamped
// at 1e-15) plus l2_weight/2 * ||W||^2 over the regularized layers.
double cross_entropy_loss(const DenseMatrix& z, std::span<const LabeledVertex> labels,
                          const GcnModel& model, const LossOptions& opts);

// Gradient of cross_entropy_loss with respect to every weight matrix,
// aligned with model.weights.
std::vector<DenseMatrix> backward(const ForwardCache& cache, std::span<const LabeledVertex> labels,
                                  const GcnModel& model, const Propagation& prop,
                                  const DropoutMasks* masks, const LossOptions& opts);

struct AdamState {
  std::vector<DenseMatrix> m;
  std::vector<DenseMatrix> v;
  std::size_t step = 0;

  static AdamState zeros_like(const std::vector<DenseMatrix>& weights);
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

void adam_step(std::vector<DenseMatrix>& weights, const std::vector<DenseMatrix>& grads,
               AdamState& state, double lr);

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t max_epochs = 200;
  double dropout_rate = 0.5;
  double l2_weight = 5e-4;
  bool l2_all_layers = false;
  std::size_t hidden_dim = 16;
  std::size_t layers = 2;
  std::size_t cheby_order = 2;
  // 0 disables early stopping; otherwise stop once the validation loss
  // exceeds the mean of the previous `early_stopping_window` values.
  std::size_t early_stopping_window = 0;
  bool normalize_features = true;
  LossReduction reduction = LossReduction::kMean;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  GcnModel model;
  std::vector<double> loss_history;
  std::vector<double> validation_loss_history;
  std::size_t epochs_run = 0;
  bool early_stopped = false;
  DenseMatrix softmax_outputs;  // no dropout
};

// Full-batch training on split.train. Validation labels are read only when
// early stopping is enabled. When `init` is given its weights are the
// starting point (and its architecture must match prop).
TrainResult train(const Propagation& prop, const SparseMatrix& features, std::size_t classes,
                  const LabelSplit& split, const TrainConfig& cfg,
                  const GcnModel* init = nullptr);

// Fraction of eval vertices whose row argmax matches the true label.
double predict_accuracy(const DenseMatrix& z, std::span<const std::size_t> true_labels,
                        std::span<const Index> eval);

}  // namespace gcnlab
