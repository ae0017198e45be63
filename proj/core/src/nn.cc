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

#include "gcnlab/nn.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcnlab/error.h"

namespace gcnlab {

std::string to_string(Architecture arch) {
  switch (arch) {
    case Architecture::kGcn: return "gcn";
    case Architecture::kFcn: return "fcn";
    case Architecture::kCheby: return "cheby";
  }
  return "unknown";
}

Architecture parse_architecture(const std::string& name) {
  if (name == "gcn") return Architecture::kGcn;
  if (name == "fcn") return Architecture::kFcn;
  if (name == "cheby") return Architecture::kCheby;
  throw InvalidArgument("unknown architecture '" + name + "'");
}

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) throw InvalidArgument("glorot_init: empty shape");
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix w(rows, cols);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  return w;
}

GcnModel GcnModel::create(Architecture arch, std::vector<std::size_t> layer_dims, Rng& rng,
                          std::size_t cheby_order) {
  GcnModel m;
  m.arch = arch;
  m.layer_dims = std::move(layer_dims);
  m.cheby_order = cheby_order;
  if (m.layers() == 0) throw InvalidArgument("GcnModel: need at least one layer");
  for (std::size_t l = 0; l < m.layers(); ++l)
    for (std::size_t k = 0; k < m.taps(); ++k)
      m.weights.push_back(glorot_init(m.layer_dims[l], m.layer_dims[l + 1], rng));
  return m;
}

void GcnModel::validate() const {
  if (layers() == 0) throw InvalidArgument("GcnModel: no layers");
  if (weights.size() != layers() * taps()) throw ShapeMismatch("GcnModel: weight count mismatch");
  for (std::size_t l = 0; l < layers(); ++l) {
    for (std::size_t k = 0; k < taps(); ++k) {
      const DenseMatrix& w = weight(l, k);
      if (w.rows() != layer_dims[l] || w.cols() != layer_dims[l + 1]) {
        throw ShapeMismatch("GcnModel: layer " + std::to_string(l) + " weight is " +
                            std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                            ", expected " + std::to_string(layer_dims[l]) + "x" +
                            std::to_string(layer_dims[l + 1]));
      }
    }
  }
}

Propagation Propagation::gcn(const Graph& g) { return gcn(sym_normalize_with_self_loops(g)); }

Propagation Propagation::gcn(SparseMatrix a_hat) {
  Propagation p;
  p.arch = Architecture::kGcn;
  p.op = std::move(a_hat);
  return p;
}

Propagation Propagation::fcn() { return Propagation{}; }

Propagation Propagation::chebyshev(const Graph& g, std::size_t order) {
  const SparseMatrix& a = g.adjacency();
  std::vector<double> inv_sqrt = a.row_sums();
  for (double& d : inv_sqrt) d = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  std::vector<double> values(a.values().begin(), a.values().end());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto cols = a.row_cols(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      values[a.row_ptr()[r] + k] *= inv_sqrt[r] * inv_sqrt[cols[k]];
  }
  const SparseMatrix l_sym = add(SparseMatrix::identity(g.n()), a.with_values(std::move(values)),
                                 1.0, -1.0);
  const double lambda = largest_eigenvalue(l_sym).eigenvalue;
  Propagation p = chebyshev(add(l_sym, SparseMatrix::identity(g.n()), 2.0 / lambda, -1.0), order);
  p.lambda_max = lambda;
  return p;
}

Propagation Propagation::chebyshev(SparseMatrix scaled_laplacian, std::size_t order) {
  Propagation p;
  p.arch = Architecture::kCheby;
  p.op = std::move(scaled_laplacian);
  p.cheby_order = order;
  return p;
}

PowerIterationResult largest_eigenvalue(const SparseMatrix& m, double tol, std::size_t max_iter,
                                        std::uint64_t seed) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("largest_eigenvalue: bad shape");
  Rng rng(seed);
  std::vector<double> v(m.rows());
  for (double& x : v) x = rng.uniform(0.5, 1.5);
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    if (s == 0.0) return false;
    for (double& e : x) e /= s;
    return true;
  };
  normalize(v);
  double lambda = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::vector<double> w = spmv(m, v);
    double rq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) rq += v[i] * w[i];
    if (!normalize(w)) return {0.0, it};
    v = std::move(w);
    if (it > 1 && std::abs(rq - lambda) <= tol * std::abs(rq)) return {rq, it};
    lambda = rq;
  }
  throw ConvergenceError("largest_eigenvalue: power iteration did not converge", lambda, max_iter);
}

std::vector<DenseMatrix> chebyshev_basis(const SparseMatrix& m, const DenseMatrix& x,
                                         std::size_t order) {
  std::vector<DenseMatrix> basis;
  basis.reserve(order + 1);
  basis.push_back(x);
  if (order >= 1) basis.push_back(spmm(m, x));
  for (std::size_t k = 2; k <= order; ++k) {
    DenseMatrix next = spmm(m, basis[k - 1]);
    auto nv = next.values();
    auto prev = basis[k - 2].values();
    for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = 2.0 * nv[i] - prev[i];
    basis.push_back(std::move(next));
  }
  return basis;
}

DropoutMasks make_dropout_masks(const GcnModel& model, const SparseMatrix& x, double rate,
                                Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw InvalidArgument("dropout rate must be in [0,1)");
  const double keep_scale = 1.0 / (1.0 - rate);
  auto draw = [&](std::size_t count) {
    std::vector<double> mask(count);
    for (double& f : mask) f = rng.uniform() < rate ? 0.0 : keep_scale;
    return mask;
  };
  DropoutMasks masks;
  masks.layers.push_back(draw(x.nnz()));
  for (std::size_t l = 1; l < model.layers(); ++l)
    masks.layers.push_back(draw(x.rows() * model.layer_dims[l]));
  return masks;
}

namespace {

void check_compatible(const GcnModel& model, const Propagation& prop, const SparseMatrix& x) {
  model.validate();
  if (model.arch != prop.arch) {
    throw InvalidArgument("model architecture " + to_string(model.arch) +
                          " does not match propagation " + to_string(prop.arch));
  }
  if (model.arch == Architecture::kCheby && model.cheby_order != prop.cheby_order) {
    throw InvalidArgument("Chebyshev order mismatch between model and propagation");
  }
  if (x.cols() != model.layer_dims.front()) {
    throw ShapeMismatch("input has " + std::to_string(x.cols()) + " features, model expects " +
                        std::to_string(model.layer_dims.front()));
  }
  if (model.arch != Architecture::kFcn && prop.op.rows() != x.rows()) {
    throw ShapeMismatch("graph operator is " + std::to_string(prop.op.rows()) +
                        " vertices, input has " + std::to_string(x.rows()) + " rows");
  }
}

void check_masks(const GcnModel& model, const SparseMatrix& x, const DropoutMasks* masks) {
  if (!masks) return;
  if (masks->layers.size() != model.layers() || masks->layers[0].size() != x.nnz()) {
    throw ShapeMismatch("dropout masks do not match model/input");
  }
  for (std::size_t l = 1; l < model.layers(); ++l) {
    if (masks->layers[l].size() != x.rows() * model.layer_dims[l]) {
      throw ShapeMismatch("dropout mask for layer " + std::to_string(l) + " has wrong size");
    }
  }
}

void scale_in_place(std::span<double> values, const std::vector<double>& factors) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= factors[i];
}

}  // namespace

ForwardCache forward(const GcnModel& model, const Propagation& prop, const SparseMatrix& x,
                     const DropoutMasks* masks) {
  check_compatible(model, prop, x);
  check_masks(model, x, masks);

  ForwardCache c;
  if (masks) {
    std::vector<double> v(x.values().begin(), x.values().end());
    scale_in_place(v, masks->layers[0]);
    c.input = x.with_values(std::move(v));
  } else {
    c.input = x;
  }

  const std::size_t layers = model.layers();
  for (std::size_t l = 0; l < layers; ++l) {
    auto times_weight = [&](const DenseMatrix& w) {
      return l == 0 ? spmm(c.input, w) : matmul(c.masked[l - 1], w);
    };
    DenseMatrix s;
    switch (model.arch) {
      case Architecture::kFcn:
        s = times_weight(model.weight(l));
        break;
      case Architecture::kGcn:
        s = spmm(prop.op, times_weight(model.weight(l)));
        break;
      case Architecture::kCheby:
        for (std::size_t k = 0; k < model.taps(); ++k) {
          DenseMatrix term = std::move(chebyshev_basis(prop.op, times_weight(model.weight(l, k)), k)[k]);
          if (k == 0) {
            s = std::move(term);
          } else {
            axpy(1.0, term, s);
          }
        }
        break;
    }
    if (l + 1 < layers) {
      for (double& v : s.values()) v = std::max(v, 0.0);
      DenseMatrix masked = s;
      if (masks) scale_in_place(masked.values(), masks->layers[l + 1]);
      c.hidden.push_back(std::move(s));
      c.masked.push_back(std::move(masked));
    } else {
      c.logits = std::move(s);
    }
  }
  if (!c.logits.all_finite()) throw Error("forward: non-finite activations detected");
  c.z = softmax_rows(c.logits);
  return c;
}

ForwardCache gcn_forward(const GcnModel& model, const SparseMatrix& a_hat, const SparseMatrix& x,
                         const DropoutMasks* masks) {
  return forward(model, Propagation::gcn(a_hat), x, masks);
}

ForwardCache fcn_forward(const GcnModel& model, const SparseMatrix& x, const DropoutMasks* masks) {
  return forward(model, Propagation::fcn(), x, masks);
}

ForwardCache cheby_forward(const GcnModel& model, const Graph& g, const SparseMatrix& x,
                           const DropoutMasks* masks) {
  return forward(model, Propagation::chebyshev(g, model.cheby_order), x, masks);
}

namespace {

bool layer_regularized(std::size_t layer, const LossOptions& opts) {
  return layer == 0 || opts.l2_all_layers;
}

}  // namespace

double cross_entropy_loss(const DenseMatrix& z, std::span<const LabeledVertex> labels,
                          const GcnModel& model, const LossOptions& opts) {
  if (labels.empty()) throw InvalidArgument("cross_entropy_loss: empty label set");
  double data = 0.0;
  for (const auto& lv : labels) {
    if (lv.vertex >= z.rows() || lv.label >= z.cols()) {
      throw ShapeMismatch("cross_entropy_loss: label outside prediction matrix");
    }
    data -= std::log(std::max(z(lv.vertex, lv.label), 1e-15));
  }
  if (opts.reduction == LossReduction::kMean) data /= static_cast<double>(labels.size());
  double reg = 0.0;
  if (opts.l2_weight != 0.0) {
    for (std::size_t l = 0; l < model.layers(); ++l) {
      if (!layer_regularized(l, opts)) continue;
      for (std::size_t k = 0; k < model.taps(); ++k) reg += frobenius_norm_squared(model.weight(l, k));
    }
  }
  return data + 0.5 * opts.l2_weight * reg;
}

std::vector<DenseMatrix> backward(const ForwardCache& cache, std::span<const LabeledVertex> labels,
                                  const GcnModel& model, const Propagation& prop,
                                  const DropoutMasks* masks, const LossOptions& opts) {
  if (labels.empty()) throw InvalidArgument("backward: empty label set");
  const std::size_t layers = model.layers();
  if (cache.hidden.size() + 1 != layers || cache.logits.cols() != model.layer_dims.back() ||
      cache.z.rows() != cache.input.rows()) {
    throw ShapeMismatch("backward: cache does not match model");
  }

  const double scale =
      opts.reduction == LossReduction::kMean ? 1.0 / static_cast<double>(labels.size()) : 1.0;
  DenseMatrix grad(cache.z.rows(), cache.z.cols());
  for (const auto& lv : labels) {
    auto zr = cache.z.row(lv.vertex);
    auto gr = grad.row(lv.vertex);
    for (std::size_t j = 0; j < zr.size(); ++j) gr[j] += scale * zr[j];
    gr[lv.label] -= scale;
  }

  std::vector<DenseMatrix> grads(model.weights.size());
  for (std::size_t l = layers; l-- > 0;) {
    std::vector<DenseMatrix> d_pre;  // gradient w.r.t. (input * weight) per tap
    switch (model.arch) {
      case Architecture::kFcn:
        d_pre.push_back(grad);
        break;
      case Architecture::kGcn:
        d_pre.push_back(spmm_transposed(prop.op, grad));
        break;
      case Architecture::kCheby:
        // The scaled Laplacian is symmetric, so T_k(op)^T = T_k(op).
        d_pre = chebyshev_basis(prop.op, grad, model.cheby_order);
        break;
    }
    for (std::size_t k = 0; k < model.taps(); ++k) {
      grads[l * model.taps() + k] =
          l == 0 ? spmm_transposed(cache.input, d_pre[k]) : matmul_tn(cache.masked[l - 1], d_pre[k]);
    }
    if (l == 0) break;
    DenseMatrix d_input = matmul_nt(d_pre[0], model.weight(l, 0));
    for (std::size_t k = 1; k < model.taps(); ++k) axpy(1.0, matmul_nt(d_pre[k], model.weight(l, k)), d_input);
    auto dv = d_input.values();
    if (masks) scale_in_place(dv, masks->layers[l]);
    auto hv = cache.hidden[l - 1].values();
    for (std::size_t i = 0; i < dv.size(); ++i)
      if (!(hv[i] > 0.0)) dv[i] = 0.0;
    grad = std::move(d_input);
  }

  if (opts.l2_weight != 0.0) {
    for (std::size_t l = 0; l < layers; ++l) {
      if (!layer_regularized(l, opts)) continue;
      for (std::size_t k = 0; k < model.taps(); ++k)
        axpy(opts.l2_weight, model.weight(l, k), grads[l * model.taps() + k]);
    }
  }
  return grads;
}

AdamState AdamState::zeros_like(const std::vector<DenseMatrix>& weights) {
  AdamState s;
  for (const auto& w : weights) {
    s.m.emplace_back(w.rows(), w.cols());
    s.v.emplace_back(w.rows(), w.cols());
  }
  return s;
}

void adam_step(std::vector<DenseMatrix>& weights, const std::vector<DenseMatrix>& grads,
               AdamState& state, double lr) {
  if (weights.size() != grads.size() || weights.size() != state.m.size()) {
    throw ShapeMismatch("adam_step: weights, gradients and state disagree");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(kAdamBeta1, t);
  const double c2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    auto w = weights[i].values();
    auto g = grads[i].values();
    auto m = state.m[i].values();
    auto v = state.v[i].values();
    if (g.size() != w.size()) throw ShapeMismatch("adam_step: gradient shape mismatch");
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = kAdamBeta1 * m[j] + (1.0 - kAdamBeta1) * g[j];
      v[j] = kAdamBeta2 * v[j] + (1.0 - kAdamBeta2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      w[j] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw InvalidArgument("dropout rate must be in [0,1)");
  if (l2_weight < 0.0) throw InvalidArgument("L2 weight must be nonnegative");
  if (layers == 0) throw InvalidArgument("need at least one layer");
  if (layers > 1 && hidden_dim == 0) throw InvalidArgument("hidden width must be positive");
}

TrainResult train(const Propagation& prop, const SparseMatrix& features, std::size_t classes,
                  const LabelSplit& split, const TrainConfig& cfg, const GcnModel* init) {
  cfg.validate();
  if (split.train.empty()) throw InvalidArgument("train: no training labels");
  const SparseMatrix x = cfg.normalize_features ? row_normalize(features) : features;

  Rng init_rng(derive_seed(cfg.seed, 0));
  Rng dropout_rng(derive_seed(cfg.seed, 1));

  TrainResult result;
  if (init) {
    result.model = *init;
  } else {
    std::vector<std::size_t> dims{x.cols()};
    for (std::size_t l = 1; l < cfg.layers; ++l) dims.push_back(cfg.hidden_dim);
    dims.push_back(classes);
    result.model = GcnModel::create(prop.arch, std::move(dims), init_rng, cfg.cheby_order);
  }
  GcnModel& model = result.model;
  if (model.layer_dims.back() != classes) throw ShapeMismatch("train: model output width != classes");

  const LossOptions opts{cfg.l2_weight, cfg.l2_all_layers, cfg.reduction};
  const bool early_stopping = cfg.early_stopping_window > 0;
  if (early_stopping && split.validation.empty()) {
    throw InvalidArgument("train: early stopping requires validation labels");
  }
  AdamState adam = AdamState::zeros_like(model.weights);

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::optional<DropoutMasks> masks;
    if (cfg.dropout_rate > 0.0) masks = make_dropout_masks(model, x, cfg.dropout_rate, dropout_rng);
    const DropoutMasks* mp = masks ? &*masks : nullptr;

    ForwardCache cache;
    try {
      cache = forward(model, prop, x, mp);
    } catch (const Error&) {
      throw DivergenceError("train: non-finite activations at epoch " + std::to_string(epoch), epoch);
    }
    const double loss = cross_entropy_loss(cache.z, split.train, model, opts);
    if (!std::isfinite(loss)) {
      throw DivergenceError("train: loss became non-finite at epoch " + std::to_string(epoch), epoch);
    }
    result.loss_history.push_back(loss);
    adam_step(model.weights, backward(cache, split.train, model, prop, mp, opts), adam,
              cfg.learning_rate);
    ++result.epochs_run;

    if (early_stopping) {
      const ForwardCache eval = forward(model, prop, x);
      const double val = cross_entropy_loss(eval.z, split.validation, model, opts);
      auto& hist = result.validation_loss_history;
      const std::size_t w = cfg.early_stopping_window;
      bool stop = false;
      if (hist.size() >= w) {
        const double mean = std::accumulate(hist.end() - static_cast<std::ptrdiff_t>(w), hist.end(), 0.0) /
                            static_cast<double>(w);
        stop = val > mean;
      }
      hist.push_back(val);
      if (stop) {
        result.early_stopped = true;
        break;
      }
    }
  }
  result.softmax_outputs = forward(model, prop, x).z;
  return result;
}

double predict_accuracy(const DenseMatrix& z, std::span<const std::size_t> true_labels,
                        std::span<const Index> eval) {
  if (eval.empty()) throw InvalidArgument("predict_accuracy: empty evaluation set");
  std::size_t correct = 0;
  for (Index v : eval) {
    if (v >= z.rows() || v >= true_labels.size()) throw InvalidArgument("predict_accuracy: index out of range");
    auto r = z.row(v);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j)
      if (r[j] > r[best]) best = j;
    if (best == true_labels[v]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval.size());
}

}  // namespace gcnlab
