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

#include "gcnlab/pipelines.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "gcnlab/error.h"

namespace gcnlab {

std::string to_string(Method m) {
  switch (m) {
    case Method::kLp: return "lp";
    case Method::kGcnMinusV: return "gcn-v";
    case Method::kGcnPlusV: return "gcn+v";
    case Method::kCheby: return "cheby";
    case Method::kCoTrain: return "cotrain";
    case Method::kSelfTrain: return "selftrain";
    case Method::kUnion: return "union";
    case Method::kIntersection: return "intersection";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::kLp,      Method::kCheby,     Method::kGcnMinusV,
                                           Method::kGcnPlusV, Method::kCoTrain,  Method::kSelfTrain,
                                           Method::kUnion,   Method::kIntersection};
  return methods;
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods())
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + name + "'");
}

void StrategyConfig::validate() const {
  if (!(budget_multiplier > 0.0)) throw InvalidArgument("budget multiplier must be positive");
  if (!(absorption_alpha > 0.0)) throw InvalidArgument("absorption alpha must be positive");
  train.validate();
}

std::size_t estimate_label_budget(const Graph& g, std::size_t tau) {
  if (tau == 0) throw InvalidArgument("estimate_label_budget: tau must be >= 1");
  const double d = average_degree(g);
  if (d <= 0.0) throw InvalidArgument("estimate_label_budget: zero average degree");
  return static_cast<std::size_t>(std::ceil(static_cast<double>(g.n()) / std::pow(d, static_cast<double>(tau))));
}

std::size_t per_class_addition(const Graph& g, std::size_t existing_labels, std::size_t classes,
                               std::size_t tau, double multiplier) {
  if (classes == 0) throw InvalidArgument("per_class_addition: no classes");
  const double target = multiplier * static_cast<double>(estimate_label_budget(g, tau));
  const double missing = target - static_cast<double>(existing_labels);
  if (missing <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(missing / static_cast<double>(classes)));
}

Expansion expand_labels_selftrain(const DenseMatrix& z, const LabelSplit& split, std::size_t per_class) {
  std::vector<std::vector<double>> scores(z.cols(), std::vector<double>(z.rows()));
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t k = 0; k < z.cols(); ++k) scores[k][i] = z(i, k);
  return select_top_per_class(scores, split.train, z.rows(), per_class);
}

std::vector<LabeledVertex> union_of_picks(const std::vector<LabeledVertex>& a,
                                          const std::vector<LabeledVertex>& b) {
  std::map<Index, std::size_t> label;
  std::map<Index, bool> conflict;
  for (const auto* side : {&a, &b}) {
    for (const auto& lv : *side) {
      auto [it, inserted] = label.emplace(lv.vertex, lv.label);
      if (!inserted && it->second != lv.label) conflict[lv.vertex] = true;
    }
  }
  std::vector<LabeledVertex> out;
  for (const auto& [v, y] : label)
    if (!conflict.count(v)) out.push_back({v, y});
  return out;
}

std::vector<LabeledVertex> intersection_of_picks(const std::vector<LabeledVertex>& a,
                                                 const std::vector<LabeledVertex>& b) {
  std::vector<LabeledVertex> sa(a), sb(b), out;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

namespace {

constexpr std::size_t kGcnLayers = 2;

TrainConfig without_validation(TrainConfig cfg) {
  cfg.early_stopping_window = 0;
  return cfg;
}

LabelSplit training_only(const LabelSplit& split) {
  LabelSplit s = split;
  s.validation.clear();
  return s;
}

StrategyResult finish(Method method, TrainResult tr) {
  StrategyResult r;
  r.method = method;
  r.predictions = argmax_rows(tr.softmax_outputs);
  r.epochs = tr.epochs_run;
  r.training = std::move(tr);
  return r;
}

std::size_t quota(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  if (cfg.per_class_override) return *cfg.per_class_override;
  return per_class_addition(task.graph, split.train.size(), task.classes, cfg.train.layers,
                            cfg.budget_multiplier);
}

TrainResult train_gcn_v(const Task& task, const LabelSplit& split, const StrategyConfig& cfg,
                        const Propagation& prop, const GcnModel* init = nullptr) {
  return train(prop, task.features, task.classes, training_only(split), without_validation(cfg.train), init);
}

struct SelfTrainStage {
  TrainResult pretrained;
  Expansion picks;
};

SelfTrainStage pretrain_and_pick(const Task& task, const LabelSplit& split, const StrategyConfig& cfg,
                                 const Propagation& prop, std::size_t t) {
  SelfTrainStage s{train_gcn_v(task, split, cfg, prop), {}};
  s.picks = expand_labels_selftrain(s.pretrained.softmax_outputs, split, t);
  return s;
}

// Continues from the pre-trained weights on the expanded label set with a
// fresh optimizer state and a full epoch budget.
StrategyResult continue_training(Method method, const Task& task, const LabelSplit& split,
                                 const StrategyConfig& cfg, const Propagation& prop,
                                 const TrainResult& pretrained, std::vector<LabeledVertex> added) {
  StrategyConfig stage2 = cfg;
  stage2.train.seed = derive_seed(cfg.train.seed, 2);
  TrainResult tr = train_gcn_v(task, with_added_labels(split, added), stage2, prop, &pretrained.model);
  const std::size_t epochs = pretrained.epochs_run + tr.epochs_run;
  StrategyResult r = finish(method, std::move(tr));
  r.epochs = epochs;
  r.added = std::move(added);
  return r;
}

}  // namespace

StrategyResult run_lp(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  const AbsorptionSystem sys(task.graph, cfg.absorption_alpha);
  StrategyResult r;
  r.method = Method::kLp;
  r.predictions = lp_classify(sys, training_only(split), task.classes);
  return r;
}

StrategyResult run_gcn(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  switch (cfg.method) {
    case Method::kGcnPlusV: {
      TrainConfig tc = cfg.train;
      tc.early_stopping_window = cfg.validation_window;
      return finish(cfg.method, train(Propagation::gcn(task.graph), task.features, task.classes, split, tc));
    }
    case Method::kCheby: {
      const Propagation prop = Propagation::chebyshev(task.graph, cfg.train.cheby_order);
      return finish(cfg.method, train_gcn_v(task, split, cfg, prop));
    }
    default:
      return finish(cfg.method, train_gcn_v(task, split, cfg, Propagation::gcn(task.graph)));
  }
}

StrategyResult run_cotrain(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  const std::size_t t = quota(task, split, cfg);
  const AbsorptionSystem sys(task.graph, cfg.absorption_alpha);
  Expansion picks = expand_labels_parwalks(sys, training_only(split), task.classes, t);
  StrategyResult r = finish(Method::kCoTrain,
                            train_gcn_v(task, with_added_labels(split, picks.added), cfg,
                                        Propagation::gcn(task.graph)));
  r.added = std::move(picks.added);
  r.per_class = t;
  r.expansion_truncated = picks.truncated;
  return r;
}

StrategyResult run_selftrain(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  const std::size_t t = quota(task, split, cfg);
  const Propagation prop = Propagation::gcn(task.graph);
  SelfTrainStage s = pretrain_and_pick(task, split, cfg, prop, t);
  StrategyResult r = continue_training(Method::kSelfTrain, task, split, cfg, prop, s.pretrained,
                                       std::move(s.picks.added));
  r.per_class = t;
  r.expansion_truncated = s.picks.truncated;
  return r;
}

namespace {

StrategyResult run_combined(Method method, const Task& task, const LabelSplit& split,
                            const StrategyConfig& cfg) {
  const std::size_t t = quota(task, split, cfg);
  const Propagation prop = Propagation::gcn(task.graph);
  const AbsorptionSystem sys(task.graph, cfg.absorption_alpha);
  const Expansion walk = expand_labels_parwalks(sys, training_only(split), task.classes, t);
  SelfTrainStage s = pretrain_and_pick(task, split, cfg, prop, t);
  std::vector<LabeledVertex> added = method == Method::kUnion
                                         ? union_of_picks(walk.added, s.picks.added)
                                         : intersection_of_picks(walk.added, s.picks.added);
  const bool empty = added.empty();
  StrategyResult r = continue_training(method, task, split, cfg, prop, s.pretrained, std::move(added));
  r.per_class = t;
  r.expansion_truncated = walk.truncated || s.picks.truncated;
  r.empty_intersection = method == Method::kIntersection && empty;
  return r;
}

}  // namespace

StrategyResult run_union(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  return run_combined(Method::kUnion, task, split, cfg);
}

StrategyResult run_intersection(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  return run_combined(Method::kIntersection, task, split, cfg);
}

StrategyResult run_strategy(const Task& task, const LabelSplit& split, const StrategyConfig& cfg) {
  cfg.validate();
  split.validate(task.graph.n(), task.classes);
  switch (cfg.method) {
    case Method::kLp: return run_lp(task, split, cfg);
    case Method::kGcnMinusV:
    case Method::kGcnPlusV:
    case Method::kCheby: return run_gcn(task, split, cfg);
    case Method::kCoTrain: return run_cotrain(task, split, cfg);
    case Method::kSelfTrain: return run_selftrain(task, split, cfg);
    case Method::kUnion: return run_union(task, split, cfg);
    case Method::kIntersection: return run_intersection(task, split, cfg);
  }
  throw InvalidArgument("run_strategy: unhandled method");
}

}  // namespace gcnlab
