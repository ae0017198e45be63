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
#include <optional>
#include <string>
#include <vector>

#include "gcnlab/graph.h"
#include "gcnlab/label_split.h"
#include "gcnlab/nn.h"
#include "gcnlab/parwalks.h"

namespace gcnlab {

enum class Method { kLp, kGcnMinusV, kGcnPlusV, kCheby, kCoTrain, kSelfTrain, kUnion, kIntersection };

// Names used on the command line and in result files: lp, gcn-v, gcn+v,
// cheby, cotrain, selftrain, union, intersection.
std::string to_string(Method m);
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();

// Everything a strategy may look at: structure, features and the class
// count. Ground-truth labels are not part of it; the only labels a
// strategy sees are the ones in its LabelSplit.
struct Task {
  const Graph& graph;
  const SparseMatrix& features;
  std::size_t classes;
};

struct StrategyConfig {
  Method method = Method::kGcnMinusV;
  double budget_multiplier = 3.0;
  TrainConfig train;
  double absorption_alpha = kDefaultAbsorptionAlpha;
  // Forces the per-class expansion size instead of deriving it from the
  // label budget.
  std::optional<std::size_t> per_class_override;
  // Validation window used by gcn+v.
  std::size_t validation_window = 10;

  void validate() const;
};

// ceil(n / d^tau) with d the average degree.
std::size_t estimate_label_budget(const Graph& g, std::size_t tau);

// max(0, ceil((multiplier * eta - existing) / classes)).
std::size_t per_class_addition(const Graph& g, std::size_t existing_labels, std::size_t classes,
                               std::size_t tau, double multiplier);

// Top-t vertices per class by softmax score, same order and exclusion
// rules as the random-walk expander.
Expansion expand_labels_selftrain(const DenseMatrix& z, const LabelSplit& split, std::size_t per_class);

// Pairs picked by either expander; a vertex picked with two different
// classes is dropped.
std::vector<LabeledVertex> union_of_picks(const std::vector<LabeledVertex>& a,
                                          const std::vector<LabeledVertex>& b);
// (vertex, class) pairs picked by both expanders.
std::vector<LabeledVertex> intersection_of_picks(const std::vector<LabeledVertex>& a,
                                                 const std::vector<LabeledVertex>& b);

struct StrategyResult {
  Method method = Method::kGcnMinusV;
  std::vector<std::size_t> predictions;  // class per vertex
  std::optional<TrainResult> training;   // absent for lp
  std::vector<LabeledVertex> added;      // pseudo-labels used for the final model
  std::size_t per_class = 0;             // expansion quota t
  bool expansion_truncated = false;
  bool empty_intersection = false;
  std::size_t epochs = 0;                // over all training stages
};

StrategyResult run_lp(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);
StrategyResult run_gcn(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);
StrategyResult run_cotrain(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);
StrategyResult run_selftrain(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);
StrategyResult run_union(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);
StrategyResult run_intersection(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);

// Dispatches on cfg.method. Only gcn+v reads split.validation.
StrategyResult run_strategy(const Task& task, const LabelSplit& split, const StrategyConfig& cfg);

}  // namespace gcnlab
