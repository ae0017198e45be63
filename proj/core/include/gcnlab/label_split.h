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
#include <vector>

#include "gcnlab/sparse_matrix.h"

namespace gcnlab {

struct LabeledVertex {
  Index vertex;
  std::size_t label;

  bool operator==(const LabeledVertex&) const = default;
  auto operator<=>(const LabeledVertex&) const = default;
};

// The partial labeling seen by one experiment run. Validation labels are
// carried alongside the vertices so that training code never needs the
// ground-truth label vector.
struct LabelSplit {
  std::vector<LabeledVertex> train;
  std::vector<LabeledVertex> validation;
  std::vector<Index> test;
  std::uint64_t seed = 0;
  std::size_t sampling_retries = 0;

  // Train vertices grouped by class; throws if a class in [0, classes) is empty.
  std::vector<std::vector<Index>> train_by_class(std::size_t classes) const;

  // Throws unless train/validation/test are pairwise disjoint, in range,
  // free of duplicates, and labels are < classes.
  void validate(std::size_t n, std::size_t classes) const;
};

// Outcome of a label-expansion step.
struct Expansion {
  std::vector<LabeledVertex> added;
  bool truncated = false;  // some class could not receive its full quota
};

// Copy of split with extra training labels appended.
LabelSplit with_added_labels(const LabelSplit& split, const std::vector<LabeledVertex>& added);

}  // namespace gcnlab
