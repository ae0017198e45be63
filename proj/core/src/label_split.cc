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

#include "gcnlab/label_split.h"

#include <string>

#include "gcnlab/error.h"

namespace gcnlab {

std::vector<std::vector<Index>> LabelSplit::train_by_class(std::size_t classes) const {
  std::vector<std::vector<Index>> out(classes);
  for (const auto& lv : train) {
    if (lv.label >= classes) throw InvalidArgument("label " + std::to_string(lv.label) + " out of range");
    out[lv.label].push_back(lv.vertex);
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (out[k].empty()) throw InvalidArgument("class " + std::to_string(k) + " has no training label");
  }
  return out;
}

void LabelSplit::validate(std::size_t n, std::size_t classes) const {
  std::vector<char> seen(n, 0);
  auto mark = [&](Index v, const char* set) {
    if (v >= n) throw InvalidArgument(std::string(set) + " vertex " + std::to_string(v) + " out of range");
    if (seen[v]) throw InvalidArgument(std::string(set) + " vertex " + std::to_string(v) + " appears twice");
    seen[v] = 1;
  };
  std::vector<char> present(classes, 0);
  for (const auto& lv : train) {
    mark(lv.vertex, "train");
    if (lv.label >= classes) throw InvalidArgument("train label out of range");
    present[lv.label] = 1;
  }
  for (std::size_t k = 0; k < classes; ++k)
    if (!present[k]) throw InvalidArgument("class " + std::to_string(k) + " has no training label");
  for (const auto& lv : validation) {
    mark(lv.vertex, "validation");
    if (lv.label >= classes) throw InvalidArgument("validation label out of range");
  }
  for (Index v : test) mark(v, "test");
}

LabelSplit with_added_labels(const LabelSplit& split, const std::vector<LabeledVertex>& added) {
  LabelSplit out = split;
  out.train.insert(out.train.end(), added.begin(), added.end());
  return out;
}

}  // namespace gcnlab
