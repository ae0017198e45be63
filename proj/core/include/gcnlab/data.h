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
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "gcnlab/error.h"
#include "gcnlab/graph.h"
#include "gcnlab/label_split.h"
#include "gcnlab/sparse_matrix.h"

namespace gcnlab {

// Declared statistics from meta.json.
struct DatasetMeta {
  std::string name;
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t classes = 0;
  std::size_t features = 0;
};

struct Dataset {
  std::string name;
  DatasetMeta meta;
  Graph graph;
  SparseMatrix features;  // n x c, values exactly as stored on disk
  std::vector<std::size_t> labels;
  std::size_t classes = 0;
  std::vector<Index> canonical_test;
};

// Reads meta.json, edges.txt, features.mtx, labels.txt and test_index.txt
// from dir, then checks the result against meta.json (validate_stats).
Dataset load_dataset(const std::filesystem::path& dir);

// Writes the same directory layout load_dataset reads.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);

struct StatsReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t classes = 0;
  std::size_t features = 0;
  std::size_t components = 0;
  std::vector<Index> isolated;
};

class StatsMismatch : public Error {
 public:
  using Error::Error;
};

// Throws StatsMismatch naming expected and actual values when node, edge,
// class or feature counts disagree with the declared meta.
StatsReport validate_stats(const Dataset& ds);

struct PerClass {
  std::size_t count;
};
struct LabelRate {
  double rate;
};
using SplitSpec = std::variant<PerClass, LabelRate>;

enum class TestSetMode { kSample, kCanonical };

struct SplitOptions {
  SplitSpec spec = PerClass{20};
  std::size_t validation_size = 0;
  std::size_t test_size = 1000;
  TestSetMode test_mode = TestSetMode::kSample;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMaxSplitRetries = 1000;

// Uniform sampling without replacement. Label-rate mode draws
// round(rate * n) training vertices and redraws (up to kMaxSplitRetries
// times) until every class is represented.
LabelSplit sample_split(const Dataset& ds, const SplitOptions& opts);

}  // namespace gcnlab
