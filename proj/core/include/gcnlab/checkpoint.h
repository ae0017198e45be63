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

#include <filesystem>
#include <iosfwd>

#include "gcnlab/nn.h"

namespace gcnlab {

// Text checkpoint:
//
//   gcnlab-model 1
//   arch <gcn|fcn|cheby>
//   cheby_order <K>
//   dims <d0> <d1> ... <dL>
//   weight <layer> <tap> <rows> <cols>
//   <rows lines of cols values, shortest round-trip decimal>
//   ... one weight block per (layer, tap), layer-major ...
//   end
//
// Values round-trip exactly.
void write_checkpoint(const GcnModel& model, std::ostream& out);
GcnModel read_checkpoint(std::istream& in);

void save_checkpoint(const GcnModel& model, const std::filesystem::path& path);
GcnModel load_checkpoint(const std::filesystem::path& path);

}  // namespace gcnlab
