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

#include "gcnlab/checkpoint.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "gcnlab/error.h"

namespace gcnlab {

namespace {

constexpr const char* kMagic = "gcnlab-model";
constexpr int kVersion = 1;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

[[noreturn]] void fail(const std::string& msg) { throw ParseError("checkpoint", 0, msg); }

std::string expect_word(std::istream& in, const char* word) {
  std::string tok;
  if (!(in >> tok) || tok != word) fail(std::string("expected '") + word + "', got '" + tok + "'");
  return tok;
}

}  // namespace

void write_checkpoint(const GcnModel& model, std::ostream& out) {
  model.validate();
  out << kMagic << ' ' << kVersion << '\n';
  out << "arch " << to_string(model.arch) << '\n';
  out << "cheby_order " << model.cheby_order << '\n';
  out << "dims";
  for (std::size_t d : model.layer_dims) out << ' ' << d;
  out << '\n';
  for (std::size_t l = 0; l < model.layers(); ++l) {
    for (std::size_t k = 0; k < model.taps(); ++k) {
      const DenseMatrix& w = model.weight(l, k);
      out << "weight " << l << ' ' << k << ' ' << w.rows() << ' ' << w.cols() << '\n';
      for (std::size_t r = 0; r < w.rows(); ++r) {
        auto row = w.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << format_double(row[c]);
        out << '\n';
      }
    }
  }
  out << "end\n";
}

GcnModel read_checkpoint(std::istream& in) {
  expect_word(in, kMagic);
  int version = 0;
  if (!(in >> version) || version != kVersion) fail("unsupported version");
  GcnModel m;
  std::string arch;
  expect_word(in, "arch");
  in >> arch;
  m.arch = parse_architecture(arch);
  expect_word(in, "cheby_order");
  if (!(in >> m.cheby_order)) fail("bad cheby_order");
  expect_word(in, "dims");
  std::string line;
  std::getline(in, line);
  std::istringstream dims(line);
  for (std::size_t d; dims >> d;) m.layer_dims.push_back(d);
  if (m.layer_dims.size() < 2) fail("need at least two dims");
  for (std::size_t l = 0; l < m.layers(); ++l) {
    for (std::size_t k = 0; k < m.taps(); ++k) {
      std::size_t fl = 0, fk = 0, rows = 0, cols = 0;
      expect_word(in, "weight");
      if (!(in >> fl >> fk >> rows >> cols) || fl != l || fk != k) fail("weight block out of order");
      std::vector<double> data(rows * cols);
      for (double& v : data) {
        std::string tok;
        if (!(in >> tok)) fail("truncated weight block");
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad value '" + tok + "'");
      }
      m.weights.emplace_back(rows, cols, std::move(data));
    }
  }
  expect_word(in, "end");
  m.validate();
  return m;
}

void save_checkpoint(const GcnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  write_checkpoint(model, out);
}

GcnModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace gcnlab
