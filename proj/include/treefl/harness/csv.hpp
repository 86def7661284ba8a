// Copyright 2026 The treefl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TREEFL_HARNESS_CSV_HPP_
#define TREEFL_HARNESS_CSV_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treefl::csv {

// One evaluated instance. `max_regret` is NaN when no SP check was run; a
// zero optimum with nonzero mechanism cost is written with ratio inf.
struct ResultRow {
  std::string instance_digest;
  std::string mechanism;
  std::string objective;
  double mech_cost = 0.0;
  double opt_cost = 0.0;
  double ratio = 0.0;
  double max_regret = 0.0;
  std::uint64_t seed = 0;
  std::string topology;
  std::optional<std::size_t> index;  // written only with plot columns
};

std::string Header(bool plot);
std::string FormatRow(const ResultRow& row, bool plot);
// Quotes a field when it holds a comma, quote or newline.
std::string Quote(const std::string& field);

void Write(std::ostream& out, const std::vector<ResultRow>& rows, bool plot);

// Reads rows written by Write, with or without the index column.
// Throws kMalformedCSV naming `source` and the line number.
std::vector<ResultRow> Read(std::istream& in, const std::string& source);
std::vector<ResultRow> ReadFile(const std::string& path);

}  // namespace treefl::csv

#endif  // TREEFL_HARNESS_CSV_HPP_
