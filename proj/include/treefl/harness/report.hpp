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

// Aggregation of result rows into a bounds table.

#ifndef TREEFL_HARNESS_REPORT_HPP_
#define TREEFL_HARNESS_REPORT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treefl/harness/csv.hpp"

namespace treefl::report {

inline constexpr double kBoundTolerance = 1e-6;
inline constexpr double kRegretTolerance = 1e-7;

// Known approximation bound for a (mechanism, objective) pair, matched on the
// canonical spec encoding.
std::optional<double> KnownBound(std::string_view mechanism, std::string_view objective);

struct SummaryRow {
  std::string mechanism;
  std::string objective;
  std::string topology;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double max_regret = 0.0;  // NaN when no row measured regret
  std::size_t count = 0;     // rows with a positive optimum
  std::size_t excluded = 0;  // zero-optimum rows
  std::optional<double> bound;
  bool flagged = false;      // ratio above bound or regret above tolerance
};

// Groups by (mechanism, objective, topology) in first-seen order.
std::vector<SummaryRow> Summarize(const std::vector<csv::ResultRow>& rows);

std::size_t FlagCount(const std::vector<SummaryRow>& summary);
std::string FormatTable(const std::vector<SummaryRow>& summary);
std::string FormatCsv(const std::vector<SummaryRow>& summary);

}  // namespace treefl::report

#endif  // TREEFL_HARNESS_REPORT_HPP_
