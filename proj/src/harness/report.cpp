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

#include "treefl/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "treefl/mechanisms.hpp"
#include "treefl/objectives.hpp"

namespace treefl::report {
namespace {

struct Bound {
  const char* mechanism;
  Objective objective;
  double value;
};

const Bound kBounds[] = {
    {"median", Objective::kMiniSOS, 2.0},      {"median", Objective::kMinisum, 1.0},
    {"rd", Objective::kMiniSOS, 2.0},          {"half-avg-rd", Objective::kMiniSOS, 1.5},
    {"rdgm:2/3", Objective::kMiniSOS, 1.83},   {"lrm", Objective::kMinimax, 1.5},
    {"kth:1", Objective::kMinimax, 2.0},       {"kth:n", Objective::kMinimax, 2.0},
};

std::string Canonical(std::string_view spec) {
  try {
    return MechanismSpec::Parse(spec).Encode();
  } catch (const std::exception&) {
    return std::string(spec);
  }
}

std::string Num(double v, const char* fmt = "%.6f") {
  if (std::isnan(v)) return "-";
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::optional<double> KnownBound(std::string_view mechanism, std::string_view objective) {
  Objective obj;
  try {
    obj = ParseObjective(objective);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const std::string key = Canonical(mechanism);
  for (const Bound& b : kBounds) {
    if (b.objective == obj && Canonical(b.mechanism) == key) return b.value;
  }
  return std::nullopt;
}

std::vector<SummaryRow> Summarize(const std::vector<csv::ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot;
  std::vector<double> sums;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.mechanism, r.objective, r.topology);
    auto it = slot.find(key);
    if (it == slot.end()) {
      SummaryRow s;
      s.mechanism = r.mechanism;
      s.objective = r.objective;
      s.topology = r.topology;
      s.max_ratio = std::nan("");
      s.mean_ratio = std::nan("");
      s.max_regret = std::nan("");
      s.bound = KnownBound(r.mechanism, r.objective);
      it = slot.emplace(key, out.size()).first;
      out.push_back(s);
      sums.push_back(0.0);
    }
    SummaryRow& s = out[it->second];
    if (!std::isnan(r.max_regret)) {
      s.max_regret = std::isnan(s.max_regret) ? r.max_regret : std::max(s.max_regret, r.max_regret);
    }
    if (!(r.opt_cost > 0.0) || !std::isfinite(r.ratio)) {
      ++s.excluded;
      continue;
    }
    ++s.count;
    sums[it->second] += r.ratio;
    s.max_ratio = std::isnan(s.max_ratio) ? r.ratio : std::max(s.max_ratio, r.ratio);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    SummaryRow& s = out[k];
    if (s.count > 0) s.mean_ratio = sums[k] / static_cast<double>(s.count);
    const bool over_bound = s.bound && s.count > 0 && s.max_ratio > *s.bound + kBoundTolerance;
    const bool regret = !std::isnan(s.max_regret) && s.max_regret > kRegretTolerance;
    s.flagged = over_bound || regret;
  }
  return out;
}

std::size_t FlagCount(const std::vector<SummaryRow>& summary) {
  return static_cast<std::size_t>(
      std::count_if(summary.begin(), summary.end(), [](const SummaryRow& s) { return s.flagged; }));
}

std::string FormatTable(const std::vector<SummaryRow>& summary) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-8s %-12s %10s %10s %8s %10s %7s %7s  %s\n",
                "mechanism", "obj", "topology", "max", "mean", "bound", "regret", "count",
                "zero", "flag");
  out += line;
  for (const auto& s : summary) {
    std::snprintf(line, sizeof line, "%-28s %-8s %-12s %10s %10s %8s %10s %7zu %7zu  %s\n",
                  s.mechanism.c_str(), s.objective.c_str(), s.topology.c_str(),
                  Num(s.max_ratio).c_str(), Num(s.mean_ratio).c_str(),
                  s.bound ? Num(*s.bound, "%.2f").c_str() : "-", Num(s.max_regret, "%.2e").c_str(),
                  s.count, s.excluded, s.flagged ? "FLAG" : "");
    out += line;
  }
  out += std::to_string(FlagCount(summary)) + " flagged\n";
  return out;
}

std::string FormatCsv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "mechanism,objective,topology,max_ratio,mean_ratio,bound,max_regret,count,excluded,flagged\n";
  for (const auto& s : summary) {
    out += csv::Quote(s.mechanism) + ',' + s.objective + ',' + s.topology + ',' +
           Num(s.max_ratio, "%.17g") + ',' + Num(s.mean_ratio, "%.17g") + ',' +
           (s.bound ? Num(*s.bound, "%.17g") : "") + ',' + Num(s.max_regret, "%.17g") + ',' +
           std::to_string(s.count) + ',' + std::to_string(s.excluded) + ',' +
           (s.flagged ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace treefl::report
