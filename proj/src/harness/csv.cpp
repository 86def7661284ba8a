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

#include "treefl/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "treefl/error.hpp"

namespace treefl::csv {
namespace {

const char* const kColumns[] = {"instance_digest", "mechanism", "objective", "mech_cost",
                                "opt_cost",        "ratio",     "max_regret", "seed",
                                "topology"};

std::string Real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Splits one CSV record; returns false on an unterminated quote.
bool Split(const std::string& line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return !quoted;
}

[[noreturn]] void Bad(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedCSV, source + ":" + std::to_string(line) + ": " + what);
}

double ParseReal(const std::string& s, const std::string& source, std::size_t line,
                 const char* column) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    Bad(source, line, std::string("bad number in ") + column + ": '" + s + "'");
  }
  return v;
}

template <typename T>
T ParseUnsigned(const std::string& s, const std::string& source, std::size_t line,
                const char* column) {
  T v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    Bad(source, line, std::string("bad integer in ") + column + ": '" + s + "'");
  }
  return v;
}

}  // namespace

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Header(bool plot) {
  std::string out;
  for (const char* c : kColumns) {
    if (!out.empty()) out += ',';
    out += c;
  }
  if (plot) out += ",index";
  return out;
}

std::string FormatRow(const ResultRow& row, bool plot) {
  std::string out = Quote(row.instance_digest) + ',' + Quote(row.mechanism) + ',' +
                    Quote(row.objective) + ',' + Real(row.mech_cost) + ',' + Real(row.opt_cost) +
                    ',' + Real(row.ratio) + ',' + Real(row.max_regret) + ',' +
                    std::to_string(row.seed) + ',' + Quote(row.topology);
  if (plot) out += ',' + (row.index ? std::to_string(*row.index) : std::string());
  return out;
}

void Write(std::ostream& out, const std::vector<ResultRow>& rows, bool plot) {
  out << Header(plot) << '\n';
  for (const auto& row : rows) out << FormatRow(row, plot) << '\n';
}

std::vector<ResultRow> Read(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) Bad(source, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool plot = false;
  if (line == Header(true)) {
    plot = true;
  } else if (line != Header(false)) {
    Bad(source, 1, "unexpected header '" + line + "'");
  }
  const std::size_t width = plot ? 10 : 9;
  std::vector<ResultRow> rows;
  std::vector<std::string> f;
  for (std::size_t number = 2; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!Split(line, f)) Bad(source, number, "unterminated quote");
    if (f.size() != width) {
      Bad(source, number,
          "expected " + std::to_string(width) + " fields, found " + std::to_string(f.size()));
    }
    ResultRow row;
    row.instance_digest = f[0];
    row.mechanism = f[1];
    row.objective = f[2];
    row.mech_cost = ParseReal(f[3], source, number, "mech_cost");
    row.opt_cost = ParseReal(f[4], source, number, "opt_cost");
    row.ratio = ParseReal(f[5], source, number, "ratio");
    row.max_regret = ParseReal(f[6], source, number, "max_regret");
    row.seed = ParseUnsigned<std::uint64_t>(f[7], source, number, "seed");
    row.topology = f[8];
    if (plot && !f[9].empty()) row.index = ParseUnsigned<std::size_t>(f[9], source, number, "index");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformedCSV, path + ": cannot open file");
  return Read(in, path);
}

}  // namespace treefl::csv
