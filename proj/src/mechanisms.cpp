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

#include "treefl/mechanisms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "treefl/error.hpp"

namespace treefl {

Rational Rational::Make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kBadParams, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / (g ? g : 1), den / (g ? g : 1)};
}

namespace {

std::int64_t ParseInteger(std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::kParse, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::Parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Make(ParseInteger(text), 1);
  return Make(ParseInteger(text.substr(0, slash)), ParseInteger(text.substr(slash + 1)));
}

std::string Rational::ToString() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

void CheckAgent(const LocationProfile& profile, int agent) {
  if (agent < 1 || static_cast<std::size_t>(agent) > profile.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "agent " + std::to_string(agent) + " not in 1.." +
                                                 std::to_string(profile.size()));
  }
}

void CheckNonEmpty(const TreeNetwork& network, const LocationProfile& profile) {
  if (profile.empty()) throw Error(ErrorCode::kEmptyInput, "empty location profile");
  profile.Check(network);
}

// Starting at `start`, repeatedly moves down the branch whose agent count
// qualifies, stopping at the first point where none does. Movement between
// agent locations and nodes cannot change any branch count, so the walk
// jumps from stop to stop.
template <typename Qualifies>
Point DescendingWalk(const TreeNetwork& net, const LocationProfile& profile, Point cur,
                     Qualifies qualifies) {
  std::vector<std::pair<BranchKey, std::int64_t>> counts;
  while (true) {
    counts.clear();
    for (const Point& x : profile.points()) {
      const auto key = net.BranchOf(cur, x);
      if (!key) continue;
      auto it = std::find_if(counts.begin(), counts.end(),
                             [&](const auto& c) { return c.first == *key; });
      if (it == counts.end()) {
        counts.emplace_back(*key, 1);
      } else {
        ++it->second;
      }
    }
    auto chosen = std::find_if(counts.begin(), counts.end(),
                               [&](const auto& c) { return qualifies(c.second); });
    if (chosen == counts.end()) return cur;

    const BranchKey branch = chosen->first;
    const Point target = Point::AtNode(branch.toward);
    const double from = net.OffsetOn(branch.edge, cur);
    const double to = net.OffsetOn(branch.edge, target);
    const Point* next = nullptr;
    double next_gap = std::abs(to - from);
    for (const Point& x : profile.points()) {
      if (x.is_node() || x.edge() != branch.edge) continue;
      const double gap = (x.offset() - from) * (to > from ? 1.0 : -1.0);
      if (gap > 0.0 && gap < next_gap) {
        next = &x;
        next_gap = gap;
      }
    }
    cur = next ? *next : target;
  }
}

void CheckDgmQ(Rational q) {
  if (!(2 * q.num > q.den && q.num <= q.den)) {
    throw Error(ErrorCode::kQOutOfRange, "DGM needs 1/2 < q <= 1, got " + q.ToString());
  }
}

void CheckRandomizedDgmQ(Rational q) {
  if (!(2 * q.num > q.den && 3 * q.num <= 2 * q.den)) {
    throw Error(ErrorCode::kQOutOfRange, "randomized DGM needs 1/2 < q <= 2/3, got " + q.ToString());
  }
}

// Agent indices sorted by line coordinate (stable, so ties keep input order).
std::vector<std::size_t> SortedByCoordinate(const LineView& line, const LocationProfile& profile,
                                            std::vector<double>* coords) {
  coords->clear();
  for (const Point& x : profile.points()) coords->push_back(line.Coordinate(x));
  std::vector<std::size_t> order(profile.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return (*coords)[a] < (*coords)[b]; });
  return order;
}

double MeanCoordinate(const LineView& line, const LocationProfile& profile) {
  double total = 0.0;
  for (const Point& x : profile.points()) total += line.Coordinate(x);
  return total / static_cast<double>(profile.size());
}

}  // namespace

Point DictatorPoint(const TreeNetwork& network, const LocationProfile& profile, int agent) {
  CheckAgent(profile, agent);
  profile.Check(network);
  return profile[static_cast<std::size_t>(agent - 1)];
}

Point KthLocationPoint(const TreeNetwork& network, const LocationProfile& profile, int k) {
  const LineView line(network);
  CheckAgent(profile, k);
  profile.Check(network);
  std::vector<double> coords;
  const auto order = SortedByCoordinate(line, profile, &coords);
  return profile[order[static_cast<std::size_t>(k - 1)]];
}

Point TreeMedianPoint(const TreeNetwork& network, const LocationProfile& profile) {
  CheckNonEmpty(network, profile);
  const auto n = static_cast<std::int64_t>(profile.size());
  return DescendingWalk(network, profile, Point::AtNode(0),
                        [n](std::int64_t count) { return 2 * count > n; });
}

Point DgmPoint(const TreeNetwork& network, const LocationProfile& profile, int agent, Rational q) {
  CheckAgent(profile, agent);
  CheckDgmQ(q);
  profile.Check(network);
  const auto n = static_cast<std::int64_t>(profile.size());
  return DescendingWalk(network, profile, profile[static_cast<std::size_t>(agent - 1)],
                        [q, n](std::int64_t count) { return q.ReachedBy(count, n); });
}

LocationDistribution Dictator(const TreeNetwork& network, const LocationProfile& profile,
                              int agent) {
  return LocationDistribution::PointMass(DictatorPoint(network, profile, agent));
}

LocationDistribution KthLocation(const TreeNetwork& network, const LocationProfile& profile,
                                 int k) {
  return LocationDistribution::PointMass(KthLocationPoint(network, profile, k));
}

LocationDistribution TreeMedian(const TreeNetwork& network, const LocationProfile& profile) {
  return LocationDistribution::PointMass(TreeMedianPoint(network, profile));
}

LocationDistribution Dgm(const TreeNetwork& network, const LocationProfile& profile, int agent,
                         Rational q) {
  return LocationDistribution::PointMass(DgmPoint(network, profile, agent, q));
}

namespace {

LocationDistribution BoomerangAverage(const TreeNetwork& network, std::vector<Point> ys,
                                      const WeightVector& weights) {
  const Point average = WeightedAverage(network, ys, weights);
  std::vector<LocationDistribution::Atom> atoms;
  for (std::size_t i = 0; i < ys.size(); ++i) atoms.push_back({ys[i], weights[i] / 2.0});
  atoms.push_back({average, 0.5});
  return LocationDistribution::FromAtoms(std::move(atoms));
}

}  // namespace

LocationDistribution Pb(const TreeNetwork& network, const LocationProfile& profile,
                        const std::vector<MechanismSpec>& members, const WeightVector& weights) {
  if (members.empty()) throw Error(ErrorCode::kEmptyInput, "PB needs at least one member");
  if (weights.size() != members.size()) {
    throw Error(ErrorCode::kWeightInvalid, "PB has " + std::to_string(members.size()) +
                                               " members but " + std::to_string(weights.size()) +
                                               " weights");
  }
  std::vector<Point> ys;
  for (const MechanismSpec& member : members) {
    if (!member.IsBoomerangFamily()) {
      throw Error(ErrorCode::kNotBoomerang, "'" + member.Encode() + "' is not a boomerang mechanism");
    }
    ys.push_back(member.Evaluate(network, profile).support().front().point);
  }
  return BoomerangAverage(network, std::move(ys), weights);
}

LocationDistribution Lrm(const TreeNetwork& network, const LocationProfile& profile) {
  const LineView line(network);
  CheckNonEmpty(network, profile);
  std::vector<double> coords;
  const auto order = SortedByCoordinate(line, profile, &coords);
  const double left = coords[order.front()];
  const double right = coords[order.back()];
  return LocationDistribution::FromAtoms({{profile[order.front()], 0.25},
                                          {profile[order.back()], 0.25},
                                          {line.At((left + right) / 2.0), 0.5}});
}

LocationDistribution RandomDictator(const TreeNetwork& network, const LocationProfile& profile) {
  CheckNonEmpty(network, profile);
  const double p = 1.0 / static_cast<double>(profile.size());
  std::vector<LocationDistribution::Atom> atoms;
  for (const Point& x : profile.points()) atoms.push_back({x, p});
  return LocationDistribution::FromAtoms(std::move(atoms));
}

LocationDistribution HalfAvgHalfRd(const TreeNetwork& network, const LocationProfile& profile) {
  const LineView line(network);
  CheckNonEmpty(network, profile);
  const double p = 0.5 / static_cast<double>(profile.size());
  std::vector<LocationDistribution::Atom> atoms;
  for (const Point& x : profile.points()) atoms.push_back({x, p});
  atoms.push_back({line.At(MeanCoordinate(line, profile)), 0.5});
  return LocationDistribution::FromAtoms(std::move(atoms));
}

std::vector<Point> RandomizedDgmComponents(const TreeNetwork& network,
                                           const LocationProfile& profile, Rational q) {
  CheckRandomizedDgmQ(q);
  CheckNonEmpty(network, profile);
  std::vector<Point> ys;
  for (std::size_t i = 1; i <= profile.size(); ++i) {
    ys.push_back(DgmPoint(network, profile, static_cast<int>(i), q));
  }
  return ys;
}

LocationDistribution RandomizedDgm(const TreeNetwork& network, const LocationProfile& profile,
                                   Rational q) {
  auto ys = RandomizedDgmComponents(network, profile, q);
  const auto weights = WeightVector::Uniform(ys.size());
  return BoomerangAverage(network, std::move(ys), weights);
}

LocationDistribution ConsecutiveMidpoints(const TreeNetwork& network,
                                          const LocationProfile& profile) {
  const LineView line(network);
  if (profile.size() < 2) throw Error(ErrorCode::kNeedTwoAgents, "midpoints needs n >= 2");
  profile.Check(network);
  const double n = static_cast<double>(profile.size());
  std::vector<double> coords;
  const auto order = SortedByCoordinate(line, profile, &coords);
  std::vector<LocationDistribution::Atom> atoms{{profile[order.front()], 0.5 / n},
                                                {profile[order.back()], 0.5 / n}};
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    atoms.push_back({line.At((coords[order[k]] + coords[order[k + 1]]) / 2.0), 1.0 / n});
  }
  return LocationDistribution::FromAtoms(std::move(atoms));
}

LocationDistribution Mixture(const TreeNetwork& network, const LocationProfile& profile,
                             const std::vector<std::pair<MechanismSpec, double>>& components) {
  std::vector<double> probs;
  for (const auto& c : components) probs.push_back(c.second);
  const WeightVector weights(probs);
  std::vector<LocationDistribution::Atom> atoms;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const auto dist = components[k].first.Evaluate(network, profile);
    for (const auto& atom : dist.support()) {
      atoms.push_back({atom.point, weights[k] * atom.probability});
    }
  }
  return LocationDistribution::FromAtoms(std::move(atoms));
}

LocationDistribution SosOptimum(const TreeNetwork& network, const LocationProfile& profile) {
  return LocationDistribution::PointMass(Optimize(network, profile, Objective::kMiniSOS).point);
}

// ---------------------------------------------------------------------------
// MechanismSpec

MechanismSpec::MechanismSpec(Family family) : family_(std::move(family)) {
  if (const auto* pb = std::get_if<mech::Pb>(&family_)) {
    for (const auto& m : pb->members) {
      if (!m.IsBoomerangFamily()) {
        throw Error(ErrorCode::kNotBoomerang, "'" + m.Encode() + "' is not a boomerang mechanism");
      }
    }
    if (pb->members.size() != pb->weights.size()) {
      throw Error(ErrorCode::kWeightInvalid, "PB member and weight counts differ");
    }
    WeightVector check(pb->weights);
  } else if (const auto* mix = std::get_if<mech::Mixture>(&family_)) {
    std::vector<double> probs;
    for (const auto& c : mix->components) probs.push_back(c.second);
    WeightVector check(probs);
  } else if (const auto* dgm = std::get_if<mech::Dgm>(&family_)) {
    CheckDgmQ(dgm->q);
  } else if (const auto* rdgm = std::get_if<mech::RandomizedDgm>(&family_)) {
    CheckRandomizedDgmQ(rdgm->q);
  }
}

bool MechanismSpec::IsBoomerangFamily() const {
  return std::holds_alternative<mech::Dictator>(family_) ||
         std::holds_alternative<mech::KthLocation>(family_) ||
         std::holds_alternative<mech::TreeMedian>(family_) ||
         std::holds_alternative<mech::Dgm>(family_);
}

bool MechanismSpec::IsDeterministic() const {
  return IsBoomerangFamily() || std::holds_alternative<mech::SosOptimum>(family_);
}

bool MechanismSpec::RequiresLine() const {
  return std::visit(
      [](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, mech::KthLocation> || std::is_same_v<T, mech::Lrm> ||
                      std::is_same_v<T, mech::HalfAvgHalfRd> ||
                      std::is_same_v<T, mech::ConsecutiveMidpoints>) {
          return true;
        } else if constexpr (std::is_same_v<T, mech::Pb>) {
          return std::any_of(f.members.begin(), f.members.end(),
                             [](const MechanismSpec& m) { return m.RequiresLine(); });
        } else if constexpr (std::is_same_v<T, mech::Mixture>) {
          return std::any_of(f.components.begin(), f.components.end(),
                             [](const auto& c) { return c.first.RequiresLine(); });
        } else {
          return false;
        }
      },
      family_);
}

LocationDistribution MechanismSpec::Evaluate(const TreeNetwork& network,
                                             const LocationProfile& profile) const {
  return std::visit(
      [&](const auto& f) -> LocationDistribution {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, mech::Dictator>) {
          return Dictator(network, profile, f.agent);
        } else if constexpr (std::is_same_v<T, mech::KthLocation>) {
          const int k = f.from_last ? static_cast<int>(profile.size()) + 1 - f.k : f.k;
          return KthLocation(network, profile, k);
        } else if constexpr (std::is_same_v<T, mech::TreeMedian>) {
          return TreeMedian(network, profile);
        } else if constexpr (std::is_same_v<T, mech::Dgm>) {
          return Dgm(network, profile, f.agent, f.q);
        } else if constexpr (std::is_same_v<T, mech::Pb>) {
          return Pb(network, profile, f.members, WeightVector(f.weights));
        } else if constexpr (std::is_same_v<T, mech::Mixture>) {
          return Mixture(network, profile, f.components);
        } else if constexpr (std::is_same_v<T, mech::Lrm>) {
          return Lrm(network, profile);
        } else if constexpr (std::is_same_v<T, mech::RandomDictator>) {
          return RandomDictator(network, profile);
        } else if constexpr (std::is_same_v<T, mech::HalfAvgHalfRd>) {
          return HalfAvgHalfRd(network, profile);
        } else if constexpr (std::is_same_v<T, mech::RandomizedDgm>) {
          return RandomizedDgm(network, profile, f.q);
        } else if constexpr (std::is_same_v<T, mech::ConsecutiveMidpoints>) {
          return ConsecutiveMidpoints(network, profile);
        } else {
          return SosOptimum(network, profile);
        }
      },
      family_);
}

namespace {

std::string NumberText(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on `sep` outside of brackets and parentheses.
std::vector<std::string_view> SplitTopLevel(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (depth < 0) throw Error(ErrorCode::kParse, "unbalanced brackets in '" + std::string(s) + "'");
    if (c == sep && depth == 0) {
      parts.push_back(Trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw Error(ErrorCode::kParse, "unbalanced brackets in '" + std::string(s) + "'");
  parts.push_back(Trim(s.substr(start)));
  return parts;
}

std::string_view Unwrap(std::string_view s, char open, char close) {
  s = Trim(s);
  if (s.size() < 2 || s.front() != open || s.back() != close) {
    throw Error(ErrorCode::kParse, std::string("expected '") + open + "...'" + close +
                                       "' around '" + std::string(s) + "'");
  }
  return s.substr(1, s.size() - 2);
}

double ParseNumber(std::string_view text) {
  text = Trim(text);
  if (text.find('/') != std::string_view::npos) return Rational::Parse(text).value();
  try {
    std::size_t used = 0;
    const std::string owned(text);
    const double v = std::stod(owned, &used);
    if (used != owned.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "expected a number, got '" + std::string(text) + "'");
  }
}

int ParseIndex(std::string_view text) {
  const std::int64_t v = ParseInteger(Trim(text));
  if (v < 1 || v > 1'000'000) {
    throw Error(ErrorCode::kIndexOutOfRange, "agent index must be >= 1, got " + std::string(text));
  }
  return static_cast<int>(v);
}

void ExpectArgs(std::string_view head, const std::vector<std::string_view>& parts,
                std::size_t count) {
  if (parts.size() != count + 1) {
    throw Error(ErrorCode::kParse, "'" + std::string(head) + "' takes " + std::to_string(count) +
                                       " argument(s)");
  }
}

}  // namespace

MechanismSpec MechanismSpec::Parse(std::string_view text) {
  text = Trim(text);
  if (text.empty()) throw Error(ErrorCode::kParse, "empty mechanism spec");
  const auto parts = SplitTopLevel(text, ':');
  const std::string head(parts[0]);
  if (head == "dictator") {
    ExpectArgs(head, parts, 1);
    return MechanismSpec(mech::Dictator{ParseIndex(parts[1])});
  }
  if (head == "kth") {
    ExpectArgs(head, parts, 1);
    if (parts[1] == "n") return MechanismSpec(mech::KthLocation{1, true});
    return MechanismSpec(mech::KthLocation{ParseIndex(parts[1]), false});
  }
  if (head == "median") {
    ExpectArgs(head, parts, 0);
    return MechanismSpec(mech::TreeMedian{});
  }
  if (head == "dgm") {
    ExpectArgs(head, parts, 2);
    return MechanismSpec(mech::Dgm{ParseIndex(parts[1]), Rational::Parse(parts[2])});
  }
  if (head == "rdgm") {
    ExpectArgs(head, parts, 1);
    return MechanismSpec(mech::RandomizedDgm{Rational::Parse(parts[1])});
  }
  if (head == "rd" || head == "lrm" || head == "half-avg-rd" || head == "midpoints" ||
      head == "opt") {
    ExpectArgs(head, parts, 0);
    if (head == "rd") return MechanismSpec(mech::RandomDictator{});
    if (head == "lrm") return MechanismSpec(mech::Lrm{});
    if (head == "half-avg-rd") return MechanismSpec(mech::HalfAvgHalfRd{});
    if (head == "midpoints") return MechanismSpec(mech::ConsecutiveMidpoints{});
    return MechanismSpec(mech::SosOptimum{});
  }
  if (head == "pb") {
    ExpectArgs(head, parts, 2);
    mech::Pb pb;
    for (auto member : SplitTopLevel(Unwrap(parts[1], '[', ']'), ',')) {
      pb.members.push_back(Parse(member));
    }
    for (auto w : SplitTopLevel(Unwrap(parts[2], '[', ']'), ',')) pb.weights.push_back(ParseNumber(w));
    return MechanismSpec(std::move(pb));
  }
  if (head == "mix") {
    ExpectArgs(head, parts, 1);
    mech::Mixture mix;
    for (auto item : SplitTopLevel(Unwrap(parts[1], '[', ']'), ',')) {
      const auto pair = SplitTopLevel(Unwrap(item, '(', ')'), ',');
      if (pair.size() != 2) throw Error(ErrorCode::kParse, "mixture items are (spec,prob)");
      mix.components.emplace_back(Parse(pair[0]), ParseNumber(pair[1]));
    }
    return MechanismSpec(std::move(mix));
  }
  throw Error(ErrorCode::kParse, "unknown mechanism '" + head + "'");
}

std::string MechanismSpec::Encode() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, mech::Dictator>) {
          return "dictator:" + std::to_string(f.agent);
        } else if constexpr (std::is_same_v<T, mech::KthLocation>) {
          if (f.from_last && f.k == 1) return "kth:n";
          return "kth:" + std::to_string(f.k);
        } else if constexpr (std::is_same_v<T, mech::TreeMedian>) {
          return "median";
        } else if constexpr (std::is_same_v<T, mech::Dgm>) {
          return "dgm:" + std::to_string(f.agent) + ":" + f.q.ToString();
        } else if constexpr (std::is_same_v<T, mech::Pb>) {
          std::string out = "pb:[";
          for (std::size_t k = 0; k < f.members.size(); ++k) {
            out += (k ? "," : "") + f.members[k].Encode();
          }
          out += "]:[";
          for (std::size_t k = 0; k < f.weights.size(); ++k) {
            out += (k ? "," : "") + NumberText(f.weights[k]);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, mech::Mixture>) {
          std::string out = "mix:[";
          for (std::size_t k = 0; k < f.components.size(); ++k) {
            out += (k ? ",(" : "(") + f.components[k].first.Encode() + "," +
                   NumberText(f.components[k].second) + ")";
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, mech::Lrm>) {
          return "lrm";
        } else if constexpr (std::is_same_v<T, mech::RandomDictator>) {
          return "rd";
        } else if constexpr (std::is_same_v<T, mech::HalfAvgHalfRd>) {
          return "half-avg-rd";
        } else if constexpr (std::is_same_v<T, mech::RandomizedDgm>) {
          return "rdgm:" + f.q.ToString();
        } else if constexpr (std::is_same_v<T, mech::ConsecutiveMidpoints>) {
          return "midpoints";
        } else {
          return "opt";
        }
      },
      family_);
}

}  // namespace treefl
