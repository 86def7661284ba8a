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

#ifndef TREEFL_MECHANISMS_HPP_
#define TREEFL_MECHANISMS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "treefl/network.hpp"
#include "treefl/objectives.hpp"

namespace treefl {

// Exact fraction used for agent-count thresholds.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  // Reduces and normalizes the sign; throws kBadParams on a zero denominator.
  static Rational Make(std::int64_t num, std::int64_t den);
  // "2/3", "1", "0.5" is rejected (thresholds must be exact).
  static Rational Parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string ToString() const;

  // count >= q * n, by cross-multiplication.
  bool ReachedBy(std::int64_t count, std::int64_t n) const {
    return count * den >= num * n;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
};

class MechanismSpec;

namespace mech {

// Agent indices are 1-based throughout the spec API.
struct Dictator { int agent = 1; };
// k-th smallest coordinate; with from_last, k counts from the right (kth:n).
struct KthLocation { int k = 1; bool from_last = false; };
struct TreeMedian {};
struct Dgm { int agent = 1; Rational q; };
struct Pb {
  std::vector<MechanismSpec> members;
  std::vector<double> weights;
};
struct Mixture {
  std::vector<std::pair<MechanismSpec, double>> components;
};
struct Lrm {};
struct RandomDictator {};
struct HalfAvgHalfRd {};
struct RandomizedDgm { Rational q; };
struct ConsecutiveMidpoints {};
// Point mass at the miniSOS optimum. Not strategyproof; a baseline and
// negative control.
struct SosOptimum {};

}  // namespace mech

class MechanismSpec {
 public:
  using Family = std::variant<mech::Dictator, mech::KthLocation, mech::TreeMedian, mech::Dgm,
                              mech::Pb, mech::Mixture, mech::Lrm, mech::RandomDictator,
                              mech::HalfAvgHalfRd, mech::RandomizedDgm,
                              mech::ConsecutiveMidpoints, mech::SosOptimum>;

  MechanismSpec(Family family);  // NOLINT: implicit by design of the variant

  // Textual grammar:
  //   dictator:<i> | kth:<k> | kth:n | median | dgm:<i>:<q> | rd | lrm
  //   | half-avg-rd | rdgm:<q> | midpoints | opt
  //   | pb:[<spec>,...]:[<w>,...] | mix:[(<spec>,<p>),...]
  // Weights and probabilities are fractions ("1/2") or decimals.
  // Throws kParse, kQOutOfRange, kNotBoomerang or kWeightInvalid.
  static MechanismSpec Parse(std::string_view text);
  std::string Encode() const;

  const Family& family() const { return family_; }
  // Dictator, KthLocation, TreeMedian and DGM: the families PB accepts.
  bool IsBoomerangFamily() const;
  bool IsDeterministic() const;
  bool RequiresLine() const;

  LocationDistribution Evaluate(const TreeNetwork& network, const LocationProfile& profile) const;

 private:
  Family family_;
};

// Deterministic mechanisms, as points.
Point DictatorPoint(const TreeNetwork& network, const LocationProfile& profile, int agent);
Point KthLocationPoint(const TreeNetwork& network, const LocationProfile& profile, int k);
Point TreeMedianPoint(const TreeNetwork& network, const LocationProfile& profile);
Point DgmPoint(const TreeNetwork& network, const LocationProfile& profile, int agent, Rational q);

LocationDistribution Dictator(const TreeNetwork& network, const LocationProfile& profile, int agent);
LocationDistribution KthLocation(const TreeNetwork& network, const LocationProfile& profile, int k);
LocationDistribution TreeMedian(const TreeNetwork& network, const LocationProfile& profile);
LocationDistribution Dgm(const TreeNetwork& network, const LocationProfile& profile, int agent,
                         Rational q);
// Each y_i = members[i](x) with probability w_i / 2, wAvg(y, w) with 1/2.
LocationDistribution Pb(const TreeNetwork& network, const LocationProfile& profile,
                        const std::vector<MechanismSpec>& members, const WeightVector& weights);
LocationDistribution Lrm(const TreeNetwork& network, const LocationProfile& profile);
LocationDistribution RandomDictator(const TreeNetwork& network, const LocationProfile& profile);
LocationDistribution HalfAvgHalfRd(const TreeNetwork& network, const LocationProfile& profile);
LocationDistribution RandomizedDgm(const TreeNetwork& network, const LocationProfile& profile,
                                   Rational q);
LocationDistribution ConsecutiveMidpoints(const TreeNetwork& network,
                                          const LocationProfile& profile);
LocationDistribution Mixture(const TreeNetwork& network, const LocationProfile& profile,
                             const std::vector<std::pair<MechanismSpec, double>>& components);
LocationDistribution SosOptimum(const TreeNetwork& network, const LocationProfile& profile);

// The y_1..y_n computed by randomized DGM before averaging.
std::vector<Point> RandomizedDgmComponents(const TreeNetwork& network,
                                           const LocationProfile& profile, Rational q);

}  // namespace treefl

#endif  // TREEFL_MECHANISMS_HPP_
