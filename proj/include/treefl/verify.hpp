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

#ifndef TREEFL_VERIFY_HPP_
#define TREEFL_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treefl/generator.hpp"
#include "treefl/mechanisms.hpp"
#include "treefl/network.hpp"
#include "treefl/objectives.hpp"

namespace treefl {

inline constexpr double kDefaultSpTolerance = 1e-7;
inline constexpr double kDefaultGridFraction = 1.0 / 16.0;
// Optimal costs at or below this are treated as zero.
inline constexpr double kZeroCost = 1e-12;

using Mechanism =
    std::function<LocationDistribution(const TreeNetwork&, const LocationProfile&)>;

Mechanism AsMechanism(MechanismSpec spec);

// Candidate misreports: every node, every agent location, and an interior
// grid on each edge with spacing grid_fraction * length.
class DeviationSet {
 public:
  static DeviationSet Standard(const TreeNetwork& network, const LocationProfile& profile,
                               double grid_fraction = kDefaultGridFraction);
  static DeviationSet FromPoints(std::vector<Point> points);

  std::span<const Point> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Point> points_;
};

struct SpWorstCase {
  std::size_t agent;  // 0-based
  Point misreport;
  double true_cost;
  double deviated_cost;
};

struct SPReport {
  double max_regret = 0.0;
  std::optional<SpWorstCase> worst;
  std::size_t tested_count = 0;
  bool passed = true;
};

// Regret of a misreport is cost(f(x), x_i) - cost(f(x'_i, x_-i), x_i).
SPReport SpCheck(const Mechanism& mechanism, const TreeNetwork& network,
                 const LocationProfile& profile, const DeviationSet& deviations,
                 double tolerance = kDefaultSpTolerance);

struct BoomerangWorstCase {
  std::size_t agent;
  Point misreport;
  double cost_increase;  // cost(f(x'), x_i) - cost(f(x), x_i)
  double movement;       // d(f(x'), f(x))
};

struct BoomerangReport {
  double max_violation = 0.0;
  std::optional<BoomerangWorstCase> worst;
  std::size_t tested_count = 0;
  bool passed = true;
};

// Throws kNotDeterministic if any evaluated output has more than one atom.
BoomerangReport BoomerangCheck(const Mechanism& mechanism, const TreeNetwork& network,
                               const LocationProfile& profile, const DeviationSet& deviations,
                               double tolerance = kDefaultSpTolerance);

struct RatioReport {
  double mechanism_cost = 0.0;
  double optimal_cost = 0.0;
  double ratio = 1.0;
  bool exact = false;  // both costs zero
  std::string digest;
};

// Stable FNV-1a digest of the exact instance contents.
std::string InstanceDigest(const TreeNetwork& network, const LocationProfile& profile);

// Throws kDegenerateOptimum when the optimum costs zero but the mechanism
// does not.
RatioReport ApproxRatio(const Mechanism& mechanism, const TreeNetwork& network,
                        const LocationProfile& profile, Objective objective);

struct SearchResult {
  RatioReport worst;
  std::optional<Instance> instance;
  double worst_before_climb = 0.0;
  std::size_t evaluated = 0;
  std::size_t degenerate = 0;  // zero-optimum instances, excluded
  // One report per generated instance, in order. Zero-optimum instances are
  // marked exact, or carry an infinite ratio when the mechanism cost is not 0.
  std::vector<RatioReport> samples;
};

// Random instances from `config` (its seed replaced by `seed`), then
// hill-climbing on the worst one: perturb one agent by +-step along its edge,
// keep on improvement, halve the step on failure.
SearchResult RatioSearch(const Mechanism& mechanism, Objective objective,
                         const GeneratorConfig& config, std::size_t budget, std::uint64_t seed,
                         int hill_iterations = 200);

// Moves p by |delta| along its edge (sign chooses direction), or into a random
// incident edge when p is a node. Clamped at edge endpoints.
Point Perturb(const TreeNetwork& network, const Point& p, double delta, Rng& rng);

struct ImmigrantsRow {
  int m;
  double c_cost_at_x0;  // E|c - y0|
  double c_cost_at_xm;  // E|c - ym|
  double b_cost_at_xm;  // E|b - ym|
  double b_cost_at_x0;  // E|b - y0|
  bool holds;
};

struct ImmigrantsReport {
  bool holds = true;
  std::vector<ImmigrantsRow> rows;
};

// Necessary conditions for strategyproofness on the line: with n-m agents at
// a and the other m moved from c to b, the expected distance to c cannot
// improve and the expected distance to b cannot worsen.
ImmigrantsReport ImmigrantsCheck(const Mechanism& mechanism, double a, double b, double c, int n,
                                 double tolerance = kCostTolerance);

// ---------------------------------------------------------------------------
// Numeric identities for the structural lemmas.

enum class LemmaKind { kCostDifference, kFlattening, kWavgMovement };

std::string_view LemmaName(LemmaKind kind);
LemmaKind ParseLemmaKind(std::string_view text);

// Agents all lie behind b (away from a), behind a (away from b), or on
// path(a, b).
struct TwoPointInstance {
  TreeNetwork network;
  LocationProfile profile;
  Point a;
  Point b;
};

struct WavgMovementInstance {
  TreeNetwork network;
  std::vector<Point> before;
  std::vector<Point> after;
  WeightVector weights;
};

struct LemmaReport {
  LemmaKind kind;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  // Whether the miniSOS optimum lies behind b; required for flattening only.
  bool opt_behind_b = false;
};

// sc(a) - sc(b) == -N d(a,b)^2 - 2 d(a,b) (S_behind_a - S_toward_b), with
// S_* sums of d(x_i, a). Throws kHypothesisViolated.
LemmaReport CheckCostDifference(const TwoPointInstance& instance,
                                double tolerance = kCostTolerance);
// Agents behind b are rotated onto path(b, x_j) at unchanged distance from b,
// x_j the farthest of them; then sc(a) - sc(b) == -N d^2 + 2 N d d(a, Opt').
LemmaReport CheckFlattening(const TwoPointInstance& instance, double tolerance = kCostTolerance);
// d(wAvg(y), wAvg(y')) <= sum_i w_i d(y_i, y'_i).
LemmaReport CheckWavgMovement(const WavgMovementInstance& instance,
                              double tolerance = kCostTolerance);

// Compliant random instances. The two-point generator guarantees the optimum
// lies behind b.
TwoPointInstance GenerateTwoPointInstance(Rng& rng);
WavgMovementInstance GenerateWavgMovementInstance(Rng& rng);

// One generated instance of `kind`, checked.
LemmaReport LemmaIdentityCheck(LemmaKind kind, Rng& rng, double tolerance = kCostTolerance);

// ---------------------------------------------------------------------------
// Witness profiles from the lower-bound constructions.

enum class WitnessKind { kDeterministic2, kRandomized15Family };

std::string_view WitnessName(WitnessKind kind);
WitnessKind ParseWitnessKind(std::string_view text);

struct Witness {
  Instance instance;
  double origin;  // line coordinate of the origin end
  std::string description;
};

// kDeterministic2: n/2 agents at 0 and n/2 at 2 (n even).
// kRandomized15Family: n/2 agents at -j and n/2 at 4 - j (n even, j >= 0).
Witness LowerBoundWitness(WitnessKind kind, int n, int j = 0);

// Path network with nodes at the given sorted, distinct coordinates (node 0
// at the smallest) and agents placed by coordinate. Coordinates are read back
// with LineView(network, node_coordinates.front()).
Instance LineInstance(std::span<const double> node_coordinates,
                      std::span<const double> agent_coordinates);

}  // namespace treefl

#endif  // TREEFL_VERIFY_HPP_
