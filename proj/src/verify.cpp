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

#include "treefl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "treefl/error.hpp"

namespace treefl {

Mechanism AsMechanism(MechanismSpec spec) {
  return [spec = std::move(spec)](const TreeNetwork& network, const LocationProfile& profile) {
    return spec.Evaluate(network, profile);
  };
}

DeviationSet DeviationSet::Standard(const TreeNetwork& network, const LocationProfile& profile,
                                    double grid_fraction) {
  if (!(grid_fraction > 0.0 && grid_fraction <= 1.0)) {
    throw Error(ErrorCode::kBadParams, "grid fraction must be in (0, 1]");
  }
  std::vector<Point> points;
  for (NodeId n = 0; n < network.node_count(); ++n) points.push_back(Point::AtNode(n));
  for (const Point& x : profile.points()) points.push_back(x);
  const auto steps = static_cast<int>(std::ceil(1.0 / grid_fraction - 1e-9));
  for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
    const double h = grid_fraction * network.edge(e).length;
    for (int k = 1; k < steps; ++k) points.push_back(network.Canonical(e, k * h));
  }
  return FromPoints(std::move(points));
}

DeviationSet DeviationSet::FromPoints(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  DeviationSet set;
  set.points_ = std::move(points);
  return set;
}

SPReport SpCheck(const Mechanism& mechanism, const TreeNetwork& network,
                 const LocationProfile& profile, const DeviationSet& deviations,
                 double tolerance) {
  SPReport report;
  report.max_regret = -std::numeric_limits<double>::infinity();
  const LocationDistribution truthful = mechanism(network, profile);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Point& xi = profile[i];
    const double true_cost = ExpectedAgentCost(network, truthful, xi);
    for (const Point& lie : deviations.points()) {
      const LocationDistribution deviated = mechanism(network, profile.With(i, lie));
      const double deviated_cost = ExpectedAgentCost(network, deviated, xi);
      ++report.tested_count;
      const double regret = true_cost - deviated_cost;
      if (regret > report.max_regret) {
        report.max_regret = regret;
        report.worst = SpWorstCase{i, lie, true_cost, deviated_cost};
      }
    }
  }
  if (report.tested_count == 0) report.max_regret = 0.0;
  report.passed = report.max_regret <= tolerance;
  return report;
}

namespace {

Point SingleAtom(const LocationDistribution& dist) {
  if (!dist.is_point_mass()) {
    throw Error(ErrorCode::kNotDeterministic,
                "output has " + std::to_string(dist.support().size()) + " support points");
  }
  return dist.support().front().point;
}

}  // namespace

BoomerangReport BoomerangCheck(const Mechanism& mechanism, const TreeNetwork& network,
                               const LocationProfile& profile, const DeviationSet& deviations,
                               double tolerance) {
  BoomerangReport report;
  const Point facility = SingleAtom(mechanism(network, profile));
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Point& xi = profile[i];
    const double base_cost = network.Distance(facility, xi);
    for (const Point& lie : deviations.points()) {
      const Point moved = SingleAtom(mechanism(network, profile.With(i, lie)));
      const double increase = network.Distance(moved, xi) - base_cost;
      const double movement = network.Distance(moved, facility);
      ++report.tested_count;
      const double violation = std::abs(increase - movement);
      if (!report.worst || violation > report.max_violation) {
        report.max_violation = violation;
        report.worst = BoomerangWorstCase{i, lie, increase, movement};
      }
    }
  }
  report.passed = report.max_violation <= tolerance;
  return report;
}

std::string InstanceDigest(const TreeNetwork& network, const LocationProfile& profile) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto feed = [&hash](const std::string& s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
  };
  char buf[96];
  std::snprintf(buf, sizeof buf, "n%d;", network.node_count());
  feed(buf);
  for (const Edge& e : network.edges()) {
    std::snprintf(buf, sizeof buf, "e%d,%d,%a;", e.u, e.v, e.length);
    feed(buf);
  }
  for (const Point& p : profile.points()) {
    if (p.is_node()) {
      std::snprintf(buf, sizeof buf, "p%d;", p.node());
    } else {
      std::snprintf(buf, sizeof buf, "q%d,%a;", p.edge(), p.offset());
    }
    feed(buf);
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RatioReport ApproxRatio(const Mechanism& mechanism, const TreeNetwork& network,
                        const LocationProfile& profile, Objective objective) {
  RatioReport report;
  report.digest = InstanceDigest(network, profile);
  report.mechanism_cost =
      ExpectedSocialCost(network, mechanism(network, profile), profile, objective);
  report.optimal_cost = Optimize(network, profile, objective).cost;
  if (report.optimal_cost <= kZeroCost) {
    if (report.mechanism_cost > kZeroCost) {
      throw Error(ErrorCode::kDegenerateOptimum,
                  "optimal cost is zero but the mechanism costs " +
                      std::to_string(report.mechanism_cost));
    }
    report.exact = true;
    report.ratio = 1.0;
    return report;
  }
  report.ratio = report.mechanism_cost / report.optimal_cost;
  return report;
}

Point Perturb(const TreeNetwork& network, const Point& p, double delta, Rng& rng) {
  if (!p.is_node()) {
    const double len = network.edge(p.edge()).length;
    return network.Canonical(p.edge(), std::clamp(p.offset() + delta, 0.0, len));
  }
  const auto incident = network.incident(p.node());
  if (incident.empty()) return p;
  const auto& inc = incident[static_cast<std::size_t>(
      rng.UniformInt(0, static_cast<std::int64_t>(incident.size()) - 1))];
  const Edge& e = network.edge(inc.edge);
  const double step = std::min(std::abs(delta), e.length);
  return network.Canonical(inc.edge, e.u == p.node() ? step : e.length - step);
}

SearchResult RatioSearch(const Mechanism& mechanism, Objective objective,
                         const GeneratorConfig& config, std::size_t budget, std::uint64_t seed,
                         int hill_iterations) {
  if (budget < 1) throw Error(ErrorCode::kBadParams, "search budget must be at least 1");
  GeneratorConfig seeded = config;
  seeded.seed = seed;
  InstanceGenerator generator(seeded);
  SearchResult result;
  result.worst.ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < budget; ++k) {
    Instance instance = generator.Next();
    ++result.evaluated;
    RatioReport r;
    try {
      r = ApproxRatio(mechanism, instance.network, instance.profile, objective);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateOptimum) throw;
      ++result.degenerate;
      r.mechanism_cost = ExpectedSocialCost(instance.network,
                                            mechanism(instance.network, instance.profile),
                                            instance.profile, objective);
      r.optimal_cost = 0.0;
      r.ratio = std::numeric_limits<double>::infinity();
      r.digest = InstanceDigest(instance.network, instance.profile);
      result.samples.push_back(r);
      continue;
    }
    result.samples.push_back(r);
    if (r.exact) {
      ++result.degenerate;
      continue;
    }
    if (r.ratio > result.worst.ratio) {
      result.worst = r;
      result.instance = std::move(instance);
    }
  }
  if (!result.instance) {
    result.worst = RatioReport{};
    result.worst.exact = true;
    return result;
  }
  result.worst_before_climb = result.worst.ratio;

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const TreeNetwork& network = result.instance->network;
  LocationProfile profile = result.instance->profile;
  double mean_length = network.edge_count() ? network.total_length() / network.edge_count() : 0.0;
  double step = 0.25 * mean_length;
  for (int it = 0; it < hill_iterations && step > 0.0; ++it) {
    const auto agent = static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<std::int64_t>(profile.size()) - 1));
    const double delta = (rng.Next() & 1U) ? step : -step;
    const LocationProfile candidate =
        profile.With(agent, Perturb(network, profile[agent], delta, rng));
    RatioReport r;
    try {
      r = ApproxRatio(mechanism, network, candidate, objective);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateOptimum) throw;
      step /= 2.0;
      continue;
    }
    if (!r.exact && r.ratio > result.worst.ratio) {
      result.worst = r;
      profile = candidate;
    } else {
      step /= 2.0;
    }
  }
  result.instance->profile = profile;
  return result;
}

Instance LineInstance(std::span<const double> node_coordinates,
                      std::span<const double> agent_coordinates) {
  if (node_coordinates.empty()) throw Error(ErrorCode::kBadParams, "line needs a node");
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < node_coordinates.size(); ++k) {
    edges.push_back({static_cast<NodeId>(k - 1), static_cast<NodeId>(k),
                     node_coordinates[k] - node_coordinates[k - 1]});
  }
  TreeNetwork network =
      TreeNetwork::Validate(static_cast<int>(node_coordinates.size()), std::move(edges));
  const LineView line(network, node_coordinates.front());
  std::vector<Point> agents;
  for (double x : agent_coordinates) agents.push_back(line.At(x));
  return {std::move(network), LocationProfile(std::move(agents))};
}

ImmigrantsReport ImmigrantsCheck(const Mechanism& mechanism, double a, double b, double c, int n,
                                 double tolerance) {
  if (!(a <= b && b <= c && a < c)) {
    throw Error(ErrorCode::kBadOrdering, "need a <= b <= c with a < c");
  }
  if (n < 1) throw Error(ErrorCode::kBadParams, "need at least one agent");
  std::vector<double> coords{a, b, c};
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  const Instance base = LineInstance(coords, {});
  const LineView line(base.network, a);
  const Point pa = line.At(a);
  const Point pb = line.At(b);
  const Point pc = line.At(c);

  ImmigrantsReport report;
  for (int m = 1; m <= n; ++m) {
    std::vector<Point> x0(static_cast<std::size_t>(n - m), pa);
    std::vector<Point> xm = x0;
    x0.insert(x0.end(), static_cast<std::size_t>(m), pc);
    xm.insert(xm.end(), static_cast<std::size_t>(m), pb);
    const auto y0 = mechanism(base.network, LocationProfile(x0));
    const auto ym = mechanism(base.network, LocationProfile(xm));
    ImmigrantsRow row{m,
                      ExpectedAgentCost(base.network, y0, pc),
                      ExpectedAgentCost(base.network, ym, pc),
                      ExpectedAgentCost(base.network, ym, pb),
                      ExpectedAgentCost(base.network, y0, pb),
                      true};
    row.holds = row.c_cost_at_x0 <= row.c_cost_at_xm + tolerance &&
                row.b_cost_at_xm <= row.b_cost_at_x0 + tolerance;
    report.holds = report.holds && row.holds;
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------

std::string_view LemmaName(LemmaKind kind) {
  switch (kind) {
    case LemmaKind::kCostDifference: return "cost_difference";
    case LemmaKind::kFlattening: return "flattening";
    case LemmaKind::kWavgMovement: return "wavg_movement";
  }
  return "unknown";
}

LemmaKind ParseLemmaKind(std::string_view text) {
  if (text == "cost_difference") return LemmaKind::kCostDifference;
  if (text == "flattening") return LemmaKind::kFlattening;
  if (text == "wavg_movement") return LemmaKind::kWavgMovement;
  throw Error(ErrorCode::kParse, "unknown lemma kind '" + std::string(text) + "'");
}

namespace {

// x is in the part of the tree cut off at `pivot` from `other` (pivot
// included).
bool Behind(const TreeNetwork& net, const Point& pivot, const Point& other, const Point& x) {
  return x == pivot || net.BranchOf(pivot, x) != net.BranchOf(pivot, other);
}

bool Compliant(const TreeNetwork& net, const Point& a, const Point& b, const Point& x) {
  return Behind(net, b, a, x) || Behind(net, a, b, x) || OnPath(net, a, b, x);
}

void CheckTwoPointHypotheses(const TwoPointInstance& inst) {
  const TreeNetwork& net = inst.network;
  net.Check(inst.a);
  net.Check(inst.b);
  inst.profile.Check(net);
  if (inst.a == inst.b) throw Error(ErrorCode::kHypothesisViolated, "a and b coincide");
  if (inst.profile.empty()) throw Error(ErrorCode::kHypothesisViolated, "no agents");
  for (std::size_t i = 0; i < inst.profile.size(); ++i) {
    if (!Compliant(net, inst.a, inst.b, inst.profile[i])) {
      throw Error(ErrorCode::kHypothesisViolated,
                  "agent " + std::to_string(i) + " hangs off path(a, b)");
    }
  }
}

double CostDifferenceRhs(const TreeNetwork& net, const LocationProfile& profile, const Point& a,
                         const Point& b) {
  const double d = net.Distance(a, b);
  const auto toward_b = net.BranchOf(a, b);
  double behind_a = 0.0;
  double in_tb = 0.0;
  for (const Point& x : profile.points()) {
    const double da = net.Distance(x, a);
    if (x != a && net.BranchOf(a, x) == toward_b) {
      in_tb += da;
    } else {
      behind_a += da;
    }
  }
  const double n = static_cast<double>(profile.size());
  return -n * d * d - 2.0 * d * (behind_a - in_tb);
}

}  // namespace

LemmaReport CheckCostDifference(const TwoPointInstance& inst, double tolerance) {
  CheckTwoPointHypotheses(inst);
  const TreeNetwork& net = inst.network;
  LemmaReport report{LemmaKind::kCostDifference};
  report.lhs = SocialCost(net, inst.a, inst.profile, Objective::kMiniSOS) -
               SocialCost(net, inst.b, inst.profile, Objective::kMiniSOS);
  report.rhs = CostDifferenceRhs(net, inst.profile, inst.a, inst.b);
  report.opt_behind_b =
      Behind(net, inst.b, inst.a, Optimize(net, inst.profile, Objective::kMiniSOS).point);
  report.holds = std::abs(report.lhs - report.rhs) <= tolerance;
  return report;
}

LemmaReport CheckFlattening(const TwoPointInstance& inst, double tolerance) {
  CheckTwoPointHypotheses(inst);
  const TreeNetwork& net = inst.network;
  LemmaReport report{LemmaKind::kFlattening};
  report.opt_behind_b =
      Behind(net, inst.b, inst.a, Optimize(net, inst.profile, Objective::kMiniSOS).point);
  if (!report.opt_behind_b) {
    throw Error(ErrorCode::kHypothesisViolated, "optimum does not lie behind b");
  }
  std::optional<Point> farthest;
  double farthest_distance = -1.0;
  for (const Point& x : inst.profile.points()) {
    if (!Behind(net, inst.b, inst.a, x)) continue;
    const double d = net.Distance(inst.b, x);
    if (d > farthest_distance) {
      farthest_distance = d;
      farthest = x;
    }
  }
  std::vector<Point> flattened(inst.profile.points().begin(), inst.profile.points().end());
  for (Point& x : flattened) {
    if (farthest && Behind(net, inst.b, inst.a, x)) {
      x = net.Along(inst.b, *farthest, net.Distance(inst.b, x));
    }
  }
  const LocationProfile moved(std::move(flattened));
  const Point opt_moved = Optimize(net, moved, Objective::kMiniSOS).point;
  const double d = net.Distance(inst.a, inst.b);
  const double n = static_cast<double>(inst.profile.size());
  report.lhs = SocialCost(net, inst.a, inst.profile, Objective::kMiniSOS) -
               SocialCost(net, inst.b, inst.profile, Objective::kMiniSOS);
  report.rhs = -n * d * d + 2.0 * n * d * net.Distance(inst.a, opt_moved);
  report.holds = std::abs(report.lhs - report.rhs) <= tolerance;
  return report;
}

LemmaReport CheckWavgMovement(const WavgMovementInstance& inst, double tolerance) {
  if (inst.before.size() != inst.after.size() || inst.before.size() != inst.weights.size()) {
    throw Error(ErrorCode::kHypothesisViolated, "location vectors and weights differ in length");
  }
  const TreeNetwork& net = inst.network;
  LemmaReport report{LemmaKind::kWavgMovement};
  const Point a = WeightedAverage(net, inst.before, inst.weights);
  const Point a_moved = WeightedAverage(net, inst.after, inst.weights);
  report.lhs = net.Distance(a, a_moved);
  for (std::size_t i = 0; i < inst.before.size(); ++i) {
    report.rhs += inst.weights[i] * net.Distance(inst.before[i], inst.after[i]);
  }
  report.holds = report.lhs <= report.rhs + tolerance;
  return report;
}

TwoPointInstance GenerateTwoPointInstance(Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const int nodes = static_cast<int>(rng.UniformInt(2, 12));
    TreeNetwork net = RandomNetwork(Topology::kRandomTree, nodes, 0.5, 2.0, rng);
    const Point a = RandomPoint(net, Placement::kAnywhere, rng);
    const Point b = RandomPoint(net, Placement::kAnywhere, rng);
    if (net.Distance(a, b) < 0.05) continue;
    const int n = static_cast<int>(rng.UniformInt(1, 10));
    std::vector<Point> agents;
    for (int i = 0; i < n; ++i) {
      const bool want_behind_b = rng.Unit() < 0.6;
      const double special = rng.Unit();
      if (special < 0.05) {
        agents.push_back(a);
        continue;
      }
      if (special < 0.1) {
        agents.push_back(b);
        continue;
      }
      for (int tries = 0; tries < 64; ++tries) {
        const Placement placement = rng.Unit() < 0.2 ? Placement::kNodesOnly : Placement::kAnywhere;
        const Point x = RandomPoint(net, placement, rng);
        if (want_behind_b ? Behind(net, b, a, x) : Compliant(net, a, b, x)) {
          agents.push_back(x);
          break;
        }
      }
    }
    if (agents.empty()) continue;
    LocationProfile profile(std::move(agents));
    if (!Behind(net, b, a, Optimize(net, profile, Objective::kMiniSOS).point)) continue;
    return {std::move(net), std::move(profile), a, b};
  }
  throw Error(ErrorCode::kHypothesisViolated, "could not construct a compliant instance");
}

WavgMovementInstance GenerateWavgMovementInstance(Rng& rng) {
  const int nodes = static_cast<int>(rng.UniformInt(1, 20));
  TreeNetwork net = RandomNetwork(Topology::kRandomTree, nodes, 0.5, 2.0, rng);
  const auto m = static_cast<std::size_t>(rng.UniformInt(1, 10));
  std::vector<Point> before;
  std::vector<double> raw;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    before.push_back(RandomPoint(net, rng.Unit() < 0.2 ? Placement::kNodesOnly : Placement::kAnywhere, rng));
    raw.push_back(rng.Uniform(0.05, 1.0));
    total += raw.back();
  }
  for (double& w : raw) w /= total;
  std::vector<Point> after = before;
  const double mode = rng.Unit();
  for (std::size_t i = 0; i < m; ++i) {
    if (mode < 0.3) {
      // Single-location move.
      if (i == 0) after[i] = RandomPoint(net, Placement::kAnywhere, rng);
    } else if (mode < 0.7) {
      after[i] = Perturb(net, after[i], rng.Uniform(-0.5, 0.5), rng);
    } else if (rng.Unit() < 0.5) {
      after[i] = RandomPoint(net, Placement::kAnywhere, rng);
    }
  }
  return {std::move(net), std::move(before), std::move(after), WeightVector(std::move(raw))};
}

LemmaReport LemmaIdentityCheck(LemmaKind kind, Rng& rng, double tolerance) {
  switch (kind) {
    case LemmaKind::kCostDifference: return CheckCostDifference(GenerateTwoPointInstance(rng), tolerance);
    case LemmaKind::kFlattening: return CheckFlattening(GenerateTwoPointInstance(rng), tolerance);
    case LemmaKind::kWavgMovement:
      return CheckWavgMovement(GenerateWavgMovementInstance(rng), tolerance);
  }
  throw Error(ErrorCode::kBadParams, "unknown lemma kind");
}

// ---------------------------------------------------------------------------

std::string_view WitnessName(WitnessKind kind) {
  return kind == WitnessKind::kDeterministic2 ? "deterministic_2" : "randomized_15_family";
}

WitnessKind ParseWitnessKind(std::string_view text) {
  if (text == "deterministic_2") return WitnessKind::kDeterministic2;
  if (text == "randomized_15_family") return WitnessKind::kRandomized15Family;
  throw Error(ErrorCode::kBadParams, "unknown witness kind '" + std::string(text) + "'");
}

Witness LowerBoundWitness(WitnessKind kind, int n, int j) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::kBadParams, "witness needs an even n >= 2");
  const auto half = static_cast<std::size_t>(n / 2);
  if (kind == WitnessKind::kDeterministic2) {
    const std::vector<double> nodes{0.0, 1.0, 2.0};
    std::vector<double> agents(half, 0.0);
    agents.insert(agents.end(), half, 2.0);
    return {LineInstance(nodes, agents), 0.0,
            std::to_string(half) + " agents at 0 and " + std::to_string(half) + " at 2"};
  }
  if (j < 0) throw Error(ErrorCode::kBadParams, "family index j must be >= 0");
  const double lo = -static_cast<double>(j);
  std::vector<double> nodes;
  for (int k = 0; k <= 4; ++k) nodes.push_back(lo + k);
  std::vector<double> agents(half, lo);
  agents.insert(agents.end(), half, lo + 4.0);
  return {LineInstance(nodes, agents), lo,
          std::to_string(half) + " agents at " + std::to_string(-j) + " and " +
              std::to_string(half) + " at " + std::to_string(4 - j)};
}

}  // namespace treefl
