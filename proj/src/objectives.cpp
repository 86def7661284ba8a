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

#include "treefl/objectives.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "treefl/error.hpp"

namespace treefl {

std::string_view ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kMiniSOS: return "minisos";
    case Objective::kMinisum: return "minisum";
    case Objective::kMinimax: return "minimax";
  }
  return "unknown";
}

Objective ParseObjective(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "minisos" || lower == "sos") return Objective::kMiniSOS;
  if (lower == "minisum") return Objective::kMinisum;
  if (lower == "minimax") return Objective::kMinimax;
  throw Error(ErrorCode::kParse, "unknown objective '" + std::string(text) + "'");
}

namespace {

bool SamePoint(const Point& a, const Point& b) {
  if (a.is_node() != b.is_node()) return false;
  if (a.is_node()) return a.node() == b.node();
  return a.edge() == b.edge() && std::abs(a.offset() - b.offset()) <= kSnapTolerance;
}

std::string PointEncoding(const Point& p) {
  std::ostringstream out;
  out.precision(17);
  if (p.is_node()) {
    out << "{\"node\":" << p.node() << "}";
  } else {
    out << "{\"edge\":" << p.edge() << ",\"offset\":" << p.offset() << "}";
  }
  return out.str();
}

}  // namespace

LocationDistribution LocationDistribution::FromAtoms(std::vector<Atom> atoms) {
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.probability) || a.probability < 0.0) {
      throw Error(ErrorCode::kDistributionInvalid, "negative or non-finite probability");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total;
    throw Error(ErrorCode::kDistributionInvalid, msg.str());
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.point < b.point; });
  LocationDistribution d;
  for (const Atom& a : atoms) {
    if (a.probability == 0.0) continue;
    if (!d.atoms_.empty() && SamePoint(d.atoms_.back().point, a.point)) {
      d.atoms_.back().probability += a.probability;
    } else {
      d.atoms_.push_back(a);
    }
  }
  return d;
}

double LocationDistribution::ProbabilityOf(const Point& p) const {
  double mass = 0.0;
  for (const Atom& a : atoms_) {
    if (SamePoint(a.point, p)) mass += a.probability;
  }
  return mass;
}

std::string LocationDistribution::ToString() const {
  std::ostringstream out;
  out.precision(17);
  out << "[";
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (k) out << ", ";
    out << "(" << PointEncoding(atoms_[k].point) << ", " << atoms_[k].probability << ")";
  }
  out << "]";
  return out.str();
}

bool ApproxEqual(const TreeNetwork& network, const LocationDistribution& a,
                 const LocationDistribution& b, double tolerance) {
  auto covered = [&](const LocationDistribution& x, const LocationDistribution& y) {
    for (const auto& atom : x.support()) {
      double near_x = 0.0;
      double near_y = 0.0;
      for (const auto& other : x.support()) {
        if (network.Distance(atom.point, other.point) <= tolerance) near_x += other.probability;
      }
      for (const auto& other : y.support()) {
        if (network.Distance(atom.point, other.point) <= tolerance) near_y += other.probability;
      }
      if (std::abs(near_x - near_y) > tolerance) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::kWeightInvalid, "empty weight vector");
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kWeightInvalid, "weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorCode::kWeightInvalid, "weights sum to " + std::to_string(total));
  }
}

WeightVector WeightVector::Uniform(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kEmptyInput, "uniform weights over zero locations");
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

double SocialCost(const TreeNetwork& network, const Point& y, const LocationProfile& profile,
                  Objective objective) {
  network.Check(y);
  profile.Check(network);
  double cost = 0.0;
  for (const Point& x : profile.points()) {
    const double d = network.Distance(y, x);
    switch (objective) {
      case Objective::kMiniSOS: cost += d * d; break;
      case Objective::kMinisum: cost += d; break;
      case Objective::kMinimax: cost = std::max(cost, d); break;
    }
  }
  return cost;
}

namespace {

void CheckDistribution(const TreeNetwork& network, const LocationDistribution& dist) {
  if (dist.support().empty()) throw Error(ErrorCode::kDistributionInvalid, "empty support");
  for (const auto& atom : dist.support()) {
    if (!network.IsValid(atom.point)) {
      throw Error(ErrorCode::kDistributionInvalid,
                  "support point " + atom.point.ToString() + " is not on the network");
    }
  }
}

}  // namespace

double ExpectedSocialCost(const TreeNetwork& network, const LocationDistribution& dist,
                          const LocationProfile& profile, Objective objective) {
  CheckDistribution(network, dist);
  double total = 0.0;
  for (const auto& atom : dist.support()) {
    total += atom.probability * SocialCost(network, atom.point, profile, objective);
  }
  return total;
}

double ExpectedAgentCost(const TreeNetwork& network, const LocationDistribution& dist,
                         const Point& x) {
  CheckDistribution(network, dist);
  network.Check(x);
  double total = 0.0;
  for (const auto& atom : dist.support()) {
    total += atom.probability * network.Distance(atom.point, x);
  }
  return total;
}

namespace {

// Distance from one location to the point at offset t on a fixed edge, as two
// linear pieces slope * t + intercept split at `breakpoint`.
struct EdgeTerm {
  double weight;
  double breakpoint;
  double slope_before, intercept_before;
  double slope_after, intercept_after;

  double DistanceAt(double t) const {
    return t <= breakpoint ? slope_before * t + intercept_before
                           : slope_after * t + intercept_after;
  }
};

std::vector<EdgeTerm> EdgeTerms(const TreeNetwork& network, EdgeIndex edge,
                                std::span<const Point> locations, std::span<const double> weights) {
  const Edge& e = network.edge(edge);
  std::vector<EdgeTerm> terms;
  terms.reserve(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const Point& y = locations[i];
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!y.is_node() && y.edge() == edge) {
      terms.push_back({w, y.offset(), -1.0, y.offset(), 1.0, -y.offset()});
    } else {
      const double du = network.Distance(Point::AtNode(e.u), y);
      const double dv = network.Distance(Point::AtNode(e.v), y);
      const double bp = std::clamp((dv + e.length - du) / 2.0, 0.0, e.length);
      terms.push_back({w, bp, 1.0, du, -1.0, dv + e.length});
    }
  }
  return terms;
}

double SquaredSum(std::span<const EdgeTerm> terms, double t) {
  double total = 0.0;
  for (const EdgeTerm& term : terms) {
    const double d = term.DistanceAt(t);
    total += term.weight * d * d;
  }
  return total;
}

double LinearSum(std::span<const EdgeTerm> terms, double t) {
  double total = 0.0;
  for (const EdgeTerm& term : terms) total += term.weight * term.DistanceAt(t);
  return total;
}

double MaxTerm(std::span<const EdgeTerm> terms, double t) {
  double best = 0.0;
  for (const EdgeTerm& term : terms) best = std::max(best, term.DistanceAt(t));
  return best;
}

struct EdgeMinimum {
  double value;
  double offset;
};

// Sweeps the sub-intervals between sorted breakpoints; on each one the
// objective is W t^2 + 2 A t + B, minimized at clamp(-A / W).
EdgeMinimum MinimizeSquaredOnEdge(std::span<const EdgeTerm> terms, double length) {
  std::vector<const EdgeTerm*> order;
  for (const EdgeTerm& term : terms) order.push_back(&term);
  std::sort(order.begin(), order.end(),
            [](const EdgeTerm* a, const EdgeTerm* b) { return a->breakpoint < b->breakpoint; });
  double total_weight = 0.0;
  double linear = 0.0;
  for (const EdgeTerm& term : terms) {
    total_weight += term.weight;
    linear += term.weight * term.slope_before * term.intercept_before;
  }
  EdgeMinimum best{std::numeric_limits<double>::infinity(), 0.0};
  double lo = 0.0;
  for (std::size_t k = 0; k <= order.size(); ++k) {
    const double hi = k < order.size() ? order[k]->breakpoint : length;
    if (total_weight > 0.0) {
      const double t = std::clamp(-linear / total_weight, lo, hi);
      const double value = SquaredSum(terms, t);
      if (value < best.value) best = {value, t};
    }
    if (k < order.size()) {
      const EdgeTerm& term = *order[k];
      linear += term.weight * (term.slope_after * term.intercept_after -
                               term.slope_before * term.intercept_before);
      lo = hi;
    }
  }
  if (total_weight <= 0.0) best = {SquaredSum(terms, 0.0), 0.0};
  return best;
}

void CheckLocations(const TreeNetwork& network, std::span<const Point> locations) {
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (!network.IsValid(locations[i])) {
      throw Error(ErrorCode::kPointInvalid, "location " + std::to_string(i) + " (" +
                                                locations[i].ToString() + ") is not valid");
    }
  }
}

}  // namespace

Point WeightedAverage(const TreeNetwork& network, std::span<const Point> locations,
                      const WeightVector& weights) {
  if (locations.empty()) throw Error(ErrorCode::kEmptyInput, "no locations to average");
  if (weights.size() != locations.size()) {
    throw Error(ErrorCode::kWeightInvalid, "weight vector length " + std::to_string(weights.size()) +
                                               " does not match " +
                                               std::to_string(locations.size()) + " locations");
  }
  CheckLocations(network, locations);
  if (network.edge_count() == 0) return Point::AtNode(0);
  double best_value = std::numeric_limits<double>::infinity();
  EdgeIndex best_edge = 0;
  double best_offset = 0.0;
  for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
    const auto terms = EdgeTerms(network, e, locations, weights.values());
    const EdgeMinimum m = MinimizeSquaredOnEdge(terms, network.edge(e).length);
    if (m.value < best_value) {
      best_value = m.value;
      best_edge = e;
      best_offset = m.offset;
    }
  }
  return network.Canonical(best_edge, best_offset);
}

namespace {

struct Candidate {
  double value;
  Point point;
};

// Minisum and minimax are convex and piecewise linear along every edge, so the
// minimum over an edge sits at an endpoint, a breakpoint, or (minimax) where
// an increasing piece crosses a decreasing one.
OptimalLocation OptimizePiecewiseLinear(const TreeNetwork& network, const LocationProfile& profile,
                                        Objective objective) {
  std::vector<Candidate> candidates;
  for (NodeId n = 0; n < network.node_count(); ++n) {
    const Point p = Point::AtNode(n);
    candidates.push_back({SocialCost(network, p, profile, objective), p});
  }
  for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
    const double length = network.edge(e).length;
    const auto terms = EdgeTerms(network, e, profile.points(), {});
    std::vector<double> offsets;
    for (const EdgeTerm& term : terms) offsets.push_back(term.breakpoint);
    if (objective == Objective::kMinimax) {
      for (const EdgeTerm& a : terms) {
        for (const EdgeTerm& b : terms) {
          const double pa[2][2] = {{a.slope_before, a.intercept_before}, {a.slope_after, a.intercept_after}};
          const double pb[2][2] = {{b.slope_before, b.intercept_before}, {b.slope_after, b.intercept_after}};
          for (const auto& x : pa) {
            for (const auto& y : pb) {
              if (x[0] > 0.0 && y[0] < 0.0) offsets.push_back((y[1] - x[1]) / (x[0] - y[0]));
            }
          }
        }
      }
    }
    for (double t : offsets) {
      if (!(t > kSnapTolerance && t < length - kSnapTolerance)) continue;
      const double value = objective == Objective::kMinimax ? MaxTerm(terms, t) : LinearSum(terms, t);
      candidates.push_back({value, Point::Interior(e, t)});
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) best = std::min(best, c.value);
  const Point root = Point::AtNode(0);
  const Candidate* chosen = nullptr;
  double chosen_distance = 0.0;
  for (const Candidate& c : candidates) {
    if (c.value > best + kCostTolerance) continue;
    const double d = network.Distance(root, c.point);
    if (chosen == nullptr || d < chosen_distance) {
      chosen = &c;
      chosen_distance = d;
    }
  }
  return {chosen->point, SocialCost(network, chosen->point, profile, objective)};
}

}  // namespace

OptimalLocation Optimize(const TreeNetwork& network, const LocationProfile& profile,
                         Objective objective) {
  if (profile.empty()) throw Error(ErrorCode::kEmptyInput, "empty location profile");
  profile.Check(network);
  if (objective == Objective::kMiniSOS) {
    const Point p = WeightedAverage(network, profile.points(), WeightVector::Uniform(profile.size()));
    return {p, SocialCost(network, p, profile, objective)};
  }
  return OptimizePiecewiseLinear(network, profile, objective);
}

WavgConditionReport VerifyWavgCondition(const TreeNetwork& network, const Point& candidate,
                                        std::span<const Point> locations,
                                        const WeightVector& weights, double tolerance) {
  if (weights.size() != locations.size()) {
    throw Error(ErrorCode::kWeightInvalid, "weight vector length does not match locations");
  }
  network.Check(candidate);
  CheckLocations(network, locations);
  double total = 0.0;
  std::vector<double> weighted(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    weighted[i] = weights[i] * network.Distance(locations[i], candidate);
    total += weighted[i];
  }
  WavgConditionReport report;
  for (const Branch& branch : SubtreesAt(network, candidate, locations)) {
    double inside = 0.0;
    for (std::size_t i : branch.members) inside += weighted[i];
    const double outside = total - inside;
    report.branches.push_back({branch.id, inside, outside});
    if (inside > outside + tolerance) report.holds = false;
  }
  return report;
}

}  // namespace treefl
