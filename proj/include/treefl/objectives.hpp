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

#ifndef TREEFL_OBJECTIVES_HPP_
#define TREEFL_OBJECTIVES_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treefl/network.hpp"

namespace treefl {

// Tolerance for optimality-condition and cost comparisons.
inline constexpr double kCostTolerance = 1e-9;
// Probability vectors must sum to one within this.
inline constexpr double kProbabilityTolerance = 1e-9;

enum class Objective { kMiniSOS, kMinisum, kMinimax };

std::string_view ObjectiveName(Objective objective);
// Accepts "minisos", "minisum", "minimax" (case-insensitive). Throws kParse.
Objective ParseObjective(std::string_view text);

// Finite-support distribution over network points. Atoms are kept sorted by
// point; atoms closer than kSnapTolerance on the same edge are merged and
// zero-probability atoms dropped.
class LocationDistribution {
 public:
  struct Atom {
    Point point;
    double probability;
  };

  static LocationDistribution PointMass(const Point& p) {
    LocationDistribution d;
    d.atoms_.push_back({p, 1.0});
    return d;
  }
  // Throws kDistributionInvalid on negative mass or a total away from 1.
  static LocationDistribution FromAtoms(std::vector<Atom> atoms);

  std::span<const Atom> support() const { return atoms_; }
  bool is_point_mass() const { return atoms_.size() == 1; }
  double ProbabilityOf(const Point& p) const;

  // Encoding "[(point, prob), ...]" with points in the file encoding.
  std::string ToString() const;

 private:
  std::vector<Atom> atoms_;
};

// Same support (matched within `tolerance` in distance) with probabilities
// equal within `tolerance`.
bool ApproxEqual(const TreeNetwork& network, const LocationDistribution& a,
                 const LocationDistribution& b, double tolerance = 1e-9);

class WeightVector {
 public:
  // Throws kWeightInvalid.
  explicit WeightVector(std::vector<double> weights);
  static WeightVector Uniform(std::size_t m);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

double SocialCost(const TreeNetwork& network, const Point& y, const LocationProfile& profile,
                  Objective objective);
double ExpectedSocialCost(const TreeNetwork& network, const LocationDistribution& dist,
                          const LocationProfile& profile, Objective objective);
double ExpectedAgentCost(const TreeNetwork& network, const LocationDistribution& dist,
                         const Point& x);

// The unique minimizer of sum_j w_j d(l, y_j)^2 over the whole tree.
// Each edge is swept as a convex piecewise quadratic in the offset.
Point WeightedAverage(const TreeNetwork& network, std::span<const Point> locations,
                      const WeightVector& weights);

struct OptimalLocation {
  Point point;
  double cost;
};

// miniSOS delegates to WeightedAverage. For minisum the optimum may be a
// segment; the point of it closest to node 0 is reported.
OptimalLocation Optimize(const TreeNetwork& network, const LocationProfile& profile,
                         Objective objective);

struct BranchBalance {
  SubtreeId branch;
  double inside;   // sum of w_i d(y_i, a) over locations in the branch
  double outside;  // same sum over all other locations
};

struct WavgConditionReport {
  bool holds = true;
  std::vector<BranchBalance> branches;
};

// Optimality condition characterizing the weighted average: no branch at the
// candidate carries more weighted distance than the rest of the tree.
WavgConditionReport VerifyWavgCondition(const TreeNetwork& network, const Point& candidate,
                                        std::span<const Point> locations,
                                        const WeightVector& weights,
                                        double tolerance = kCostTolerance);

}  // namespace treefl

#endif  // TREEFL_OBJECTIVES_HPP_
