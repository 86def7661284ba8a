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

// Brute-force references used only by the tests. Everything here is built on
// TreeNetwork::Distance alone, never on the sweep solvers being checked.

#ifndef TREEFL_TESTS_ORACLES_HPP_
#define TREEFL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "treefl/network.hpp"

namespace treefl::oracle {

using PointObjective = std::function<double(const Point&)>;

struct GridMinimum {
  Point point;
  double value;
};

inline double WeightedSquares(const TreeNetwork& net, std::span<const Point> ys,
                              std::span<const double> ws, const Point& l) {
  double total = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double d = net.Distance(l, ys[i]);
    total += ws[i] * d * d;
  }
  return total;
}

// Evaluates `f` on every node and on a grid of spacing `resolution` along
// each edge, then refines the best cell of each edge by ternary search (the
// objectives of interest are convex along an edge).
inline GridMinimum GridMinimize(const TreeNetwork& net, const PointObjective& f,
                                double resolution = 1e-3, double refine_to = 1e-9) {
  GridMinimum best{Point::AtNode(0), f(Point::AtNode(0))};
  for (NodeId n = 1; n < net.node_count(); ++n) {
    const double v = f(Point::AtNode(n));
    if (v < best.value) best = {Point::AtNode(n), v};
  }
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    const double len = net.edge(e).length;
    auto at = [&](double t) { return f(net.Canonical(e, std::clamp(t, 0.0, len))); };
    const int steps = static_cast<int>(std::ceil(len / resolution));
    double best_t = 0.0;
    double best_v = at(0.0);
    for (int k = 1; k <= steps; ++k) {
      const double t = std::min(len, k * resolution);
      const double v = at(t);
      if (v < best_v) {
        best_v = v;
        best_t = t;
      }
    }
    double lo = std::max(0.0, best_t - resolution);
    double hi = std::min(len, best_t + resolution);
    while (hi - lo > refine_to) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (at(m1) <= at(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    const double t = (lo + hi) / 2.0;
    const double v = at(t);
    if (v < best.value) best = {net.Canonical(e, t), v};
  }
  return best;
}

// All grid points (nodes included) whose value is within `slack` of `floor`.
inline std::vector<Point> NearMinimal(const TreeNetwork& net, const PointObjective& f, double floor,
                                      double slack, double resolution = 1e-3) {
  std::vector<Point> out;
  for (NodeId n = 0; n < net.node_count(); ++n) {
    if (f(Point::AtNode(n)) <= floor + slack) out.push_back(Point::AtNode(n));
  }
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    const double len = net.edge(e).length;
    for (double t = resolution; t < len; t += resolution) {
      const Point p = net.Canonical(e, t);
      if (f(p) <= floor + slack) out.push_back(p);
    }
  }
  return out;
}

}  // namespace treefl::oracle

#endif  // TREEFL_TESTS_ORACLES_HPP_
