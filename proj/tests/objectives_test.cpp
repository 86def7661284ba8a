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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "treefl/error.hpp"
#include "treefl/generator.hpp"
#include "treefl/objectives.hpp"
#include "treefl/verify.hpp"

namespace treefl {
namespace {

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

const std::vector<double> kLine024{0.0, 1.0, 2.0, 3.0, 4.0};

struct Line {
  Instance instance;
  LineView view;
  explicit Line(std::vector<double> agents)
      : instance(LineInstance(kLine024, agents)), view(instance.network) {}
  Point at(double x) const { return view.At(x); }
  const TreeNetwork& net() const { return instance.network; }
  const LocationProfile& profile() const { return instance.profile; }
};

TEST_CASE("social cost per objective", "[objectives]") {
  const Line two({0, 2});
  CHECK(SocialCost(two.net(), two.at(1), two.profile(), Objective::kMiniSOS) == 2.0);
  CHECK(SocialCost(two.net(), two.at(0), two.profile(), Objective::kMiniSOS) == 4.0);
  CHECK(SocialCost(two.net(), two.at(0), two.profile(), Objective::kMinisum) == 2.0);
  const Line wide({0, 4});
  CHECK(SocialCost(wide.net(), wide.at(2), wide.profile(), Objective::kMinimax) == 2.0);
  CHECK_THROWS_AS(SocialCost(two.net(), Point::Interior(0, 3.0), two.profile(), Objective::kMiniSOS),
                  Error);
}

TEST_CASE("objective names round trip", "[objectives]") {
  for (auto o : {Objective::kMiniSOS, Objective::kMinisum, Objective::kMinimax}) {
    CHECK(ParseObjective(ObjectiveName(o)) == o);
  }
  CHECK(ParseObjective("miniSOS") == Objective::kMiniSOS);
  CHECK_THROWS_AS(ParseObjective("sum"), Error);
}

TEST_CASE("distributions validate and merge", "[objectives]") {
  const Line two({0, 2});
  CHECK_THROWS_AS(LocationDistribution::FromAtoms({{two.at(0), 0.5}}), Error);
  CHECK_THROWS_AS(LocationDistribution::FromAtoms({{two.at(0), 1.5}, {two.at(1), -0.5}}), Error);
  const auto merged = LocationDistribution::FromAtoms(
      {{two.at(0), 0.25}, {two.at(1), 0.5}, {two.at(0), 0.25}, {two.at(2), 0.0}});
  REQUIRE(merged.support().size() == 2);
  CHECK(merged.ProbabilityOf(two.at(0)) == 0.5);
  const Point a = Point::Interior(0, 0.5);
  const Point b = Point::Interior(0, 0.5 + 1e-13);
  const auto close = LocationDistribution::FromAtoms({{a, 0.5}, {b, 0.5}});
  CHECK(close.is_point_mass());
}

TEST_CASE("expected social cost is the exact weighted sum", "[objectives]") {
  const Line two({0, 2});
  const auto& net = two.net();
  for (double y : {0.0, 0.5, 1.0, 3.0}) {
    CHECK(ExpectedSocialCost(net, LocationDistribution::PointMass(two.at(y)), two.profile(),
                             Objective::kMiniSOS) ==
          SocialCost(net, two.at(y), two.profile(), Objective::kMiniSOS));
  }
  const auto rd = LocationDistribution::FromAtoms({{two.at(0), 0.5}, {two.at(2), 0.5}});
  CHECK(ExpectedSocialCost(net, rd, two.profile(), Objective::kMiniSOS) == 4.0);

  const auto mixed =
      LocationDistribution::FromAtoms({{two.at(1), 0.5}, {two.at(0), 0.25}, {two.at(2), 0.25}});
  const double exact = ExpectedSocialCost(net, mixed, two.profile(), Objective::kMiniSOS);
  CHECK_THAT(exact, WithinAbs(0.5 * 2 + 0.25 * 4 + 0.25 * 4, 1e-12));
  // Sampling estimate as an independent sanity check.
  Rng rng(3);
  double total = 0.0;
  const int samples = 20000;
  for (int k = 0; k < samples; ++k) {
    const double u = rng.Unit();
    const Point y = u < 0.5 ? two.at(1) : u < 0.75 ? two.at(0) : two.at(2);
    total += SocialCost(net, y, two.profile(), Objective::kMiniSOS);
  }
  CHECK_THAT(total / samples, WithinAbs(exact, 0.05));
}

TEST_CASE("expected agent cost", "[objectives]") {
  const Line wide({0, 4});
  const auto& net = wide.net();
  CHECK(ExpectedAgentCost(net, LocationDistribution::PointMass(wide.at(0)), wide.at(0)) == 0.0);
  const auto half = LocationDistribution::FromAtoms({{wide.at(0), 0.5}, {wide.at(2), 0.5}});
  CHECK(ExpectedAgentCost(net, half, wide.at(0)) == 1.0);
  const auto lrm =
      LocationDistribution::FromAtoms({{wide.at(0), 0.25}, {wide.at(4), 0.25}, {wide.at(2), 0.5}});
  CHECK(ExpectedAgentCost(net, lrm, wide.at(0)) == 2.0);
}

TEST_CASE("weighted average examples", "[objectives]") {
  const Line two({0, 2});
  const std::vector<Point> single{two.at(3)};
  CHECK(WeightedAverage(two.net(), single, WeightVector::Uniform(1)) == two.at(3));
  CHECK(WeightedAverage(two.net(), two.profile().points(), WeightVector({0.5, 0.5})) == two.at(1));

  const auto star = TreeNetwork::Validate(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const std::vector<Point> tips{Point::AtNode(1), Point::AtNode(2), Point::AtNode(3)};
  const auto w = WeightVector::Uniform(3);
  const Point center = WeightedAverage(star, tips, w);
  CHECK(center == Point::AtNode(0));
  const auto report = VerifyWavgCondition(star, center, tips, w);
  CHECK(report.holds);
  for (const auto& b : report.branches) {
    CHECK_THAT(b.inside, WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(b.outside, WithinAbs(2.0 / 3.0, 1e-15));
  }
  const std::vector<double> ws(3, 1.0 / 3.0);
  const auto grid = oracle::GridMinimize(
      star, [&](const Point& l) { return oracle::WeightedSquares(star, tips, ws, l); });
  CHECK(star.Distance(grid.point, center) < 1e-6);

  CHECK_THROWS_AS(WeightedAverage(two.net(), {}, WeightVector::Uniform(1)), Error);
  CHECK_THROWS_AS(WeightedAverage(two.net(), two.profile().points(), WeightVector::Uniform(3)),
                  Error);
  CHECK_THROWS_AS(WeightVector({0.5, 0.4}), Error);
}

TEST_CASE("optimal location examples", "[objectives]") {
  const Line two({0, 2});
  auto opt = Optimize(two.net(), two.profile(), Objective::kMiniSOS);
  CHECK(opt.point == two.at(1));
  CHECK(opt.cost == 2.0);

  const Line three({0, 0, 2});
  opt = Optimize(three.net(), three.profile(), Objective::kMiniSOS);
  CHECK_THAT(three.view.Coordinate(opt.point), WithinAbs(2.0 / 3.0, 1e-12));
  CHECK_THAT(opt.cost, WithinAbs(8.0 / 3.0, 1e-12));

  const Line stacked({3, 3, 3});
  for (auto o : {Objective::kMiniSOS, Objective::kMinisum, Objective::kMinimax}) {
    opt = Optimize(stacked.net(), stacked.profile(), o);
    CHECK(opt.point == stacked.at(3));
    CHECK(opt.cost == 0.0);
  }
  CHECK_THROWS_AS(Optimize(two.net(), LocationProfile{}, Objective::kMiniSOS), Error);
}

TEST_CASE("minisum segment optimum reports the point nearest node 0", "[objectives]") {
  const Line pair({1, 3});
  const auto opt = Optimize(pair.net(), pair.profile(), Objective::kMinisum);
  CHECK(opt.point == pair.at(1));
  CHECK(opt.cost == 2.0);
  const Line wide({0, 4});
  const auto mm = Optimize(wide.net(), wide.profile(), Objective::kMinimax);
  CHECK(mm.point == wide.at(2));
  CHECK(mm.cost == 2.0);
}

TEST_CASE("wavg condition examples", "[objectives]") {
  const Line two({0, 2});
  const auto w = WeightVector::Uniform(2);
  const auto at_avg = VerifyWavgCondition(two.net(), two.at(1), two.profile().points(), w);
  CHECK(at_avg.holds);
  const auto at_zero = VerifyWavgCondition(two.net(), two.at(0), two.profile().points(), w);
  CHECK_FALSE(at_zero.holds);
  bool saw_heavy = false;
  for (const auto& b : at_zero.branches) {
    if (b.inside == 1.0 && b.outside == 0.0) saw_heavy = true;
  }
  CHECK(saw_heavy);
  const std::vector<Point> one{two.at(3)};
  CHECK(VerifyWavgCondition(two.net(), two.at(3), one, WeightVector::Uniform(1)).holds);
}

TEST_CASE("weighted average is the unique grid minimizer", "[objectives][property]") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const auto net = RandomNetwork(static_cast<Topology>(trial % 4),
                                   static_cast<int>(rng.UniformInt(2, 20)), 0.3, 2.0, rng);
    const auto m = static_cast<std::size_t>(rng.UniformInt(1, 10));
    std::vector<Point> ys;
    std::vector<double> raw;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ys.push_back(RandomPoint(net, trial % 2 ? Placement::kAnywhere : Placement::kNodesOnly, rng));
      raw.push_back(rng.Uniform(0.1, 1.0));
      total += raw.back();
    }
    for (double& w : raw) w /= total;
    const WeightVector weights(raw);
    const Point avg = WeightedAverage(net, ys, weights);
    auto f = [&](const Point& l) { return oracle::WeightedSquares(net, ys, raw, l); };
    const auto grid = oracle::GridMinimize(net, f);
    CHECK_THAT(f(avg), WithinRel(grid.value, 1e-6) || WithinAbs(grid.value, 1e-12));
    CHECK(f(avg) <= grid.value + 1e-12);
    CHECK(net.Distance(avg, grid.point) < 1e-4);
    CHECK(VerifyWavgCondition(net, avg, ys, weights).holds);
    // Every near-minimal grid point sits in one neighborhood of avg.
    for (const Point& p : oracle::NearMinimal(net, f, f(avg), 1e-6, 5e-3)) {
      CHECK(net.Distance(p, avg) < 2e-3);
    }
    // Other points fail the optimality condition and cost strictly more.
    for (int k = 0; k < 20; ++k) {
      const Point p = RandomPoint(net, Placement::kAnywhere, rng);
      if (net.Distance(p, avg) <= 1e-3) continue;
      CHECK(f(p) > f(avg));
      CHECK_FALSE(VerifyWavgCondition(net, p, ys, weights).holds);
    }
  }
}

TEST_CASE("line optimum is the arithmetic mean", "[objectives][property]") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = RandomNetwork(Topology::kLine, static_cast<int>(rng.UniformInt(2, 10)), 0.5,
                                   2.0, rng);
    const LineView line(net);
    std::vector<Point> xs;
    double sum = 0.0;
    const auto n = rng.UniformInt(1, 12);
    for (int i = 0; i < n; ++i) {
      xs.push_back(RandomPoint(net, Placement::kAnywhere, rng));
      sum += line.Coordinate(xs.back());
    }
    const auto opt = Optimize(net, LocationProfile(xs), Objective::kMiniSOS);
    CHECK_THAT(line.Coordinate(opt.point), WithinAbs(sum / static_cast<double>(n), 1e-9));
  }
}

TEST_CASE("minisum and minimax solvers agree with brute force", "[objectives][property]") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = RandomNetwork(static_cast<Topology>(trial % 4),
                                   static_cast<int>(rng.UniformInt(2, 12)), 0.5, 2.0, rng);
    std::vector<Point> xs;
    const auto n = rng.UniformInt(1, 9);
    for (int i = 0; i < n; ++i) xs.push_back(RandomPoint(net, Placement::kAnywhere, rng));
    const LocationProfile profile(xs);
    for (auto o : {Objective::kMinisum, Objective::kMinimax}) {
      const auto opt = Optimize(net, profile, o);
      const auto grid = oracle::GridMinimize(
          net, [&](const Point& l) { return SocialCost(net, l, profile, o); });
      CHECK(opt.cost <= grid.value + 1e-9);
      CHECK_THAT(opt.cost, WithinAbs(grid.value, 1e-6));
    }
    // Minimax optimum: midpoint of the farthest pair, cost half their distance.
    double diameter = 0.0;
    for (const Point& a : xs) {
      for (const Point& b : xs) diameter = std::max(diameter, net.Distance(a, b));
    }
    CHECK_THAT(Optimize(net, profile, Objective::kMinimax).cost, WithinAbs(diameter / 2.0, 1e-12));
  }
}

}  // namespace
}  // namespace treefl
