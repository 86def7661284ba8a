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

#ifndef TREEFL_GENERATOR_HPP_
#define TREEFL_GENERATOR_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include "treefl/network.hpp"

namespace treefl {

// Seeded source of randomness. std::mt19937_64 output is fixed by the
// standard; the conversions below are done by hand so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, 1).
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  // Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

enum class Topology { kLine, kStar, kCaterpillar, kRandomTree };
enum class Placement { kNodesOnly, kAnywhere };

std::string_view TopologyName(Topology t);
Topology ParseTopology(std::string_view text);
std::string_view PlacementName(Placement p);
Placement ParsePlacement(std::string_view text);

struct GeneratorConfig {
  Topology topology = Topology::kRandomTree;
  int min_nodes = 2;
  int max_nodes = 20;
  double min_length = 0.5;
  double max_length = 2.0;
  int min_agents = 1;
  int max_agents = 12;
  Placement placement = Placement::kAnywhere;
  std::uint64_t seed = 1;

  // Throws kBadConfig.
  void Check() const;
};

struct Instance {
  TreeNetwork network;
  LocationProfile profile;
};

// Instance stream fully determined by the config (seed included).
class InstanceGenerator {
 public:
  explicit InstanceGenerator(const GeneratorConfig& config);

  Instance Next();

 private:
  GeneratorConfig config_;
  Rng rng_;
};

// Uniform over nodes, or uniform over total edge length.
Point RandomPoint(const TreeNetwork& network, Placement placement, Rng& rng);
TreeNetwork RandomNetwork(Topology topology, int node_count, double min_length,
                          double max_length, Rng& rng);

}  // namespace treefl

#endif  // TREEFL_GENERATOR_HPP_
