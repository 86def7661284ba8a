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

#include "treefl/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treefl/error.hpp"

namespace treefl {

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return lo + static_cast<std::int64_t>(draw % range);
}

std::string_view TopologyName(Topology t) {
  switch (t) {
    case Topology::kLine: return "line";
    case Topology::kStar: return "star";
    case Topology::kCaterpillar: return "caterpillar";
    case Topology::kRandomTree: return "random_tree";
  }
  return "unknown";
}

Topology ParseTopology(std::string_view text) {
  if (text == "line") return Topology::kLine;
  if (text == "star") return Topology::kStar;
  if (text == "caterpillar") return Topology::kCaterpillar;
  if (text == "random_tree" || text == "tree") return Topology::kRandomTree;
  throw Error(ErrorCode::kBadConfig, "unknown topology '" + std::string(text) + "'");
}

std::string_view PlacementName(Placement p) {
  return p == Placement::kNodesOnly ? "nodes_only" : "anywhere";
}

Placement ParsePlacement(std::string_view text) {
  if (text == "nodes_only" || text == "nodes") return Placement::kNodesOnly;
  if (text == "anywhere") return Placement::kAnywhere;
  throw Error(ErrorCode::kBadConfig, "unknown placement '" + std::string(text) + "'");
}

void GeneratorConfig::Check() const {
  if (min_nodes < 1 || min_nodes > max_nodes) {
    throw Error(ErrorCode::kBadConfig, "node count range is empty or below 1");
  }
  if (topology == Topology::kStar && max_nodes < 1) {
    throw Error(ErrorCode::kBadConfig, "star needs a center");
  }
  if (!(min_length > 0.0) || !(min_length <= max_length) || !std::isfinite(max_length)) {
    throw Error(ErrorCode::kBadConfig, "edge lengths need 0 < min <= max");
  }
  if (min_agents < 1 || min_agents > max_agents) {
    throw Error(ErrorCode::kBadConfig, "agent count range is empty or below 1");
  }
}

TreeNetwork RandomNetwork(Topology topology, int node_count, double min_length,
                          double max_length, Rng& rng) {
  std::vector<Edge> edges;
  auto length = [&] { return rng.Uniform(min_length, max_length); };
  switch (topology) {
    case Topology::kLine:
      for (NodeId i = 1; i < node_count; ++i) edges.push_back({i - 1, i, length()});
      break;
    case Topology::kStar:
      for (NodeId i = 1; i < node_count; ++i) edges.push_back({0, i, length()});
      break;
    case Topology::kCaterpillar: {
      const int spine = std::max(1, (node_count + 1) / 2);
      for (NodeId i = 1; i < spine; ++i) edges.push_back({i - 1, i, length()});
      for (NodeId i = spine; i < node_count; ++i) {
        edges.push_back({static_cast<NodeId>(rng.UniformInt(0, spine - 1)), i, length()});
      }
      break;
    }
    case Topology::kRandomTree:
      for (NodeId i = 1; i < node_count; ++i) {
        edges.push_back({static_cast<NodeId>(rng.UniformInt(0, i - 1)), i, length()});
      }
      break;
  }
  return TreeNetwork::Validate(node_count, std::move(edges));
}

Point RandomPoint(const TreeNetwork& network, Placement placement, Rng& rng) {
  if (placement == Placement::kNodesOnly || network.edge_count() == 0) {
    return Point::AtNode(static_cast<NodeId>(rng.UniformInt(0, network.node_count() - 1)));
  }
  double s = rng.Uniform(0.0, network.total_length());
  for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
    const double len = network.edge(e).length;
    if (s < len || e + 1 == network.edge_count()) return network.Canonical(e, std::min(s, len));
    s -= len;
  }
  return Point::AtNode(0);
}

InstanceGenerator::InstanceGenerator(const GeneratorConfig& config)
    : config_(config), rng_(config.seed) {
  config_.Check();
}

Instance InstanceGenerator::Next() {
  const int nodes = static_cast<int>(rng_.UniformInt(config_.min_nodes, config_.max_nodes));
  TreeNetwork network =
      RandomNetwork(config_.topology, nodes, config_.min_length, config_.max_length, rng_);
  const int agents = static_cast<int>(rng_.UniformInt(config_.min_agents, config_.max_agents));
  std::vector<Point> points;
  for (int i = 0; i < agents; ++i) points.push_back(RandomPoint(network, config_.placement, rng_));
  return {std::move(network), LocationProfile(std::move(points))};
}

}  // namespace treefl
