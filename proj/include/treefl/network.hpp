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

#ifndef TREEFL_NETWORK_HPP_
#define TREEFL_NETWORK_HPP_

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treefl {

using NodeId = int;
using EdgeIndex = int;

// Offsets within this distance of an edge endpoint collapse onto the node.
inline constexpr double kSnapTolerance = 1e-12;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length = 0.0;
};

// A location on a tree network: either a node or a point strictly inside an
// edge, at `offset` from the edge's `u` endpoint. Points are only meaningful
// relative to the network that produced them. Values built through
// TreeNetwork::Canonical are canonical, so structural equality is exact.
class Point {
 public:
  Point() = default;

  static Point AtNode(NodeId node) { return Point(node, -1, 0.0); }
  // Unchecked; use TreeNetwork::Canonical to snap and validate.
  static Point Interior(EdgeIndex edge, double offset) {
    return Point(-1, edge, offset);
  }

  bool is_node() const { return edge_ < 0; }
  NodeId node() const { return node_; }
  EdgeIndex edge() const { return edge_; }
  double offset() const { return offset_; }

  std::string ToString() const;

  friend bool operator==(const Point&, const Point&) = default;
  // Nodes order before interior points; interior points by (edge, offset).
  friend std::partial_ordering operator<=>(const Point& a, const Point& b);

 private:
  Point(NodeId node, EdgeIndex edge, double offset)
      : node_(node), edge_(edge), offset_(offset) {}

  NodeId node_ = 0;
  EdgeIndex edge_ = -1;
  double offset_ = 0.0;
};

// First edge-direction out of an anchor point; identifies one component of
// G \ {anchor}.
struct BranchKey {
  EdgeIndex edge = -1;
  NodeId toward = -1;

  friend bool operator==(const BranchKey&, const BranchKey&) = default;
  friend auto operator<=>(const BranchKey&, const BranchKey&) = default;
};

struct SubtreeId {
  Point anchor;
  BranchKey branch;

  friend bool operator==(const SubtreeId&, const SubtreeId&) = default;
};

// Immutable weighted tree. Construction goes through Validate, which checks
// the tree invariants and precomputes all-pairs node distances and next-hop
// tables.
class TreeNetwork {
 public:
  struct Incidence {
    EdgeIndex edge;
    NodeId neighbor;
  };

  // Throws Error with kBadNodeId, kNonPositiveLength, kCyclic or
  // kDisconnected.
  static TreeNetwork Validate(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const Incidence> incident(NodeId node) const {
    return adjacency_[static_cast<std::size_t>(node)];
  }
  int degree(NodeId node) const {
    return static_cast<int>(adjacency_[static_cast<std::size_t>(node)].size());
  }
  double total_length() const { return total_length_; }

  double NodeDistance(NodeId a, NodeId b) const {
    return node_distance_[Index(a, b)];
  }
  // Neighbor of `from` on the path toward `to` (from != to).
  NodeId NextHop(NodeId from, NodeId to) const { return next_hop_[Index(from, to)]; }
  // Edge leaving `from` on the path toward `to` (from != to).
  EdgeIndex NextEdge(NodeId from, NodeId to) const {
    return next_edge_[Index(from, to)];
  }

  // Snaps offsets within kSnapTolerance of an endpoint to that node.
  // Throws kPointInvalid for a bad edge index or an offset outside [0, L].
  Point Canonical(EdgeIndex edge, double offset) const;
  // Throws kPointInvalid unless `p` is a canonical point of this network.
  void Check(const Point& p) const;
  bool IsValid(const Point& p) const;

  double Distance(const Point& a, const Point& b) const;
  // Points traversed from a to b: a, the nodes in between, then b.
  std::vector<Point> Path(const Point& a, const Point& b) const;
  // Point on path(a, b) at distance `d` from a, clamped to [0, d(a, b)].
  Point Along(const Point& a, const Point& b, double d) const;

  // Offset of a node or interior point measured from the u end of `edge`.
  // Requires the point to lie on the closed edge.
  double OffsetOn(EdgeIndex edge, const Point& p) const;

  // Component of G \ {anchor} containing x; nullopt when x == anchor.
  std::optional<BranchKey> BranchOf(const Point& anchor, const Point& x) const;
  // All branch keys at `anchor`: degree-many at a node, two inside an edge.
  std::vector<BranchKey> BranchesAt(const Point& anchor) const;

  bool IsLine() const;

 private:
  TreeNetwork() = default;
  std::size_t Index(NodeId a, NodeId b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(node_count_) +
           static_cast<std::size_t>(b);
  }

  int node_count_ = 0;
  double total_length_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<double> node_distance_;
  std::vector<NodeId> next_hop_;
  std::vector<EdgeIndex> next_edge_;
};

// Free-function forms of the core network operations.
inline TreeNetwork Validate(int node_count, std::vector<Edge> edges) {
  return TreeNetwork::Validate(node_count, std::move(edges));
}
double Distance(const TreeNetwork& network, const Point& a, const Point& b);
std::vector<Point> Path(const TreeNetwork& network, const Point& a, const Point& b);
// Sum of consecutive segment lengths along a path.
double PathLength(const TreeNetwork& network, std::span<const Point> path);

// True when `x` lies on path(a, b), within `tolerance`.
bool OnPath(const TreeNetwork& network, const Point& a, const Point& b,
            const Point& x, double tolerance = 1e-9);

class LocationProfile {
 public:
  LocationProfile() = default;
  explicit LocationProfile(std::vector<Point> locations)
      : locations_(std::move(locations)) {}

  std::size_t size() const { return locations_.size(); }
  bool empty() const { return locations_.empty(); }
  const Point& operator[](std::size_t i) const { return locations_[i]; }
  std::span<const Point> points() const { return locations_; }

  // Copy of this profile with agent i reporting `p`.
  LocationProfile With(std::size_t i, const Point& p) const;
  // Throws kPointInvalid naming the first offending index.
  void Check(const TreeNetwork& network) const;

  friend bool operator==(const LocationProfile&, const LocationProfile&) = default;

 private:
  std::vector<Point> locations_;
};

struct Branch {
  SubtreeId id;
  std::vector<std::size_t> members;  // indices into the location list
};

// T(G, p) with the agents of `locations` assigned to branches. Every branch
// at p is listed, including empty ones; an agent located at p is in none.
std::vector<Branch> SubtreesAt(const TreeNetwork& network, const Point& p,
                               std::span<const Point> locations);

// A network refined so that every anchor is a node, with maps in both
// directions. Original node ids are preserved; new nodes are appended.
class Subdivision {
 public:
  const TreeNetwork& network() const { return network_; }
  Point ToAugmented(const Point& original) const;
  Point ToOriginal(const Point& augmented) const;

 private:
  friend Subdivision Subdivide(const TreeNetwork&, std::span<const Point>);

  struct Piece {
    EdgeIndex original_edge;
    double base_offset;
  };

  explicit Subdivision(TreeNetwork network) : network_(std::move(network)) {}

  TreeNetwork network_;
  std::vector<double> original_lengths_;
  // Per original edge: sorted interior cut offsets, the node created at each
  // cut, and the augmented edge for each of the cuts+1 pieces.
  std::vector<std::vector<double>> cuts_;
  std::vector<std::vector<NodeId>> cut_nodes_;
  std::vector<std::vector<EdgeIndex>> pieces_;
  std::vector<Piece> piece_of_edge_;
  std::vector<Point> node_origin_;  // augmented node -> original point
};

Subdivision Subdivide(const TreeNetwork& network, std::span<const Point> anchors);

// Coordinates along a path network. The origin end is the lowest-numbered
// endpoint (node 0 whenever node 0 is a leaf); `origin` shifts all
// coordinates, so instances on e.g. [-2, 2] keep their natural labels.
class LineView {
 public:
  // Throws kNotALine.
  explicit LineView(const TreeNetwork& network, double origin = 0.0);

  double Coordinate(const Point& p) const;
  Point At(double coordinate) const;
  double min() const { return origin_; }
  double max() const { return origin_ + length_; }

 private:
  const TreeNetwork* network_;
  double origin_;
  double length_ = 0.0;
  std::vector<NodeId> order_;         // nodes from the origin end
  std::vector<double> node_coord_;    // indexed by node id, without origin
  std::vector<EdgeIndex> segment_;    // order_[k] -> order_[k+1]
};

}  // namespace treefl

#endif  // TREEFL_NETWORK_HPP_
