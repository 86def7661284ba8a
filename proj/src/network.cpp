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

#include "treefl/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "treefl/error.hpp"

namespace treefl {

std::string Point::ToString() const {
  std::ostringstream out;
  out.precision(17);
  if (is_node()) {
    out << "node:" << node_;
  } else {
    out << "edge:" << edge_ << "@" << offset_;
  }
  return out.str();
}

std::partial_ordering operator<=>(const Point& a, const Point& b) {
  if (a.is_node() != b.is_node()) {
    return a.is_node() ? std::partial_ordering::less
                       : std::partial_ordering::greater;
  }
  if (a.is_node()) return a.node_ <=> b.node_;
  if (a.edge_ != b.edge_) return a.edge_ <=> b.edge_;
  return a.offset_ <=> b.offset_;
}

namespace {

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int Find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  std::vector<int> parent;
};

}  // namespace

TreeNetwork TreeNetwork::Validate(int node_count, std::vector<Edge> edges) {
  if (node_count < 1) {
    throw Error(ErrorCode::kBadNodeId, "network needs at least one node");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u < 0 || e.u >= node_count || e.v < 0 || e.v >= node_count) {
      throw Error(ErrorCode::kBadNodeId,
                  "edge " + std::to_string(i) + " references a node outside 0.." +
                      std::to_string(node_count - 1));
    }
    if (!std::isfinite(e.length) || e.length <= 0.0) {
      throw Error(ErrorCode::kNonPositiveLength,
                  "edge " + std::to_string(i) + " has length that is not a positive finite number");
    }
  }
  if (static_cast<long>(edges.size()) >= node_count) {
    throw Error(ErrorCode::kCyclic, std::to_string(edges.size()) + " edges on " +
                                        std::to_string(node_count) +
                                        " nodes cannot form a tree");
  }
  DisjointSets sets(node_count);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int a = sets.Find(edges[i].u);
    int b = sets.Find(edges[i].v);
    if (a == b) {
      throw Error(ErrorCode::kCyclic, "edge " + std::to_string(i) + " closes a cycle");
    }
    sets.parent[static_cast<std::size_t>(a)] = b;
  }
  if (static_cast<int>(edges.size()) != node_count - 1) {
    throw Error(ErrorCode::kDisconnected,
                std::to_string(node_count - static_cast<int>(edges.size())) +
                    " components");
  }

  TreeNetwork net;
  net.node_count_ = node_count;
  net.edges_ = std::move(edges);
  net.adjacency_.resize(static_cast<std::size_t>(node_count));
  for (std::size_t i = 0; i < net.edges_.size(); ++i) {
    const Edge& e = net.edges_[i];
    net.adjacency_[static_cast<std::size_t>(e.u)].push_back({static_cast<EdgeIndex>(i), e.v});
    net.adjacency_[static_cast<std::size_t>(e.v)].push_back({static_cast<EdgeIndex>(i), e.u});
    net.total_length_ += e.length;
  }

  const auto cells = static_cast<std::size_t>(node_count) * static_cast<std::size_t>(node_count);
  net.node_distance_.assign(cells, 0.0);
  net.next_hop_.assign(cells, -1);
  net.next_edge_.assign(cells, -1);
  std::vector<char> seen(static_cast<std::size_t>(node_count));
  for (NodeId root = 0; root < node_count; ++root) {
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<NodeId> frontier;
    frontier.push(root);
    seen[static_cast<std::size_t>(root)] = 1;
    while (!frontier.empty()) {
      NodeId x = frontier.front();
      frontier.pop();
      for (const Incidence& inc : net.adjacency_[static_cast<std::size_t>(x)]) {
        NodeId y = inc.neighbor;
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = 1;
        net.node_distance_[net.Index(root, y)] =
            net.node_distance_[net.Index(root, x)] + net.edges_[static_cast<std::size_t>(inc.edge)].length;
        // y's first step toward root is back through x.
        net.next_hop_[net.Index(y, root)] = x;
        net.next_edge_[net.Index(y, root)] = inc.edge;
        frontier.push(y);
      }
    }
  }
  return net;
}

Point TreeNetwork::Canonical(EdgeIndex edge, double offset) const {
  if (edge < 0 || edge >= edge_count()) {
    throw Error(ErrorCode::kPointInvalid, "edge index " + std::to_string(edge) + " out of range");
  }
  const Edge& e = edges_[static_cast<std::size_t>(edge)];
  if (!std::isfinite(offset) || offset < -kSnapTolerance ||
      offset > e.length + kSnapTolerance) {
    throw Error(ErrorCode::kPointInvalid, "offset outside edge " + std::to_string(edge));
  }
  if (offset <= kSnapTolerance) return Point::AtNode(e.u);
  if (offset >= e.length - kSnapTolerance) return Point::AtNode(e.v);
  return Point::Interior(edge, offset);
}

bool TreeNetwork::IsValid(const Point& p) const {
  if (p.is_node()) return p.node() >= 0 && p.node() < node_count_;
  if (p.edge() < 0 || p.edge() >= edge_count()) return false;
  const double len = edges_[static_cast<std::size_t>(p.edge())].length;
  return p.offset() > kSnapTolerance && p.offset() < len - kSnapTolerance;
}

void TreeNetwork::Check(const Point& p) const {
  if (!IsValid(p)) {
    throw Error(ErrorCode::kPointInvalid, p.ToString() + " is not a canonical point of this network");
  }
}

double TreeNetwork::Distance(const Point& a, const Point& b) const {
  // Fixed argument order keeps the result exactly symmetric.
  if (b < a) return Distance(b, a);
  if (a.is_node() && b.is_node()) return NodeDistance(a.node(), b.node());
  if (a.is_node() || b.is_node()) {
    const Point& n = a.is_node() ? a : b;
    const Point& x = a.is_node() ? b : a;
    const Edge& e = edge(x.edge());
    return std::min(NodeDistance(n.node(), e.u) + x.offset(),
                    NodeDistance(n.node(), e.v) + e.length - x.offset());
  }
  if (a.edge() == b.edge()) return std::abs(a.offset() - b.offset());
  const Edge& ea = edge(a.edge());
  const Edge& eb = edge(b.edge());
  const double a_to[2] = {a.offset(), ea.length - a.offset()};
  const NodeId a_end[2] = {ea.u, ea.v};
  const double b_to[2] = {b.offset(), eb.length - b.offset()};
  const NodeId b_end[2] = {eb.u, eb.v};
  double best = a_to[0] + NodeDistance(a_end[0], b_end[0]) + b_to[0];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      best = std::min(best, a_to[i] + NodeDistance(a_end[i], b_end[j]) + b_to[j]);
    }
  }
  return best;
}

namespace {

// Endpoint of `from`'s edge through which the path to `to` leaves it.
NodeId ExitNode(const TreeNetwork& net, const Point& from, const Point& to) {
  if (from.is_node()) return from.node();
  const Edge& e = net.edge(from.edge());
  const double via_u = from.offset() + net.Distance(Point::AtNode(e.u), to);
  const double via_v = e.length - from.offset() + net.Distance(Point::AtNode(e.v), to);
  return via_u <= via_v ? e.u : e.v;
}

}  // namespace

std::vector<Point> TreeNetwork::Path(const Point& a, const Point& b) const {
  Check(a);
  Check(b);
  if (a == b) return {a};
  if (!a.is_node() && !b.is_node() && a.edge() == b.edge()) return {a, b};
  std::vector<Point> out;
  if (!a.is_node()) out.push_back(a);
  NodeId cur = ExitNode(*this, a, b);
  const NodeId last = ExitNode(*this, b, a);
  out.push_back(Point::AtNode(cur));
  while (cur != last) {
    cur = NextHop(cur, last);
    out.push_back(Point::AtNode(cur));
  }
  if (!b.is_node()) out.push_back(b);
  return out;
}

double TreeNetwork::OffsetOn(EdgeIndex edge_index, const Point& p) const {
  const Edge& e = edge(edge_index);
  if (p.is_node()) {
    if (p.node() == e.u) return 0.0;
    if (p.node() == e.v) return e.length;
  } else if (p.edge() == edge_index) {
    return p.offset();
  }
  throw Error(ErrorCode::kPointInvalid, p.ToString() + " is not on edge " + std::to_string(edge_index));
}

Point TreeNetwork::Along(const Point& a, const Point& b, double d) const {
  const std::vector<Point> path = Path(a, b);
  if (d <= 0.0) return a;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Point& p = path[k];
    const Point& q = path[k + 1];
    const double len = Distance(p, q);
    if (d <= len) {
      EdgeIndex e = !p.is_node() ? p.edge() : !q.is_node() ? q.edge() : NextEdge(p.node(), q.node());
      const double op = OffsetOn(e, p);
      const double oq = OffsetOn(e, q);
      return Canonical(e, op + (oq - op) * (d / len));
    }
    d -= len;
  }
  return b;
}

std::optional<BranchKey> TreeNetwork::BranchOf(const Point& anchor, const Point& x) const {
  if (anchor == x) return std::nullopt;
  if (anchor.is_node()) {
    const NodeId c = anchor.node();
    NodeId target;
    if (x.is_node()) {
      target = x.node();
    } else {
      const Edge& e = edge(x.edge());
      if (c == e.u) return BranchKey{x.edge(), e.v};
      if (c == e.v) return BranchKey{x.edge(), e.u};
      target = NodeDistance(c, e.u) < NodeDistance(c, e.v) ? e.u : e.v;
    }
    return BranchKey{NextEdge(c, target), NextHop(c, target)};
  }
  const Edge& e = edge(anchor.edge());
  if (!x.is_node() && x.edge() == anchor.edge()) {
    return BranchKey{anchor.edge(), x.offset() < anchor.offset() ? e.u : e.v};
  }
  const double du = Distance(Point::AtNode(e.u), x);
  const double dv = Distance(Point::AtNode(e.v), x);
  return BranchKey{anchor.edge(), du < dv ? e.u : e.v};
}

std::vector<BranchKey> TreeNetwork::BranchesAt(const Point& anchor) const {
  std::vector<BranchKey> out;
  if (anchor.is_node()) {
    for (const Incidence& inc : incident(anchor.node())) out.push_back({inc.edge, inc.neighbor});
  } else {
    const Edge& e = edge(anchor.edge());
    out.push_back({anchor.edge(), e.u});
    out.push_back({anchor.edge(), e.v});
  }
  return out;
}

bool TreeNetwork::IsLine() const {
  for (const auto& adj : adjacency_) {
    if (adj.size() > 2) return false;
  }
  return true;
}

double Distance(const TreeNetwork& network, const Point& a, const Point& b) {
  network.Check(a);
  network.Check(b);
  return network.Distance(a, b);
}

std::vector<Point> Path(const TreeNetwork& network, const Point& a, const Point& b) {
  return network.Path(a, b);
}

double PathLength(const TreeNetwork& network, std::span<const Point> path) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) total += network.Distance(path[k], path[k + 1]);
  return total;
}

bool OnPath(const TreeNetwork& network, const Point& a, const Point& b, const Point& x,
            double tolerance) {
  return network.Distance(a, x) + network.Distance(x, b) - network.Distance(a, b) <= tolerance;
}

LocationProfile LocationProfile::With(std::size_t i, const Point& p) const {
  LocationProfile out = *this;
  out.locations_.at(i) = p;
  return out;
}

void LocationProfile::Check(const TreeNetwork& network) const {
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    if (!network.IsValid(locations_[i])) {
      throw Error(ErrorCode::kPointInvalid, "location " + std::to_string(i) + " (" +
                                                locations_[i].ToString() + ") is not valid");
    }
  }
}

std::vector<Branch> SubtreesAt(const TreeNetwork& network, const Point& p,
                               std::span<const Point> locations) {
  network.Check(p);
  std::vector<Branch> branches;
  for (const BranchKey& key : network.BranchesAt(p)) branches.push_back({{p, key}, {}});
  for (std::size_t i = 0; i < locations.size(); ++i) {
    network.Check(locations[i]);
    const auto key = network.BranchOf(p, locations[i]);
    if (!key) continue;
    for (Branch& b : branches) {
      if (b.id.branch == *key) {
        b.members.push_back(i);
        break;
      }
    }
  }
  return branches;
}

Subdivision Subdivide(const TreeNetwork& network, std::span<const Point> anchors) {
  const auto edge_count = static_cast<std::size_t>(network.edge_count());
  std::vector<std::vector<double>> cuts(edge_count);
  for (const Point& a : anchors) {
    network.Check(a);
    if (!a.is_node()) cuts[static_cast<std::size_t>(a.edge())].push_back(a.offset());
  }
  for (auto& c : cuts) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end(),
                        [](double x, double y) { return y - x <= kSnapTolerance; }),
            c.end());
  }

  NodeId next_node = network.node_count();
  std::vector<std::vector<NodeId>> cut_nodes(edge_count);
  std::vector<Point> node_origin;
  for (NodeId n = 0; n < network.node_count(); ++n) node_origin.push_back(Point::AtNode(n));
  for (std::size_t e = 0; e < edge_count; ++e) {
    for (double c : cuts[e]) {
      cut_nodes[e].push_back(next_node++);
      node_origin.push_back(Point::Interior(static_cast<EdgeIndex>(e), c));
    }
  }

  std::vector<Edge> edges;
  std::vector<std::vector<EdgeIndex>> pieces(edge_count);
  std::vector<Subdivision::Piece> piece_of_edge;
  for (std::size_t e = 0; e < edge_count; ++e) {
    const Edge& orig = network.edge(static_cast<EdgeIndex>(e));
    std::vector<NodeId> chain{orig.u};
    std::vector<double> offsets{0.0};
    for (std::size_t k = 0; k < cuts[e].size(); ++k) {
      chain.push_back(cut_nodes[e][k]);
      offsets.push_back(cuts[e][k]);
    }
    chain.push_back(orig.v);
    offsets.push_back(orig.length);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      pieces[e].push_back(static_cast<EdgeIndex>(edges.size()));
      piece_of_edge.push_back({static_cast<EdgeIndex>(e), offsets[k]});
      edges.push_back({chain[k], chain[k + 1], offsets[k + 1] - offsets[k]});
    }
  }

  Subdivision out(TreeNetwork::Validate(next_node, std::move(edges)));
  for (const Edge& e : network.edges()) out.original_lengths_.push_back(e.length);
  out.cuts_ = std::move(cuts);
  out.cut_nodes_ = std::move(cut_nodes);
  out.pieces_ = std::move(pieces);
  out.piece_of_edge_ = std::move(piece_of_edge);
  out.node_origin_ = std::move(node_origin);
  return out;
}

Point Subdivision::ToAugmented(const Point& original) const {
  if (original.is_node()) return original;
  const auto e = static_cast<std::size_t>(original.edge());
  if (e >= cuts_.size()) throw Error(ErrorCode::kPointInvalid, original.ToString());
  const auto& cuts = cuts_[e];
  const double t = original.offset();
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), t - kSnapTolerance);
  if (it != cuts.end() && std::abs(*it - t) <= kSnapTolerance) {
    return Point::AtNode(cut_nodes_[e][static_cast<std::size_t>(it - cuts.begin())]);
  }
  const auto piece = static_cast<std::size_t>(it - cuts.begin());
  const double base = piece == 0 ? 0.0 : cuts[piece - 1];
  return network_.Canonical(pieces_[e][piece], t - base);
}

Point Subdivision::ToOriginal(const Point& augmented) const {
  network_.Check(augmented);
  if (augmented.is_node()) return node_origin_[static_cast<std::size_t>(augmented.node())];
  const Piece& piece = piece_of_edge_[static_cast<std::size_t>(augmented.edge())];
  return Point::Interior(piece.original_edge, piece.base_offset + augmented.offset());
}

LineView::LineView(const TreeNetwork& network, double origin)
    : network_(&network), origin_(origin) {
  if (!network.IsLine()) throw Error(ErrorCode::kNotALine, "network has a node of degree > 2");
  NodeId start = 0;
  for (NodeId n = 0; n < network.node_count(); ++n) {
    if (network.degree(n) <= 1) {
      start = n;
      break;
    }
  }
  node_coord_.assign(static_cast<std::size_t>(network.node_count()), 0.0);
  order_.push_back(start);
  NodeId prev = -1;
  NodeId cur = start;
  while (true) {
    bool moved = false;
    for (const auto& inc : network.incident(cur)) {
      if (inc.neighbor == prev) continue;
      node_coord_[static_cast<std::size_t>(inc.neighbor)] =
          node_coord_[static_cast<std::size_t>(cur)] + network.edge(inc.edge).length;
      segment_.push_back(inc.edge);
      order_.push_back(inc.neighbor);
      prev = cur;
      cur = inc.neighbor;
      moved = true;
      break;
    }
    if (!moved) break;
  }
  length_ = node_coord_[static_cast<std::size_t>(cur)];
}

double LineView::Coordinate(const Point& p) const {
  if (p.is_node()) return origin_ + node_coord_[static_cast<std::size_t>(p.node())];
  const Edge& e = network_->edge(p.edge());
  const double cu = node_coord_[static_cast<std::size_t>(e.u)];
  const double cv = node_coord_[static_cast<std::size_t>(e.v)];
  return origin_ + (cu < cv ? cu + p.offset() : cu - p.offset());
}

Point LineView::At(double coordinate) const {
  const double x = coordinate - origin_;
  if (!std::isfinite(x) || x < -kSnapTolerance || x > length_ + kSnapTolerance) {
    throw Error(ErrorCode::kPointInvalid, "coordinate outside the line");
  }
  if (segment_.empty()) return Point::AtNode(order_.front());
  std::size_t k = 0;
  while (k + 1 < segment_.size() &&
         x > node_coord_[static_cast<std::size_t>(order_[k + 1])]) {
    ++k;
  }
  const EdgeIndex edge = segment_[k];
  const Edge& e = network_->edge(edge);
  const double c_lo = node_coord_[static_cast<std::size_t>(order_[k])];
  const double offset = e.u == order_[k] ? x - c_lo : e.length - (x - c_lo);
  return network_->Canonical(edge, std::clamp(offset, 0.0, e.length));
}

}  // namespace treefl
