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

#include "treefl/harness/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "treefl/error.hpp"

namespace treefl::io {
namespace {

[[noreturn]] void Fail(ErrorCode code, const std::string& where, const std::string& what) {
  throw Error(code, where + ": " + what);
}

long long GetIndex(const Json& j, const std::string& where, const char* field) {
  if (!j.is_number_integer()) Fail(ErrorCode::kParse, where, std::string(field) + " must be an integer");
  return j.get<long long>();
}

double GetReal(const Json& j, const std::string& where, const char* field) {
  if (!j.is_number()) Fail(ErrorCode::kParse, where, std::string(field) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json PointToJson(const Point& p) {
  Json j;
  if (p.is_node()) {
    j["node"] = p.node();
  } else {
    j["edge"] = p.edge();
    j["offset"] = p.offset();
  }
  return j;
}

Json NetworkToJson(const TreeNetwork& network) {
  Json j;
  j["nodes"] = network.node_count();
  j["edges"] = Json::array();
  for (const Edge& e : network.edges()) j["edges"].push_back(Json::array({e.u, e.v, e.length}));
  return j;
}

Json InstanceToJson(const Instance& instance) {
  Json j;
  j["network"] = NetworkToJson(instance.network);
  j["locations"] = Json::array();
  for (const Point& p : instance.profile.points()) j["locations"].push_back(PointToJson(p));
  return j;
}

Json DistributionToJson(const LocationDistribution& dist) {
  Json j = Json::array();
  for (const auto& atom : dist.support()) {
    j.push_back({{"point", PointToJson(atom.point)}, {"probability", atom.probability}});
  }
  return j;
}

Point PointFromJson(const Json& j, const TreeNetwork& network, const std::string& where) {
  if (!j.is_object()) Fail(ErrorCode::kParse, where, "point must be an object");
  if (j.contains("node")) {
    if (j.size() != 1) Fail(ErrorCode::kParse, where, "node point takes no other fields");
    const long long n = GetIndex(j["node"], where, "node");
    if (n < 0 || n >= network.node_count()) {
      Fail(ErrorCode::kBadNodeId, where, "node " + std::to_string(n) + " does not exist");
    }
    return Point::AtNode(static_cast<NodeId>(n));
  }
  if (!j.contains("edge") || !j.contains("offset") || j.size() != 2) {
    Fail(ErrorCode::kParse, where, "point needs {\"node\"} or {\"edge\", \"offset\"}");
  }
  const long long e = GetIndex(j["edge"], where, "edge");
  if (e < 0 || e >= network.edge_count()) {
    Fail(ErrorCode::kPointInvalid, where, "edge " + std::to_string(e) + " does not exist");
  }
  const double t = GetReal(j["offset"], where, "offset");
  const double len = network.edge(static_cast<EdgeIndex>(e)).length;
  if (!(t > 0.0 && t < len)) {
    std::ostringstream msg;
    msg << "offset " << t << " is not strictly inside edge " << e << " (length " << len
        << "); use a node point for endpoints";
    Fail(ErrorCode::kPointInvalid, where, msg.str());
  }
  return Point::Interior(static_cast<EdgeIndex>(e), t);
}

TreeNetwork NetworkFromJson(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges")) {
    Fail(ErrorCode::kParse, where, "tree needs \"nodes\" and \"edges\"");
  }
  const long long nodes = GetIndex(j["nodes"], where, "nodes");
  if (nodes < 1) Fail(ErrorCode::kParse, where, "nodes must be positive");
  if (!j["edges"].is_array()) Fail(ErrorCode::kParse, where, "edges must be an array");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < j["edges"].size(); ++k) {
    const Json& e = j["edges"][k];
    const std::string at = where + ": edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 3) Fail(ErrorCode::kParse, at, "edge must be [u, v, length]");
    edges.push_back({static_cast<NodeId>(GetIndex(e[0], at, "u")),
                     static_cast<NodeId>(GetIndex(e[1], at, "v")), GetReal(e[2], at, "length")});
  }
  try {
    return TreeNetwork::Validate(static_cast<int>(nodes), std::move(edges));
  } catch (const Error& err) {
    throw Error(err.code(), where + ": " + err.detail());
  }
}

Instance InstanceFromJson(const Json& j, const std::filesystem::path& base,
                          const std::string& where) {
  if (!j.is_object()) Fail(ErrorCode::kParse, where, "document must be an object");
  if (!j.contains("network")) {
    if (j.contains("nodes")) return {NetworkFromJson(j, where), LocationProfile{}};
    Fail(ErrorCode::kParse, where, "missing \"network\"");
  }
  const Json& nj = j["network"];
  TreeNetwork network = nj.is_string() ? LoadNetwork(base / nj.get<std::string>())
                                       : NetworkFromJson(nj, where + ": network");
  std::vector<Point> locations;
  if (j.contains("locations")) {
    if (!j["locations"].is_array()) Fail(ErrorCode::kParse, where, "locations must be an array");
    for (std::size_t k = 0; k < j["locations"].size(); ++k) {
      locations.push_back(PointFromJson(j["locations"][k], network,
                                        where + ": locations[" + std::to_string(k) + "]"));
    }
  }
  return {std::move(network), LocationProfile(std::move(locations))};
}

Json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

TreeNetwork LoadNetwork(const std::filesystem::path& path) {
  return NetworkFromJson(ReadJson(path), path.string());
}

Instance LoadInstance(const std::filesystem::path& path) {
  return InstanceFromJson(ReadJson(path), path.parent_path(), path.string());
}

void SaveInstance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParse, path.string() + ": cannot write file");
  out << InstanceToJson(instance).dump(2) << '\n';
}

}  // namespace treefl::io
