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

// JSON encodings of networks, points and instances.

#ifndef TREEFL_HARNESS_IO_HPP_
#define TREEFL_HARNESS_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "treefl/generator.hpp"
#include "treefl/network.hpp"
#include "treefl/objectives.hpp"

namespace treefl::io {

using Json = nlohmann::ordered_json;

Json PointToJson(const Point& p);
Json NetworkToJson(const TreeNetwork& network);
// The network is written inline.
Json InstanceToJson(const Instance& instance);
Json DistributionToJson(const LocationDistribution& dist);

// `where` prefixes error messages, e.g. "two.json: locations[1]".
// Throws kPointInvalid for offsets outside (0, length).
Point PointFromJson(const Json& j, const TreeNetwork& network, const std::string& where);
TreeNetwork NetworkFromJson(const Json& j, const std::string& where);
// A string "network" member is a path resolved against `base`.
Instance InstanceFromJson(const Json& j, const std::filesystem::path& base,
                          const std::string& where);

Json ReadJson(const std::filesystem::path& path);
TreeNetwork LoadNetwork(const std::filesystem::path& path);
// Accepts either an instance document or a bare tree document (no agents).
Instance LoadInstance(const std::filesystem::path& path);
void SaveInstance(const Instance& instance, const std::filesystem::path& path);

}  // namespace treefl::io

#endif  // TREEFL_HARNESS_IO_HPP_
