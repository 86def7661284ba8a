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

#include "treefl/harness/recipe.hpp"

#include <cmath>
#include <limits>

#include "treefl/error.hpp"
#include "treefl/mechanisms.hpp"

namespace treefl {
namespace {

template <typename T>
T Get(const io::Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kBadConfig, std::string("bad value for \"") + key + "\"");
  }
}

template <typename T>
void GetRange(const io::Json& j, const char* key, T& lo, T& hi) {
  if (!j.contains(key)) return;
  const io::Json& r = j.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    throw Error(ErrorCode::kBadConfig, std::string("\"") + key + "\" must be [min, max]");
  }
  lo = r[0].get<T>();
  hi = r[1].get<T>();
}

}  // namespace

void ExperimentRecipe::Check() const {
  if (mechanisms.empty()) throw Error(ErrorCode::kBadConfig, "recipe lists no mechanisms");
  if (budget < 1) throw Error(ErrorCode::kBadConfig, "budget must be at least 1");
  if (!(grid > 0.0 && grid <= 1.0)) throw Error(ErrorCode::kBadConfig, "grid must be in (0, 1]");
  generator.Check();
  for (const auto& m : mechanisms) MechanismSpec::Parse(m);
}

io::Json GeneratorConfigToJson(const GeneratorConfig& c) {
  io::Json j;
  j["topology"] = TopologyName(c.topology);
  j["nodes"] = {c.min_nodes, c.max_nodes};
  j["lengths"] = {c.min_length, c.max_length};
  j["agents"] = {c.min_agents, c.max_agents};
  j["placement"] = PlacementName(c.placement);
  j["seed"] = c.seed;
  return j;
}

GeneratorConfig GeneratorConfigFromJson(const io::Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadConfig, "generator must be an object");
  GeneratorConfig c;
  if (j.contains("topology")) c.topology = ParseTopology(Get<std::string>(j, "topology", ""));
  if (j.contains("placement")) c.placement = ParsePlacement(Get<std::string>(j, "placement", ""));
  GetRange(j, "nodes", c.min_nodes, c.max_nodes);
  GetRange(j, "lengths", c.min_length, c.max_length);
  GetRange(j, "agents", c.min_agents, c.max_agents);
  c.seed = Get<std::uint64_t>(j, "seed", c.seed);
  c.Check();
  return c;
}

io::Json RecipeToJson(const ExperimentRecipe& r) {
  io::Json j;
  j["mechanisms"] = r.mechanisms;
  j["objective"] = ObjectiveName(r.objective);
  j["generator"] = GeneratorConfigToJson(r.generator);
  j["budget"] = r.budget;
  j["output"] = r.output;
  j["sp_check"] = r.sp_check;
  j["grid"] = r.grid;
  return j;
}

ExperimentRecipe RecipeFromJson(const io::Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadConfig, "recipe must be an object");
  ExperimentRecipe r;
  r.mechanisms = Get<std::vector<std::string>>(j, "mechanisms", {});
  if (j.contains("objective")) r.objective = ParseObjective(Get<std::string>(j, "objective", ""));
  if (j.contains("generator")) r.generator = GeneratorConfigFromJson(j.at("generator"));
  const auto budget = Get<long long>(j, "budget", static_cast<long long>(r.budget));
  if (budget < 1) throw Error(ErrorCode::kBadConfig, "budget must be at least 1");
  r.budget = static_cast<std::size_t>(budget);
  r.output = Get<std::string>(j, "output", "");
  r.sp_check = Get<bool>(j, "sp_check", false);
  r.grid = Get<double>(j, "grid", r.grid);
  r.Check();
  return r;
}

ExperimentRecipe LoadRecipe(const std::filesystem::path& path) {
  const io::Json j = io::ReadJson(path);
  try {
    return RecipeFromJson(j);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

std::vector<csv::ResultRow> RunRecipe(const ExperimentRecipe& recipe) {
  recipe.Check();
  std::vector<csv::ResultRow> rows;
  const std::string objective(ObjectiveName(recipe.objective));
  const std::string topology(TopologyName(recipe.generator.topology));
  for (const auto& text : recipe.mechanisms) {
    const MechanismSpec spec = MechanismSpec::Parse(text);
    const Mechanism mech = AsMechanism(spec);
    InstanceGenerator generator(recipe.generator);
    for (std::size_t k = 0; k < recipe.budget; ++k) {
      const Instance inst = generator.Next();
      csv::ResultRow row;
      row.instance_digest = InstanceDigest(inst.network, inst.profile);
      row.mechanism = spec.Encode();
      row.objective = objective;
      row.seed = recipe.generator.seed;
      row.topology = topology;
      row.index = k;
      row.mech_cost = ExpectedSocialCost(inst.network, mech(inst.network, inst.profile),
                                         inst.profile, recipe.objective);
      row.opt_cost = Optimize(inst.network, inst.profile, recipe.objective).cost;
      if (row.opt_cost > kZeroCost) {
        row.ratio = row.mech_cost / row.opt_cost;
      } else {
        row.opt_cost = 0.0;
        row.ratio = row.mech_cost > kZeroCost ? std::numeric_limits<double>::infinity() : 1.0;
      }
      row.max_regret = std::nan("");
      if (recipe.sp_check) {
        row.max_regret = SpCheck(mech, inst.network, inst.profile,
                                 DeviationSet::Standard(inst.network, inst.profile, recipe.grid))
                             .max_regret;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<csv::ResultRow> SearchRows(const SearchResult& result, const std::string& mechanism,
                                       Objective objective, const GeneratorConfig& config,
                                       std::uint64_t seed) {
  std::vector<csv::ResultRow> rows;
  for (std::size_t k = 0; k < result.samples.size(); ++k) {
    const RatioReport& r = result.samples[k];
    csv::ResultRow row;
    row.instance_digest = r.digest;
    row.mechanism = mechanism;
    row.objective = std::string(ObjectiveName(objective));
    row.mech_cost = r.mechanism_cost;
    row.opt_cost = r.exact ? 0.0 : r.optimal_cost;
    row.ratio = r.ratio;
    row.max_regret = std::nan("");
    row.seed = seed;
    row.topology = std::string(TopologyName(config.topology));
    row.index = k;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace treefl
