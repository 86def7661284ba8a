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

#ifndef TREEFL_HARNESS_RECIPE_HPP_
#define TREEFL_HARNESS_RECIPE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "treefl/generator.hpp"
#include "treefl/harness/csv.hpp"
#include "treefl/harness/io.hpp"
#include "treefl/objectives.hpp"
#include "treefl/verify.hpp"

namespace treefl {

// A batch experiment: every mechanism is evaluated on the same `budget`
// instances drawn from `generator`.
struct ExperimentRecipe {
  std::vector<std::string> mechanisms;
  Objective objective = Objective::kMiniSOS;
  GeneratorConfig generator;
  std::size_t budget = 100;
  std::string output;  // empty for stdout
  bool sp_check = false;
  double grid = kDefaultGridFraction;

  // Throws kBadConfig, or the spec parse error of an invalid mechanism.
  void Check() const;
};

io::Json GeneratorConfigToJson(const GeneratorConfig& config);
// Missing members keep their defaults. Throws kBadConfig.
GeneratorConfig GeneratorConfigFromJson(const io::Json& j);

io::Json RecipeToJson(const ExperimentRecipe& recipe);
ExperimentRecipe RecipeFromJson(const io::Json& j);
ExperimentRecipe LoadRecipe(const std::filesystem::path& path);

std::vector<csv::ResultRow> RunRecipe(const ExperimentRecipe& recipe);

// Rows for the instances sampled by a search, in generation order.
std::vector<csv::ResultRow> SearchRows(const SearchResult& result, const std::string& mechanism,
                                       Objective objective, const GeneratorConfig& config,
                                       std::uint64_t seed);

}  // namespace treefl

#endif  // TREEFL_HARNESS_RECIPE_HPP_
