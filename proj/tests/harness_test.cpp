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
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "treefl/error.hpp"
#include "treefl/generator.hpp"
#include "treefl/harness/cli.hpp"
#include "treefl/harness/csv.hpp"
#include "treefl/harness/io.hpp"
#include "treefl/harness/recipe.hpp"
#include "treefl/harness/report.hpp"

namespace treefl {
namespace {

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("treefl_test_" + std::to_string(::getpid()) + "_" +
                                         std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path Write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "treefl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int ErrorCodeOf(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return static_cast<int>(e.code());
  }
  return -1;
}

TEST_CASE("generator is deterministic per seed", "[harness]") {
  GeneratorConfig c;
  c.topology = Topology::kLine;
  c.min_nodes = c.max_nodes = 3;
  c.min_agents = c.max_agents = 3;
  c.placement = Placement::kNodesOnly;
  c.seed = 42;
  const auto a = io::InstanceToJson(InstanceGenerator(c).Next()).dump();
  const auto b = io::InstanceToJson(InstanceGenerator(c).Next()).dump();
  CHECK(a == b);
  c.seed = 43;
  InstanceGenerator other(c);
  bool differs = false;
  for (int k = 0; k < 5; ++k) differs = differs || io::InstanceToJson(other.Next()).dump() != a;
  CHECK(differs);
  const auto inst = InstanceGenerator(c).Next();
  CHECK(inst.network.node_count() == 3);
  CHECK(inst.network.IsLine());
  for (const Point& p : inst.profile.points()) CHECK(p.is_node());
}

TEST_CASE("star topology is a center plus leaves", "[harness]") {
  for (int k = 1; k <= 8; ++k) {
    GeneratorConfig c;
    c.topology = Topology::kStar;
    c.min_nodes = c.max_nodes = k + 1;
    const auto net = InstanceGenerator(c).Next().network;
    CHECK(net.degree(0) == k);
    for (NodeId v = 1; v <= k; ++v) CHECK(net.degree(v) == 1);
  }
}

TEST_CASE("anywhere placement is uniform over length", "[harness]") {
  const auto net = TreeNetwork::Validate(3, {{0, 1, 1.0}, {1, 2, 3.0}});
  Rng rng(5);
  int on_short = 0;
  const int samples = 1000;
  for (int k = 0; k < samples; ++k) {
    const Point p = RandomPoint(net, Placement::kAnywhere, rng);
    REQUIRE_FALSE(p.is_node());
    if (p.edge() == 0) ++on_short;
  }
  CHECK_THAT(on_short / static_cast<double>(samples), WithinAbs(0.25, 0.05));
}

TEST_CASE("generator rejects bad configs", "[harness]") {
  GeneratorConfig c;
  c.min_nodes = 5;
  c.max_nodes = 4;
  CHECK(ErrorCodeOf([&] { InstanceGenerator{c}; }) == static_cast<int>(ErrorCode::kBadConfig));
  c = GeneratorConfig{};
  c.min_length = 0.0;
  CHECK(ErrorCodeOf([&] { c.Check(); }) == static_cast<int>(ErrorCode::kBadConfig));
  c = GeneratorConfig{};
  c.min_agents = 0;
  CHECK(ErrorCodeOf([&] { c.Check(); }) == static_cast<int>(ErrorCode::kBadConfig));
  CHECK_THROWS_AS(ParseTopology("ring"), Error);
}

TEST_CASE("instances round trip through JSON exactly", "[harness]") {
  for (auto t : {Topology::kLine, Topology::kStar, Topology::kCaterpillar, Topology::kRandomTree}) {
    GeneratorConfig c;
    c.topology = t;
    c.seed = 9;
    InstanceGenerator gen(c);
    for (int k = 0; k < 25; ++k) {
      const Instance inst = gen.Next();
      const auto text = io::InstanceToJson(inst).dump();
      const Instance back = io::InstanceFromJson(io::Json::parse(text), ".", "mem");
      CHECK(back.profile == inst.profile);
      REQUIRE(back.network.edge_count() == inst.network.edge_count());
      for (EdgeIndex e = 0; e < inst.network.edge_count(); ++e) {
        CHECK(back.network.edge(e).u == inst.network.edge(e).u);
        CHECK(back.network.edge(e).v == inst.network.edge(e).v);
        CHECK(back.network.edge(e).length == inst.network.edge(e).length);
      }
      CHECK(InstanceDigest(back.network, back.profile) ==
            InstanceDigest(inst.network, inst.profile));
    }
  }
}

TEST_CASE("instance files", "[harness]") {
  TempDir dir;
  dir.Write("tree.json", R"({"nodes": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0]]})");
  const auto path = dir.Write("two.json", R"({"network": "tree.json",
      "locations": [{"node": 0}, {"edge": 1, "offset": 0.5}]})");
  const Instance inst = io::LoadInstance(path);
  CHECK(inst.profile.size() == 2);
  CHECK(inst.profile[1] == Point::Interior(1, 0.5));

  std::string msg;
  const auto bad = dir.Write("bad.json", R"({"network": "tree.json",
      "locations": [{"node": 0}, {"edge": 1, "offset": 0}]})");
  CHECK(ErrorCodeOf([&] { io::LoadInstance(bad); }, &msg) ==
        static_cast<int>(ErrorCode::kPointInvalid));
  CHECK_THAT(msg, ContainsSubstring("locations[1]"));
  const auto far = dir.Write("far.json", R"({"network": "tree.json",
      "locations": [{"edge": 0, "offset": 1.0}]})");
  CHECK(ErrorCodeOf([&] { io::LoadInstance(far); }, &msg) ==
        static_cast<int>(ErrorCode::kPointInvalid));
  CHECK_THAT(msg, ContainsSubstring("locations[0]"));

  const auto cyclic = dir.Write("cyclic.json", R"({"network": {"nodes": 3,
      "edges": [[0, 1, 1], [1, 2, 1], [2, 0, 1]]}, "locations": [{"node": 0}]})");
  CHECK(ErrorCodeOf([&] { io::LoadInstance(cyclic); }, &msg) ==
        static_cast<int>(ErrorCode::kCyclic));
  CHECK_THAT(msg, ContainsSubstring("cyclic.json"));
  CHECK(ErrorCodeOf([&] { io::LoadInstance(dir.Write("x.json", "{nope")); }) ==
        static_cast<int>(ErrorCode::kParse));
  CHECK(ErrorCodeOf([&] { io::LoadInstance(dir.path() / "missing.json"); }) ==
        static_cast<int>(ErrorCode::kParse));

  const auto saved = dir.path() / "saved.json";
  io::SaveInstance(inst, saved);
  CHECK(io::LoadInstance(saved).profile == inst.profile);
}

TEST_CASE("csv rows round trip", "[harness]") {
  csv::ResultRow row{"0123456789abcdef", "pb:[kth:1,kth:n]:[1/2,1/2]", "minimax", 3.0, 2.0,
                     1.5, std::nan(""), 7, "line", 4};
  csv::ResultRow inf = row;
  inf.ratio = INFINITY;
  inf.opt_cost = 0.0;
  for (bool plot : {false, true}) {
    std::stringstream s;
    csv::Write(s, {row, inf}, plot);
    const auto back = csv::Read(s, "mem");
    REQUIRE(back.size() == 2);
    CHECK(back[0].mechanism == row.mechanism);
    CHECK(back[0].ratio == 1.5);
    CHECK(std::isnan(back[0].max_regret));
    CHECK(std::isinf(back[1].ratio));
    CHECK(back[0].index.has_value() == plot);
  }
  std::stringstream bad(csv::Header(false) + "\nabc,rd,minisos,1,2\n");
  std::string msg;
  CHECK(ErrorCodeOf([&] { csv::Read(bad, "r.csv"); }, &msg) ==
        static_cast<int>(ErrorCode::kMalformedCSV));
  CHECK_THAT(msg, ContainsSubstring("r.csv:2"));
  std::stringstream header("a,b\n");
  CHECK_THROWS_AS(csv::Read(header, "h.csv"), Error);
  std::stringstream number(csv::Header(false) + "\nd,rd,minisos,x,2,1,0,1,line\n");
  CHECK_THROWS_AS(csv::Read(number, "n.csv"), Error);
}

csv::ResultRow Row(const std::string& mech, double ratio, const std::string& obj = "minisos") {
  return {"d", mech, obj, ratio, 1.0, ratio, 0.0, 1, "random_tree", std::nullopt};
}

TEST_CASE("report flags rows above known bounds", "[harness]") {
  const std::vector<csv::ResultRow> ok{Row("median", 1.9), Row("median", 2.0), Row("rd", 2.0),
                                       Row("lrm", 1.5, "minimax"), Row("rdgm:4/6", 1.8)};
  const auto summary = report::Summarize(ok);
  CHECK(report::FlagCount(summary) == 0);
  REQUIRE(summary.size() == 4);
  CHECK(summary[0].count == 2);
  CHECK_THAT(summary[0].mean_ratio, WithinAbs(1.95, 1e-12));
  REQUIRE(summary[3].bound);
  CHECK(*summary[3].bound == 1.83);

  auto bad = ok;
  bad.push_back(Row("median", 2.5));
  const auto flagged = report::Summarize(bad);
  CHECK(report::FlagCount(flagged) == 1);
  CHECK(flagged[0].flagged);
  CHECK_THAT(report::FormatTable(flagged), ContainsSubstring("FLAG"));

  auto regret = ok;
  regret[2].max_regret = 0.01;
  CHECK(report::FlagCount(report::Summarize(regret)) == 1);

  auto zero = ok;
  zero.push_back(csv::ResultRow{"z", "median", "minisos", 0, 0, 1, 0, 1, "random_tree", {}});
  CHECK(report::Summarize(zero)[0].excluded == 1);
  CHECK(report::KnownBound("dgm:1:2/3", "minisos") == std::nullopt);
}

TEST_CASE("half average summary is exactly 1.5", "[harness]") {
  ExperimentRecipe recipe;
  recipe.mechanisms = {"half-avg-rd"};
  recipe.generator.topology = Topology::kLine;
  recipe.generator.seed = 11;
  recipe.budget = 100;
  const auto summary = report::Summarize(RunRecipe(recipe));
  REQUIRE(summary.size() == 1);
  CHECK_THAT(summary[0].max_ratio, WithinAbs(1.5, 1e-9));
  CHECK_THAT(summary[0].mean_ratio, WithinAbs(1.5, 1e-9));
  CHECK_FALSE(summary[0].flagged);
}

TEST_CASE("recipes give byte-identical csv", "[harness]") {
  ExperimentRecipe recipe;
  recipe.mechanisms = {"median", "rdgm:2/3", "pb:[median,dictator:1]:[1/2,1/2]"};
  recipe.generator.seed = 99;
  recipe.generator.max_nodes = 10;
  recipe.budget = 20;
  recipe.sp_check = true;
  recipe.grid = 0.25;
  const auto json = RecipeToJson(recipe);
  const ExperimentRecipe back = RecipeFromJson(io::Json::parse(json.dump()));
  CHECK(RecipeToJson(back).dump() == json.dump());
  std::stringstream a;
  std::stringstream b;
  csv::Write(a, RunRecipe(recipe), true);
  csv::Write(b, RunRecipe(back), true);
  CHECK(a.str() == b.str());
  CHECK(a.str().size() > 100);
  ExperimentRecipe broken = recipe;
  broken.mechanisms = {"pb:[rd]:[1]"};
  CHECK_THROWS_AS(broken.Check(), Error);
  CHECK_THROWS_AS(RecipeFromJson(io::Json::parse(R"({"mechanisms": ["rd"], "budget": -1})")),
                  Error);
}

TEST_CASE("cli", "[harness]") {
  TempDir dir;
  const auto two = dir.Write("two_agents.json", R"({"network": {"nodes": 3,
      "edges": [[0, 1, 1], [1, 2, 1]]}, "locations": [{"node": 0}, {"node": 2}]})");
  const auto cyclic = dir.Write("cyclic.json", R"({"network": {"nodes": 3,
      "edges": [[0, 1, 1], [1, 2, 1], [2, 0, 1]]}, "locations": [{"node": 0}]})");

  auto r = Cli({"eval", "--mech", "rd", "--instance", two.string(), "--objective", "minisos"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("line_coordinates: {0: 0.5, 2: 0.5}"));
  CHECK_THAT(r.out, ContainsSubstring("cost: 4\n"));
  CHECK_THAT(r.out, ContainsSubstring("opt: 2 "));
  CHECK_THAT(r.out, ContainsSubstring("ratio: 2\n"));

  r = Cli({"eval", "--mech", "median", "--instance", cyclic.string()});
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("Cyclic"));
  CHECK_THAT(r.err, ContainsSubstring("cyclic.json"));

  CHECK(Cli({"eval", "--instance", two.string()}).code == 2);
  CHECK(Cli({"frobnicate"}).code == 2);
  CHECK(Cli({"eval", "--mech", "pb:[rd]:[1]", "--instance", two.string()}).code == 2);
  CHECK(Cli({"--help"}).code == 0);

  CHECK(Cli({"opt", "--instance", two.string()}).code == 0);
  CHECK(Cli({"sp-check", "--mech", "half-avg-rd", "--instance", two.string()}).code == 0);
  CHECK(Cli({"boomerang-check", "--mech", "median", "--instance", two.string()}).code == 0);
  CHECK(Cli({"boomerang-check", "--mech", "rd", "--instance", two.string()}).code == 2);
  CHECK(Cli({"ratio", "--mech", "rd", "--instance", two.string()}).code == 0);

  const auto wide = dir.Write("wide.json", R"({"network": {"nodes": 3,
      "edges": [[0, 1, 2], [1, 2, 2]]}, "locations": [{"node": 1}, {"node": 2}]})");
  r = Cli({"sp-check", "--mech", "opt", "--instance", wide.string()});
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("FAIL"));

  const auto csv_path = (dir.path() / "s.csv").string();
  r = Cli({"search", "--mech", "median", "--budget", "30", "--seed", "7", "--nodes", "2,8",
           "--out", csv_path, "--plot"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("bound: 2 PASS"));
  CHECK(csv::ReadFile(csv_path).size() == 30);
  r = Cli({"report", csv_path});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("0 flagged"));

  CHECK(Cli({"lemma-check", "--kind", "all", "--budget", "10"}).code == 0);
  CHECK(Cli({"lemma-check", "--kind", "immigrants", "--mech", "opt", "--abc", "0,2,4", "--n",
             "2"}).code == 1);
  r = Cli({"witness", "--kind", "deterministic_2", "--n", "4", "--mech", "median"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("median ratio: 2\n"));
  CHECK(Cli({"witness", "--n", "3"}).code == 2);

  const auto gen_path = (dir.path() / "g.jsonl").string();
  CHECK(Cli({"generate", "--budget", "3", "--topology", "star", "--out", gen_path}).code == 0);
  std::ifstream in(gen_path);
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    CHECK_NOTHROW(io::InstanceFromJson(io::Json::parse(line), ".", "g"));
    ++lines;
  }
  CHECK(lines == 3);

  const auto recipe = dir.Write("recipe.json", R"({"mechanisms": ["rd", "lrm"],
      "objective": "minimax", "generator": {"topology": "line", "seed": 3}, "budget": 10})");
  const auto out_path = (dir.path() / "run.csv").string();
  CHECK(Cli({"run", "--recipe", recipe.string(), "--out", out_path}).code == 0);
  CHECK(csv::ReadFile(out_path).size() == 20);
}

}  // namespace
}  // namespace treefl
