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

#include "treefl/harness/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "treefl/error.hpp"
#include "treefl/harness/csv.hpp"
#include "treefl/harness/io.hpp"
#include "treefl/harness/recipe.hpp"
#include "treefl/harness/report.hpp"
#include "treefl/mechanisms.hpp"
#include "treefl/verify.hpp"

namespace treefl {
namespace {

// Shortest text that reads back to the same double.
std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Output sink: --out file when given, `fallback` otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::kParse, path + ": cannot write file");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct Options {
  std::string mech;
  std::string instance;
  std::string objective = "minisos";
  std::string opt_objective = "all";
  std::size_t budget = 0;
  std::uint64_t seed = 1;
  double tolerance = kDefaultSpTolerance;
  double grid = kDefaultGridFraction;
  std::string out;
  bool plot = false;
  std::string topology = "random_tree";
  std::string placement = "anywhere";
  std::vector<int> nodes{2, 20};
  std::vector<double> lengths{0.5, 2.0};
  std::vector<int> agents{1, 12};
  int hill = 200;
  std::string kind;
  int n = 4;
  int j = 0;
  std::vector<double> abc;
  std::string recipe;
  std::vector<std::string> inputs;
};

GeneratorConfig ConfigFrom(const Options& o) {
  GeneratorConfig c;
  c.topology = ParseTopology(o.topology);
  c.placement = ParsePlacement(o.placement);
  if (o.nodes.size() != 2 || o.lengths.size() != 2 || o.agents.size() != 2) {
    throw Error(ErrorCode::kBadConfig, "ranges take two values: min,max");
  }
  c.min_nodes = o.nodes[0];
  c.max_nodes = o.nodes[1];
  c.min_length = o.lengths[0];
  c.max_length = o.lengths[1];
  c.min_agents = o.agents[0];
  c.max_agents = o.agents[1];
  c.seed = o.seed;
  c.Check();
  return c;
}

// Prints line coordinates of a distribution's support when the network is a path.
void PrintLineView(std::ostream& out, const TreeNetwork& net, const LocationDistribution& d) {
  if (!net.IsLine()) return;
  const LineView line(net);
  out << "line_coordinates: {";
  bool first = true;
  for (const auto& atom : d.support()) {
    out << (first ? "" : ", ") << Num(line.Coordinate(atom.point)) << ": "
        << Num(atom.probability);
    first = false;
  }
  out << "}\n";
}

int Eval(const Options& o, std::ostream& out) {
  const Instance inst = io::LoadInstance(o.instance);
  const MechanismSpec spec = MechanismSpec::Parse(o.mech);
  const Objective obj = ParseObjective(o.objective);
  const auto dist = spec.Evaluate(inst.network, inst.profile);
  out << "mechanism: " << spec.Encode() << "\n";
  out << "distribution: " << dist.ToString() << "\n";
  PrintLineView(out, inst.network, dist);
  const double cost = ExpectedSocialCost(inst.network, dist, inst.profile, obj);
  const auto opt = Optimize(inst.network, inst.profile, obj);
  out << "objective: " << ObjectiveName(obj) << "\n";
  out << "cost: " << Num(cost) << "\n";
  out << "opt: " << Num(opt.cost) << " at " << opt.point.ToString() << "\n";
  if (opt.cost > kZeroCost) {
    out << "ratio: " << Num(cost / opt.cost) << "\n";
  } else {
    out << "ratio: " << (cost > kZeroCost ? "undefined (zero optimum)" : "exact") << "\n";
  }
  return kExitOk;
}

int Opt(const Options& o, std::ostream& out) {
  const Instance inst = io::LoadInstance(o.instance);
  if (inst.profile.empty()) throw Error(ErrorCode::kEmptyInput, o.instance + ": no locations");
  std::vector<Objective> objectives{Objective::kMiniSOS, Objective::kMinisum, Objective::kMinimax};
  if (o.opt_objective != "all") objectives = {ParseObjective(o.opt_objective)};
  for (Objective obj : objectives) {
    const auto opt = Optimize(inst.network, inst.profile, obj);
    out << ObjectiveName(obj) << ": " << opt.point.ToString() << " cost " << Num(opt.cost);
    if (inst.network.IsLine()) {
      out << " (line coordinate " << Num(LineView(inst.network).Coordinate(opt.point)) << ")";
    }
    out << "\n";
  }
  return kExitOk;
}

int SpCheckCmd(const Options& o, std::ostream& out) {
  const Instance inst = io::LoadInstance(o.instance);
  const MechanismSpec spec = MechanismSpec::Parse(o.mech);
  const auto dev = DeviationSet::Standard(inst.network, inst.profile, o.grid);
  const auto rep = SpCheck(AsMechanism(spec), inst.network, inst.profile, dev, o.tolerance);
  out << "mechanism: " << spec.Encode() << "\n";
  out << "tested: " << rep.tested_count << "\n";
  out << "max_regret: " << Num(rep.max_regret) << "\n";
  if (rep.worst) {
    out << "worst: agent " << rep.worst->agent + 1 << " misreporting "
        << rep.worst->misreport.ToString() << " (true cost " << Num(rep.worst->true_cost)
        << ", deviated cost " << Num(rep.worst->deviated_cost) << ")\n";
  }
  out << (rep.passed ? "PASS" : "FAIL") << "\n";
  return rep.passed ? kExitOk : kExitCheckFailed;
}

int BoomerangCmd(const Options& o, std::ostream& out) {
  const Instance inst = io::LoadInstance(o.instance);
  const MechanismSpec spec = MechanismSpec::Parse(o.mech);
  const auto dev = DeviationSet::Standard(inst.network, inst.profile, o.grid);
  const auto rep = BoomerangCheck(AsMechanism(spec), inst.network, inst.profile, dev, o.tolerance);
  out << "mechanism: " << spec.Encode() << "\n";
  out << "tested: " << rep.tested_count << "\n";
  out << "max_violation: " << Num(rep.max_violation) << "\n";
  if (rep.worst) {
    out << "worst: agent " << rep.worst->agent + 1 << " misreporting "
        << rep.worst->misreport.ToString() << " (cost increase " << Num(rep.worst->cost_increase)
        << ", movement " << Num(rep.worst->movement) << ")\n";
  }
  out << (rep.passed ? "PASS" : "FAIL") << "\n";
  return rep.passed ? kExitOk : kExitCheckFailed;
}

int RatioCmd(const Options& o, std::ostream& out) {
  const Instance inst = io::LoadInstance(o.instance);
  const MechanismSpec spec = MechanismSpec::Parse(o.mech);
  const Objective obj = ParseObjective(o.objective);
  RatioReport r;
  try {
    r = ApproxRatio(AsMechanism(spec), inst.network, inst.profile, obj);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateOptimum) throw;
    out << e.what() << "\n";
    return kExitCheckFailed;
  }
  out << "digest: " << r.digest << "\n";
  out << "mechanism_cost: " << Num(r.mechanism_cost) << "\n";
  out << "optimal_cost: " << Num(r.optimal_cost) << "\n";
  out << "ratio: " << Num(r.ratio) << (r.exact ? " (exact: zero optimum)" : "") << "\n";
  const auto bound = report::KnownBound(spec.Encode(), ObjectiveName(obj));
  if (bound && r.ratio > *bound + report::kBoundTolerance) {
    out << "ratio exceeds the known bound " << Num(*bound) << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int SearchCmd(const Options& o, std::ostream& out) {
  const MechanismSpec spec = MechanismSpec::Parse(o.mech);
  const Objective obj = ParseObjective(o.objective);
  const GeneratorConfig config = ConfigFrom(o);
  const std::size_t budget = o.budget ? o.budget : 2000;
  const auto result = RatioSearch(AsMechanism(spec), obj, config, budget, o.seed, o.hill);
  if (!o.out.empty()) {
    Sink sink(o.out, out);
    csv::Write(sink.get(), SearchRows(result, spec.Encode(), obj, config, o.seed), o.plot);
  }
  out << "mechanism: " << spec.Encode() << "\n";
  out << "objective: " << ObjectiveName(obj) << "\n";
  out << "evaluated: " << result.evaluated << " (zero optimum: " << result.degenerate << ")\n";
  if (!result.instance) {
    out << "no instance with a positive optimum\n";
    return kExitOk;
  }
  out << "worst_before_climb: " << Num(result.worst_before_climb) << "\n";
  out << "worst_ratio: " << Num(result.worst.ratio) << "\n";
  out << "digest: " << result.worst.digest << "\n";
  out << "instance: " << io::InstanceToJson(*result.instance).dump() << "\n";
  const auto bound = report::KnownBound(spec.Encode(), ObjectiveName(obj));
  if (bound) {
    const bool ok = result.worst.ratio <= *bound + report::kBoundTolerance;
    out << "bound: " << Num(*bound) << " " << (ok ? "PASS" : "FAIL") << "\n";
    if (!ok) return kExitCheckFailed;
  }
  return kExitOk;
}

int LemmaCmd(const Options& o, std::ostream& out) {
  if (o.kind == "immigrants") {
    if (o.abc.size() != 3) throw Error(ErrorCode::kBadParams, "--abc takes three values a,b,c");
    const MechanismSpec spec = MechanismSpec::Parse(o.mech);
    const auto rep = ImmigrantsCheck(AsMechanism(spec), o.abc[0], o.abc[1], o.abc[2], o.n,
                                     o.tolerance);
    for (const auto& row : rep.rows) {
      out << "m=" << row.m << " E|c-y0|=" << Num(row.c_cost_at_x0)
          << " E|c-ym|=" << Num(row.c_cost_at_xm) << " E|b-ym|=" << Num(row.b_cost_at_xm)
          << " E|b-y0|=" << Num(row.b_cost_at_x0) << (row.holds ? "" : "  VIOLATED") << "\n";
    }
    out << (rep.holds ? "PASS" : "FAIL") << "\n";
    return rep.holds ? kExitOk : kExitCheckFailed;
  }
  std::vector<LemmaKind> kinds{LemmaKind::kCostDifference, LemmaKind::kFlattening,
                               LemmaKind::kWavgMovement};
  if (!o.kind.empty() && o.kind != "all") kinds = {ParseLemmaKind(o.kind)};
  const std::size_t budget = o.budget ? o.budget : 200;
  const double tol = o.tolerance == kDefaultSpTolerance ? kCostTolerance : o.tolerance;
  Rng rng(o.seed);
  bool all = true;
  for (LemmaKind kind : kinds) {
    std::size_t held = 0;
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < budget; ++k) {
      const auto rep = LemmaIdentityCheck(kind, rng, tol);
      held += rep.holds ? 1 : 0;
      const double gap =
          kind == LemmaKind::kWavgMovement ? rep.lhs - rep.rhs : std::abs(rep.lhs - rep.rhs);
      worst_gap = std::max(worst_gap, gap);
    }
    out << LemmaName(kind) << ": " << held << "/" << budget << " hold, worst gap "
        << Num(worst_gap) << "\n";
    all = all && held == budget;
  }
  out << (all ? "PASS" : "FAIL") << "\n";
  return all ? kExitOk : kExitCheckFailed;
}

int WitnessCmd(const Options& o, std::ostream& out) {
  const WitnessKind kind = ParseWitnessKind(o.kind.empty() ? "deterministic_2" : o.kind);
  const Witness w = LowerBoundWitness(kind, o.n, o.j);
  {
    Sink sink(o.out, out);
    sink.get() << io::InstanceToJson(w.instance).dump(2) << "\n";
  }
  out << "witness: " << WitnessName(kind) << ", " << w.description << "\n";
  if (!o.mech.empty()) {
    const MechanismSpec spec = MechanismSpec::Parse(o.mech);
    const auto r = ApproxRatio(AsMechanism(spec), w.instance.network, w.instance.profile,
                               ParseObjective(o.objective));
    out << spec.Encode() << " ratio: " << Num(r.ratio) << "\n";
  }
  return kExitOk;
}

int GenerateCmd(const Options& o, std::ostream& out) {
  InstanceGenerator generator(ConfigFrom(o));
  Sink sink(o.out, out);
  const std::size_t budget = o.budget ? o.budget : 1;
  for (std::size_t k = 0; k < budget; ++k) {
    sink.get() << io::InstanceToJson(generator.Next()).dump() << "\n";
  }
  return kExitOk;
}

int RunCmd(const Options& o, std::ostream& out) {
  ExperimentRecipe recipe = LoadRecipe(o.recipe);
  if (!o.out.empty()) recipe.output = o.out;
  const auto rows = RunRecipe(recipe);
  Sink sink(recipe.output, out);
  csv::Write(sink.get(), rows, o.plot);
  return kExitOk;
}

int ReportCmd(const Options& o, std::ostream& out) {
  std::vector<csv::ResultRow> rows;
  for (const auto& path : o.inputs) {
    auto more = csv::ReadFile(path);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  const auto summary = report::Summarize(rows);
  out << report::FormatTable(summary);
  if (!o.out.empty()) {
    Sink sink(o.out, out);
    sink.get() << report::FormatCsv(summary);
  }
  return report::FlagCount(summary) == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strategyproof facility location on tree networks", "treefl"};
  app.require_subcommand(1);
  Options o;

  auto mech = [&](CLI::App* c, bool required = true) {
    auto* opt = c->add_option("--mech", o.mech, "mechanism spec, e.g. rdgm:2/3");
    if (required) opt->required();
  };
  auto instance = [&](CLI::App* c) {
    c->add_option("--instance", o.instance, "instance or tree JSON file")->required();
  };
  auto objective = [&](CLI::App* c) {
    c->add_option("--objective", o.objective, "minisos | minisum | minimax");
  };
  auto generator = [&](CLI::App* c) {
    c->add_option("--topology", o.topology, "line | star | caterpillar | random_tree");
    c->add_option("--placement", o.placement, "nodes_only | anywhere");
    c->add_option("--nodes", o.nodes, "node count range min,max")->delimiter(',')->expected(2);
    c->add_option("--lengths", o.lengths, "edge length range min,max")->delimiter(',')->expected(2);
    c->add_option("--agents", o.agents, "agent count range min,max")->delimiter(',')->expected(2);
    c->add_option("--seed", o.seed, "generator seed");
  };

  std::function<int(const Options&, std::ostream&)> action;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&, std::ostream&)) {
    CLI::App* c = app.add_subcommand(name, help);
    c->callback([&action, fn] { action = fn; });
    return c;
  };

  auto* eval = sub("eval", "evaluate a mechanism on an instance", Eval);
  mech(eval);
  instance(eval);
  objective(eval);

  auto* opt = sub("opt", "optimal location per objective", Opt);
  instance(opt);
  opt->add_option("--objective", o.opt_objective, "minisos | minisum | minimax | all");

  auto* sp = sub("sp-check", "test strategyproofness on an instance", SpCheckCmd);
  mech(sp);
  instance(sp);
  sp->add_option("--tolerance", o.tolerance, "regret tolerance");
  sp->add_option("--grid", o.grid, "misreport grid spacing as a fraction of edge length");

  auto* boom = sub("boomerang-check", "test the boomerang identity on an instance", BoomerangCmd);
  mech(boom);
  instance(boom);
  boom->add_option("--tolerance", o.tolerance, "violation tolerance");
  boom->add_option("--grid", o.grid, "misreport grid spacing as a fraction of edge length");

  auto* ratio = sub("ratio", "approximation ratio on an instance", RatioCmd);
  mech(ratio);
  instance(ratio);
  objective(ratio);

  auto* search = sub("search", "adversarial ratio search over generated instances", SearchCmd);
  mech(search);
  objective(search);
  generator(search);
  search->add_option("--budget", o.budget, "number of generated instances (default 2000)");
  search->add_option("--hill", o.hill, "hill-climbing iterations");
  search->add_option("--out", o.out, "CSV of per-instance results");
  search->add_flag("--plot", o.plot, "add an index column for ratio-vs-instance plots");

  auto* lemma = sub("lemma-check", "numeric checks of the structural lemmas", LemmaCmd);
  lemma->add_option("--kind", o.kind,
                    "cost_difference | flattening | wavg_movement | all | immigrants");
  lemma->add_option("--budget", o.budget, "generated instances per kind (default 200)");
  lemma->add_option("--seed", o.seed, "generator seed");
  lemma->add_option("--tolerance", o.tolerance, "equality tolerance");
  mech(lemma, false);
  lemma->add_option("--abc", o.abc, "immigrants line points a,b,c")->delimiter(',')->expected(3);
  lemma->add_option("--n", o.n, "immigrants agent count");

  auto* witness = sub("witness", "emit a lower-bound witness instance", WitnessCmd);
  witness->add_option("--kind", o.kind, "deterministic_2 | randomized_15_family");
  witness->add_option("--n", o.n, "agent count (even)");
  witness->add_option("--j", o.j, "family index");
  witness->add_option("--out", o.out, "write the instance here instead of stdout");
  mech(witness, false);
  objective(witness);

  auto* gen = sub("generate", "emit generated instances, one JSON document per line", GenerateCmd);
  generator(gen);
  gen->add_option("--budget", o.budget, "number of instances (default 1)");
  gen->add_option("--out", o.out, "output file");

  auto* run = sub("run", "run an experiment recipe and write result CSV", RunCmd);
  run->add_option("--recipe", o.recipe, "recipe JSON file")->required();
  run->add_option("--out", o.out, "overrides the recipe output path");
  run->add_flag("--plot", o.plot, "add an index column");

  auto* rep = sub("report", "aggregate result CSVs into a bounds table", ReportCmd);
  rep->add_option("inputs", o.inputs, "result CSV files")->required();
  rep->add_option("--out", o.out, "also write the table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action(o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace treefl
