#include "ftamp/experiments.hpp"
#include "ftamp/plan_io.hpp"
#include "ftamp/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ftamp;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPlanFailure = 2;

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

std::set<std::string> split_codes(const std::string& text, const Scenario& s) {
  std::set<std::string> out;
  std::stringstream in(text);
  for (std::string code; std::getline(in, code, ',');) {
    if (code.empty()) continue;
    if (!disable_codes(s).count(code)) throw ScenarioError("--disable", "unknown code '" + code + "' for the " + s.domain + " domain");
    out.insert(code);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << body;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

int cmd_solve(const Common& c, const std::string& disable_text) {
  const Scenario s = load_scenario(c.scenario);
  const auto disable = split_codes(disable_text, s);
  const SolveOutcome o = run_solve(s, disable, c.seed.value_or(s.seed));
  if (!o.solved) {
    std::cerr << "no plan found after " << o.result.levels << " level(s)\n" << o.result.diagnostic;
    return kPlanFailure;
  }
  std::cout << "strategy: " << o.strategy << "\nsteps: " << o.steps << "\ntotal_cost: " << fmt(o.cost) << '\n'
            << plan_listing(*o.result.plan);
  auto doc = plan_to_json(*o.result.plan, o.domain.problem, o.strategy);
  doc["disable"] = std::vector<std::string>(disable.begin(), disable.end());
  const fs::path path = fs::path(c.out) / "plan.json";
  write_file(path, doc.dump(2) + "\n");
  std::cout << "plan written to " << path.string() << '\n';
  return kOk;
}

int cmd_ablate(const Common& c) {
  const Scenario s = load_scenario(c.scenario);
  if (s.ablation.empty()) throw ScenarioError("ablation", "scenario defines no ablation rows");
  const auto rows = run_ablation(s, c.seed.value_or(s.seed));
  std::ostringstream csv;
  write_ablation_csv(csv, rows);
  std::cout << csv.str();
  write_file(fs::path(c.out) / "ablation.csv", csv.str());
  return kOk;
}

int cmd_robustness(const Common& c, const std::string& sweep_text, std::optional<int> samples, int replicates) {
  Scenario s = load_scenario(c.scenario);
  if (c.seed) s.perturbation.rng_seed = *c.seed;
  const Sweep sweep = sweep_text.empty() ? default_sweep(s) : parse_sweep(sweep_text);
  const int n = samples.value_or(s.perturbation.sample_count);
  if (s.domain == "bottle") {
    const BottleSweep result = bottle_sweep(s, sweep, n);
    std::ostringstream twist, fixture;
    write_cost_csv(twist, result.twist);
    write_cost_csv(fixture, result.fixture);
    std::cout << "# twist\n" << twist.str() << "# fixture\n" << fixture.str();
    write_file(fs::path(c.out) / "twist_costs.csv", twist.str());
    write_file(fs::path(c.out) / "fixture_costs.csv", fixture.str());
  } else {
    std::ostringstream csv;
    write_cost_csv(csv, nut_sweep(s, sweep, n, replicates), true);
    std::cout << csv.str();
    write_file(fs::path(c.out) / "weight_costs.csv", csv.str());
  }
  return kOk;
}

int cmd_validate(const Common& c, const std::string& plan_path, const std::string& disable_text) {
  const Scenario s = load_scenario(c.scenario);
  std::ifstream in(plan_path);
  if (!in) throw ScenarioError("", "cannot open plan file '" + plan_path + "'");
  planner::Json doc;
  try {
    doc = planner::Json::parse(in);
  } catch (const planner::Json::parse_error& e) {
    throw ScenarioError("", std::string("plan file: ") + e.what());
  }
  std::string codes = disable_text;
  if (codes.empty() && doc.contains("disable") && doc.at("disable").is_array()) {
    for (const auto& code : doc.at("disable")) codes += (code.is_string() ? code.get<std::string>() : "?") + ",";
  }
  const std::set<std::string> disable = split_codes(codes, s);
  const DomainProblem d = build_domain(s, disable);
  const planner::Plan plan = plan_from_json(doc, d.problem);
  const auto report = planner::validate_plan(plan, d.problem, s.budget.length_penalty);
  std::cout << (report.valid ? "valid" : "INVALID") << "  steps=" << plan.steps.size()
            << "  recomputed_cost=" << fmt(report.total_cost) << '\n';
  for (const auto& v : report.violations) std::cout << "  " << v << '\n';
  return report.valid ? kOk : kPlanFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forceful task and motion planning: solve, ablate, robustness sweeps, plan validation"};
  app.require_subcommand(1);

  Common common;
  std::string disable;
  std::string sweep;
  std::string plan_path;
  std::optional<int> samples;
  int replicates = 20;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", common.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Seed (planner seed; perturbation seed for robustness)");
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Plan for a scenario and write plan.json");
  add_common(solve);
  solve->add_option("--disable", disable, "Comma-separated strategy codes to invalidate");

  auto* ablate = app.add_subcommand("ablate", "Solve every ablation row and write ablation.csv");
  add_common(ablate);

  auto* robust = app.add_subcommand("robustness", "Cost sweeps over downward force (bottle) or weight mass (nut)");
  add_common(robust);
  robust->add_option("--sweep", sweep, "<variable>:<min>:<max>:<steps>");
  robust->add_option("--samples", samples, "Monte Carlo samples per point")->check(CLI::PositiveNumber);
  robust->add_option("--replicates", replicates, "Seeded replicates per mass (nut)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Re-check a plan file against a scenario");
  add_common(validate);
  validate->add_option("plan", plan_path, "Plan file")->required();
  validate->add_option("--disable", disable, "Codes used when solving (default: those recorded in the plan)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(common, disable);
    if (*ablate) return cmd_ablate(common);
    if (*robust) return cmd_robustness(common, sweep, samples, replicates);
    return cmd_validate(common, plan_path, disable);
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kConfigError;
}
