#include "ftamp/experiments.hpp"
#include "ftamp/plan_io.hpp"
#include "ftamp/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ftamp;
namespace fs = std::filesystem;

namespace {

const std::string kDir = FTAMP_SCENARIO_DIR;
const std::string kCli = FTAMP_CLI;

std::string where(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.where();
  }
  return "<accepted>";
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ftamp-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Scenario, ShippedFilesLoad) {
  for (const char* f : {"/bottle_a1.json", "/bottle_a2.json", "/nut.json"}) {
    EXPECT_NO_THROW(load_scenario(kDir + f)) << f;
  }
  const Scenario a1 = load_scenario(kDir + "/bottle_a1.json");
  EXPECT_EQ(a1.domain, "bottle");
  EXPECT_EQ(a1.ablation.size(), 4u);
  EXPECT_EQ(a1.bottle.arms.size(), 2u);
}

TEST(Scenario, MinimalDocumentUsesDefaults) {
  const Scenario s = parse_scenario(R"({"domain": "nut"})");
  EXPECT_EQ(s.domain, "nut");
  EXPECT_EQ(s.nut_op.t_z, 0.5);
  EXPECT_EQ(s.budget.time_limit, 60.0);
}

TEST(Scenario, ErrorsCarryJsonPaths) {
  EXPECT_EQ(where(R"({"domain": "bottle", "scene": {"bottle": {"mass": -1}}})"), "scene.bottle.mass");
  EXPECT_EQ(where(R"({"domain": "bottle", "scene": {"bottel": {}}})"), "scene.bottel");
  EXPECT_EQ(where(R"({"domain": "bottle", "operation": {"f_z": "a lot"}})"), "operation.f_z");
  EXPECT_EQ(where(R"({"domain": "robot"})"), "domain");
  EXPECT_EQ(where(R"({"scene": {}})"), "domain");
  EXPECT_EQ(where(R"({"domain": "bottle", "disable": ["gt", "xx"]})"), "disable[1]");
  EXPECT_EQ(where(R"({"domain": "bottle", "perturbation": {"sample_count": 0}})"), "perturbation.sample_count");
  EXPECT_EQ(where(R"({"domain": "bottle", "scene": {"bottle": {"surface": "mat"}, "mat": null}})"),
            "scene.bottle.surface");
  EXPECT_EQ(where("{\"domain\": \"bottle\""), "");
}

TEST(Scenario, AblationPatchesScene) {
  const Scenario a2 = load_scenario(kDir + "/bottle_a2.json");
  const auto row = std::find_if(a2.ablation.begin(), a2.ablation.end(),
                                [](const AblationRow& r) { return r.label == "FT+SF(M)"; });
  ASSERT_NE(row, a2.ablation.end());
  const Scenario patched = patched_scenario(a2, row->scene_patch);
  EXPECT_EQ(patched.bottle.hand.fingertip_mu, 1.0);
  EXPECT_NE(a2.bottle.hand.fingertip_mu, 1.0);
}

TEST(Sweeps, Parsing) {
  const Sweep s = parse_sweep("force:0:60:7");
  EXPECT_EQ(s.variable, "force");
  EXPECT_EQ(s.values(), (std::vector<double>{0, 10, 20, 30, 40, 50, 60}));
  EXPECT_THROW(parse_sweep("force:0:60"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("force:9:1:3"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("force:0:x:3"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("force:0:1:0"), std::invalid_argument);
}

TEST(PlanFile, RoundTrip) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const SolveOutcome o = run_solve(s, {"sft"}, s.seed);
  ASSERT_TRUE(o.solved);
  const planner::Json doc = plan_to_json(*o.result.plan, o.domain.problem, o.strategy);
  EXPECT_EQ(doc.at("format"), kPlanFormat);
  EXPECT_EQ(doc.at("strategy"), "GT+RF");
  EXPECT_EQ(doc.at("steps").size(), 6u);

  // Rebuild against a freshly constructed problem, as the validate command does.
  const DomainProblem fresh = build_domain(s, {"sft"});
  const planner::Plan back = plan_from_json(planner::Json::parse(doc.dump()), fresh.problem);
  ASSERT_EQ(back.steps.size(), o.result.plan->steps.size());
  for (std::size_t i = 0; i < back.steps.size(); ++i) {
    EXPECT_EQ(back.steps[i].text(back.values), o.result.plan->steps[i].text(o.result.plan->values));
  }
  const auto report = planner::validate_plan(back, fresh.problem, s.budget.length_penalty);
  EXPECT_TRUE(report.valid);
  EXPECT_NEAR(report.total_cost, o.cost, 1e-9);
  EXPECT_EQ(plan_to_json(back, fresh.problem, o.strategy).dump(), doc.dump());
}

TEST(PlanFile, RejectsMalformedDocuments) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const DomainProblem d = build_domain(s);
  EXPECT_THROW(plan_from_json(planner::Json::object(), d.problem), std::invalid_argument);
  planner::Json doc = {{"format", kPlanFormat}, {"steps", {{{"schema", "fly"}, {"args", planner::Json::array()}}}},
                       {"values", planner::Json::array()}};
  EXPECT_THROW(plan_from_json(doc, d.problem), std::invalid_argument);
}

TEST(AblationCsv, DeterministicBytes) {
  const Scenario s = load_scenario(kDir + "/bottle_a2.json");
  std::ostringstream a, b;
  write_ablation_csv(a, run_ablation(s, s.seed), false);
  write_ablation_csv(b, run_ablation(s, s.seed), false);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "strategy,steps,solved,cost");
}

TEST(AblationCsv, UnsolvedRowKeepsLabel) {
  std::ostringstream out;
  AblationResult r;
  r.label = "GT+VF";
  write_ablation_csv(out, {r}, false);
  EXPECT_EQ(out.str(), "strategy,steps,solved,cost\nGT+VF,0,0,inf\n");
}

TEST(Cli, SolveThenValidate) {
  const fs::path dir = scratch("solve");
  ASSERT_EQ(run("solve " + kDir + "/bottle_a1.json --disable sft,rf --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run("solve " + kDir + "/bottle_a1.json --disable sft,rf --out " + (dir / "b").string()), 0);
  const std::string plan = read(dir / "a" / "plan.json");
  EXPECT_FALSE(plan.empty());
  EXPECT_EQ(plan, read(dir / "b" / "plan.json"));
  const auto doc = planner::Json::parse(plan);
  EXPECT_EQ(doc.at("strategy"), "GT+SF(M)");
  EXPECT_EQ(doc.at("steps").size(), 8u);
  EXPECT_EQ(run("validate " + kDir + "/bottle_a1.json " + (dir / "a" / "plan.json").string()), 0);
}

TEST(Cli, TamperedPlanIsInvalid) {
  const fs::path dir = scratch("tamper");
  ASSERT_EQ(run("solve " + kDir + "/bottle_a1.json --out " + dir.string()), 0);
  auto doc = planner::Json::parse(read(dir / "plan.json"));
  for (auto& v : doc.at("values")) {
    if (v.at("type") == "grasp" && v.at("payload").contains("mu")) v["payload"]["mu"] = 0.01;
  }
  std::ofstream(dir / "bad.json") << doc.dump(2);
  EXPECT_EQ(run("validate " + kDir + "/bottle_a1.json " + (dir / "bad.json").string()), 2);
}

TEST(Cli, ConfigErrorsExitOne) {
  const fs::path dir = scratch("errors");
  std::ofstream(dir / "bad.json") << R"({"domain": "bottle", "scene": {"bottle": {"mass": -1}}})";
  EXPECT_EQ(run("solve " + (dir / "bad.json").string() + " --out " + (dir / "out").string()), 1);
  EXPECT_FALSE(fs::exists(dir / "out" / "plan.json"));
  EXPECT_EQ(run("solve " + kDir + "/bottle_a1.json --disable nope --out " + (dir / "out").string()), 1);
  EXPECT_EQ(run("robustness " + kDir + "/bottle_a1.json --sweep mass:0:1:2 --out " + (dir / "out").string()), 1);
}

TEST(Cli, UnsolvableExitsTwo) {
  const fs::path dir = scratch("unsolvable");
  EXPECT_EQ(run("solve " + kDir + "/bottle_a1.json --disable sft,rf,sfm,vf --out " + dir.string()), 2);
  EXPECT_FALSE(fs::exists(dir / "plan.json"));
}

TEST(Cli, RobustnessWritesCsv) {
  const fs::path dir = scratch("robust");
  ASSERT_EQ(run("robustness " + kDir + "/bottle_a1.json --sweep force:0:20:3 --samples 100 --out " + dir.string()),
            0);
  const std::string twist = read(dir / "twist_costs.csv");
  EXPECT_EQ(twist.substr(0, twist.find('\n')), "sweep_value,method,probability,cost");
  EXPECT_EQ(std::count(twist.begin(), twist.end(), '\n'), 1 + 3 * 4);
  EXPECT_TRUE(fs::exists(dir / "fixture_costs.csv"));
}
