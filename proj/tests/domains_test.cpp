#include "ftamp/domains.hpp"
#include "ftamp/experiments.hpp"
#include "ftamp/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

using namespace ftamp;

namespace {

const std::string kDir = FTAMP_SCENARIO_DIR;

std::vector<std::string> step_names(const planner::Plan& plan) {
  std::vector<std::string> out;
  for (const auto& s : plan.steps) out.push_back(s.name);
  return out;
}

bool is_twist(const std::string& name) { return name.find("twist") != std::string::npos; }

SolveOutcome solved(const Scenario& s, const std::set<std::string>& disable) {
  SolveOutcome o = run_solve(s, disable, s.seed);
  EXPECT_TRUE(o.solved) << o.result.diagnostic;
  return o;
}

}  // namespace

TEST(BottleDomain, DefaultSceneUsesTableFriction) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const SolveOutcome o = solved(s, {});
  ASSERT_TRUE(o.solved);
  EXPECT_EQ(o.strategy, "GT+SF(T)");
  EXPECT_EQ(step_names(*o.result.plan), (std::vector<std::string>{"move", "grasp-twist", "move", "pick"}));
}

TEST(BottleDomain, SecondArmFixturesWhenTableIsSlippery) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const SolveOutcome o = solved(s, {"sft"});
  ASSERT_TRUE(o.solved);
  EXPECT_EQ(o.strategy, "GT+RF");
  // Equal-cost interleavings are ordered by action name, so both arm moves come first.
  EXPECT_EQ(step_names(*o.result.plan),
            (std::vector<std::string>{"move", "move", "pick", "grasp-twist", "move", "pick"}));
}

TEST(BottleDomain, MatOrViseWithoutTableAndArm) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const SolveOutcome mat = solved(s, {"sft", "rf"});
  EXPECT_EQ(mat.strategy, "GT+SF(M)");
  EXPECT_EQ(mat.steps, 8u);
  const SolveOutcome vise = solved(s, {"sft", "rf", "sfm"});
  EXPECT_EQ(vise.strategy, "GT+VF");
  ASSERT_TRUE(vise.solved);
  EXPECT_EQ(step_names(*vise.result.plan), (std::vector<std::string>{"move", "pick", "move", "place", "engage-vise",
                                                                      "move", "grasp-twist", "move", "pick"}));
}

TEST(BottleDomain, NoFixtureNoPlan) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const SolveOutcome o = run_solve(s, {"sft", "rf", "sfm", "vf"}, s.seed);
  EXPECT_FALSE(o.solved);
  EXPECT_FALSE(o.result.diagnostic.empty());
}

TEST(BottleDomain, EveryPlanTwistsOnceAndValidates) {
  for (const char* file : {"/bottle_a1.json", "/bottle_a2.json"}) {
    const Scenario s = load_scenario(kDir + file);
    for (const auto& row : s.ablation) {
      const Scenario variant = patched_scenario(s, row.scene_patch);
      const SolveOutcome o = run_solve(variant, row.disable, s.seed);
      ASSERT_TRUE(o.solved) << row.label;
      const auto names = step_names(*o.result.plan);
      EXPECT_EQ(std::count_if(names.begin(), names.end(), is_twist), 1) << row.label;
      const auto report = planner::validate_plan(*o.result.plan, o.domain.problem, s.budget.length_penalty);
      EXPECT_TRUE(report.valid) << row.label;
      EXPECT_NEAR(report.total_cost, o.cost, 1e-9) << row.label;
    }
  }
}

TEST(BottleDomain, UnstableGraspIsFlagged) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const SolveOutcome o = solved(s, {});
  ASSERT_TRUE(o.solved);
  planner::Plan plan = *o.result.plan;
  const auto twist = std::find_if(plan.steps.begin(), plan.steps.end(),
                                  [](const planner::PlanStep& st) { return is_twist(st.name); });
  ASSERT_NE(twist, plan.steps.end());
  // Swap the certified grasp for one with almost no friction.
  bool swapped = false;
  for (planner::ValueId id : twist->args) {
    auto& v = plan.values[id];
    if (v.type != "grasp") continue;
    ASSERT_TRUE(v.payload.contains("mu"));
    v.payload["mu"] = 0.01;
    swapped = true;
  }
  ASSERT_TRUE(swapped);
  const auto report = planner::validate_plan(plan, o.domain.problem, s.budget.length_penalty);
  EXPECT_FALSE(report.valid);
  const std::size_t index = static_cast<std::size_t>(twist - plan.steps.begin());
  EXPECT_NE(std::find(report.failing_steps.begin(), report.failing_steps.end(), index), report.failing_steps.end());
}

TEST(BottleDomain, GraspSamplerFilter) {
  const BottleScene scene;
  TwistContact c;
  c.method = TwistMethod::GT;
  c.mu = 0.8;
  c.radius = 0.03;
  c.grip_force = 15.0;
  const auto accepted = twist_contact_stable(scene, c, 15.0, 0.2);
  EXPECT_TRUE(accepted.stable);
  EXPECT_NEAR(accepted.margin, 1.0 - 0.04 / std::pow(15 * 0.018 * 0.8, 2), 1e-9);
  c.mu = 0.3;
  const auto rejected = twist_contact_stable(scene, c, 15.0, 0.2);
  EXPECT_FALSE(rejected.stable);
  EXPECT_NEAR(1.0 - rejected.margin, 0.04 / std::pow(15 * 0.018 * 0.3, 2), 1e-9);
  EXPECT_GT(1.0 - rejected.margin, 6.0);
}

TEST(BottleDomain, MatNeverWorseThanTable) {
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const BottleSweep sweep = bottle_sweep(s, default_sweep(s), 400);
  std::map<double, std::map<std::string, double>> cost;
  for (const auto& r : sweep.fixture) cost[r.sweep_value][r.method] = r.cost;
  ASSERT_FALSE(cost.empty());
  for (const auto& [force, m] : cost) {
    EXPECT_LE(m.at("SF(M)"), m.at("SF(T)")) << force;
    EXPECT_EQ(m.at("RF"), 0.0);
    EXPECT_EQ(m.at("VF"), 0.0);
  }
}

TEST(BottleDomain, DisableCodesAreChecked) {
  EXPECT_EQ(bottle_disable_codes().size(), 8u);
  const Scenario s = load_scenario(kDir + "/bottle_a1.json");
  const BottleScene scene = apply_bottle_disables(s.bottle, {"rf", "sfm", "vf", "tt"});
  EXPECT_EQ(scene.arms.size(), 1u);
  EXPECT_FALSE(scene.mat.has_value());
  EXPECT_FALSE(scene.vise.has_value());
  EXPECT_FALSE(scene.tool.has_value());
  EXPECT_EQ(apply_bottle_disables(s.bottle, {"sft"}).table.mu, s.bottle.table_mu_disabled);
}

TEST(NutDomain, SecondArmFixturesNut) {
  const Scenario s = load_scenario(kDir + "/nut.json");
  const SolveOutcome o = solved(s, {});
  EXPECT_EQ(o.strategy, "finger+RF");
  ASSERT_TRUE(o.solved);
  EXPECT_TRUE(planner::validate_plan(*o.result.plan, o.domain.problem, s.budget.length_penalty).valid);
}

TEST(NutDomain, PicksIntermediateWeight) {
  const Scenario s = load_scenario(kDir + "/nut.json");
  const SolveOutcome o = solved(s, {"rf"});
  ASSERT_TRUE(o.solved);
  EXPECT_EQ(o.strategy, "finger+weight-medium");
  std::vector<double> masses;
  double chosen = 0.0;
  for (const auto& w : s.nut.weights) {
    masses.push_back(w.mass);
    if (w.name == "weight-medium") chosen = w.mass;
  }
  std::sort(masses.begin(), masses.end());
  ASSERT_EQ(masses.size(), 3u);
  EXPECT_GT(chosen, masses.front());
  EXPECT_LT(chosen, masses.back());
  EXPECT_TRUE(planner::validate_plan(*o.result.plan, o.domain.problem, s.budget.length_penalty).valid);
}

TEST(NutDomain, ZeroTorqueStillPlans) {
  Scenario s = load_scenario(kDir + "/nut.json");
  s.nut_op.t_z = 0.0;
  const SolveOutcome o = solved(s, {"rf"});
  ASSERT_TRUE(o.solved);
  for (const auto& step : o.result.plan->steps) {
    if (is_twist(step.name)) {
      EXPECT_EQ(step.cost, 0.0);
    }
  }
}

TEST(NutDomain, WeightTradeoffTrends) {
  const Scenario s = load_scenario(kDir + "/nut.json");
  const auto rows = nut_sweep(s, Sweep{"mass", 0.5, 5.0, 4}, 300, 5);
  std::vector<double> fixture, grasp;
  for (const auto& r : rows) (r.method == "fixture" ? fixture : grasp).push_back(r.cost);
  ASSERT_EQ(fixture.size(), 4u);
  EXPECT_GT(fixture.front(), fixture.back());
  EXPECT_LT(grasp.front(), grasp.back());
}
