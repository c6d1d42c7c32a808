// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "checks.hpp"

#include "ftamp/experiments.hpp"
#include "ftamp/plan_io.hpp"
#include "ftamp/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace ftamp;

namespace {

const std::string kDir = FTAMP_SCENARIO_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

void report(int id, const std::string& name, const Outcome& o) {
  std::printf("%s  [%d] %s%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

Outcome step_counts() {
  Outcome o;
  const std::map<std::string, std::map<std::string, std::size_t>> expected = {
      {"bottle_a1.json", {{"GT+SF(T)", 4}, {"GT+RF", 6}, {"GT+SF(M)", 8}, {"GT+VF", 9}}},
      {"bottle_a2.json", {{"GT+SF(M)", 4}, {"PT+SF(M)", 4}, {"FT+SF(M)", 4}, {"TT+SF(M)", 8}}},
  };
  std::string found;
  for (const auto& [file, rows] : expected) {
    const Scenario s = load_scenario(kDir + "/" + file);
    const auto results = run_ablation(s, s.seed);
    o.require(results.size() == rows.size(), file + " has " + std::to_string(results.size()) + " rows");
    for (const auto& r : results) {
      const auto want = rows.find(r.label);
      o.require(want != rows.end(), file + ": unexpected row " + r.label);
      o.require(r.solved, file + ": " + r.label + " unsolved");
      o.require(r.strategy == r.label, file + ": " + r.label + " solved as " + r.strategy);
      if (want != rows.end()) {
        o.require(r.steps == want->second, file + ": " + r.label + " took " + std::to_string(r.steps) + " steps");
      }
      o.require(r.wall_time < 60.0, file + ": " + r.label + " took " + num(r.wall_time) + " s");
      found += (found.empty() ? "" : " ") + r.label + "=" + std::to_string(r.steps);
    }
  }
  if (o.pass) o.detail = found;
  return o;
}

Outcome limit_surface_oracle() {
  Outcome o;
  const check::Tally t = check::limit_surface(10'000, 101);
  o.require(t.ok(), std::to_string(t.mismatches) + " of " + std::to_string(t.cases) + " disagree");
  if (o.pass) o.detail = std::to_string(t.cases) + " cases, worst margin error " + num(t.worst);
  return o;
}

Outcome cone_oracle() {
  Outcome o;
  const check::Tally cone = check::cone(2000, 202);
  const check::Tally coulomb = check::coulomb_bound(2000, 203);
  o.require(cone.ok(), std::to_string(cone.mismatches) + " cone disagreements");
  o.require(coulomb.ok(), std::to_string(coulomb.mismatches) + " accepted forces outside the friction cone");
  if (o.pass) {
    o.detail = std::to_string(cone.cases) + " cone cases, " + std::to_string(cone.accepted) + " inside (" +
               std::to_string(cone.skipped) +
               " within 1e-6 of the boundary), " + std::to_string(coulomb.cases) + " point-contact cases";
  }
  return o;
}

Outcome jacobian_check() {
  Outcome o;
  const check::Tally t = check::jacobian(500, 303);
  o.require(t.ok(), "worst finite-difference error " + num(t.worst));

  SerialArm arm;
  for (int i = 0; i < 2; ++i) {
    RevoluteJoint j;
    j.origin = i == 0 ? Transform::identity() : Transform::translate(Vec3(1, 0, 0));
    j.torque_limit = 30.0;
    arm.joints.push_back(j);
  }
  arm.tool = Transform::translate(Vec3(1, 0, 0));
  Wrench down;
  down.force = Vec3(0, -10, 0);
  const Eigen::VectorXd tau = joint_torques(arm, Eigen::Vector2d::Zero(), down);
  o.require(tau[0] == -20.0 && tau[1] == -10.0, "two-link torques (" + num(tau[0]) + ", " + num(tau[1]) + ")");
  if (o.pass) o.detail = "500 configs, worst column error " + num(t.worst) + "; two-link tau = (-20, -10)";
  return o;
}

// Three standard errors of -ln(p_hat) at n samples, by the delta method.
double cost_noise(double p, int n) {
  if (!(p > 0.0)) return 0.0;
  return 3.0 * std::sqrt((1.0 - p) / (n * p));
}

// Nonincreasing (or nondecreasing) up to Monte Carlo noise; infinite costs
// must sit at the expensive end.
bool trend(const std::vector<CostRow>& rows, bool decreasing, int n, std::string& why) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CostRow& a = decreasing ? rows[i - 1] : rows[i];
    const CostRow& b = decreasing ? rows[i] : rows[i - 1];  // b should not exceed a
    if (std::isinf(a.cost)) continue;
    if (std::isinf(b.cost) || b.cost > a.cost + cost_noise(std::min(a.probability, b.probability), n)) {
      why = rows[i].method + " at " + num(rows[i].sweep_value) + ": " + num(rows[i - 1].cost) + " -> " +
            num(rows[i].cost);
      return false;
    }
  }
  return true;
}

std::map<std::string, std::vector<CostRow>> by_method(const std::vector<CostRow>& rows) {
  std::map<std::string, std::vector<CostRow>> out;
  for (const auto& r : rows) out[r.method].push_back(r);
  return out;
}

Outcome robustness_orderings() {
  Outcome o;
  constexpr int n = 1000;
  const Scenario bottle = load_scenario(kDir + "/bottle_a1.json");
  const BottleSweep sweep = bottle_sweep(bottle, default_sweep(bottle), n);
  const auto twist = by_method(sweep.twist);
  const auto fixture = by_method(sweep.fixture);
  for (const char* m : {"GT", "FT", "PT", "TT", "RF", "VF", "SF(T)", "SF(M)"}) {
    o.require(twist.count(m) || fixture.count(m), std::string("no rows for ") + m);
  }
  if (!o.pass) return o;

  for (const auto& r : twist.at("GT")) o.require(r.cost < 0.05, "GT cost " + num(r.cost) + " at " + num(r.sweep_value));
  for (const char* m : {"FT", "PT", "TT"}) {
    std::string why;
    o.require(trend(twist.at(m), true, n, why), why);
  }
  for (const char* m : {"RF", "VF"}) {
    for (const auto& r : fixture.at(m)) o.require(r.cost == 0.0, std::string(m) + " cost " + num(r.cost));
  }
  const auto& table = fixture.at("SF(T)");
  const auto& mat = fixture.at("SF(M)");
  for (std::size_t i = 0; i < std::min(table.size(), mat.size()); ++i) {
    o.require(mat[i].cost <= table[i].cost, "SF(M) above SF(T) at " + num(mat[i].sweep_value));
  }

  const Scenario nut = load_scenario(kDir + "/nut.json");
  const auto weights = by_method(nut_sweep(nut, default_sweep(nut), n));
  std::string why;
  o.require(trend(weights.at("fixture"), true, n, why), why);
  o.require(trend(weights.at("grasp"), false, n, why), why);
  o.require(weights.at("fixture").front().cost > weights.at("fixture").back().cost, "fixture cost flat in mass");
  o.require(weights.at("grasp").front().cost < weights.at("grasp").back().cost, "grasp cost flat in mass");

  const SolveOutcome choice = run_solve(nut, {"rf"}, nut.seed);
  double lo = INFINITY, hi = -INFINITY, chosen = NAN;
  for (const auto& w : nut.nut.weights) {
    lo = std::min(lo, w.mass);
    hi = std::max(hi, w.mass);
    if (choice.strategy == "finger+" + w.name || choice.strategy == "spanner+" + w.name) chosen = w.mass;
  }
  o.require(nut.nut.weights.size() == 3, "nut scenario should offer three weights");
  o.require(choice.solved && chosen > lo && chosen < hi, "planner chose '" + choice.strategy + "'");
  if (o.pass) {
    std::string costs;
    for (const auto& r : table) costs += (costs.empty() ? "" : " ") + num(r.cost);
    o.detail = "1000-sample sweeps; SF(T) costs " + costs + "; planner picked " + choice.strategy;
  }
  return o;
}

Outcome planner_soundness() {
  Outcome o;
  const check::PlannerOptimality opt = check::toy_optimality(20, 404);
  o.require(opt.mismatches == 0, std::to_string(opt.mismatches) + " toy domains not optimal");
  for (const auto& f : opt.failures) o.require(false, f);

  int solves = 0;
  for (const char* file : {"bottle_a1.json", "bottle_a2.json", "nut.json"}) {
    const Scenario s = load_scenario(kDir + "/" + file);
    for (const auto& row : s.ablation) {
      const Scenario variant = patched_scenario(s, row.scene_patch);
      std::string first_doc;
      for (int repeat = 0; repeat < 2; ++repeat) {
        const SolveOutcome r = run_solve(variant, row.disable, s.seed);
        o.require(r.solved, std::string(file) + ": " + row.label + " unsolved");
        if (!r.solved) break;
        ++solves;
        const auto report = planner::validate_plan(*r.result.plan, r.domain.problem, s.budget.length_penalty);
        o.require(report.valid, std::string(file) + ": " + row.label + " fails validation");
        const std::string doc = plan_to_json(*r.result.plan, r.domain.problem, r.strategy).dump(2);
        if (repeat == 0) first_doc = doc;
        o.require(repeat == 0 || doc == first_doc, std::string(file) + ": " + row.label + " plan file differs");
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(opt.domains) + " toy domains optimal; " + std::to_string(solves) +
               " solves validated; repeated plan files identical";
  }
  return o;
}

Outcome calibration() {
  Outcome o;
  const check::Calibration c = check::friction_threshold(10'000, 505);
  o.require(std::abs(c.estimate - c.analytic) <= 0.02,
            "estimate " + num(c.estimate) + " vs analytic " + num(c.analytic));
  if (o.pass) o.detail = "estimate " + num(c.estimate) + ", analytic " + num(c.analytic);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "ablation step counts", step_counts},
      {2, "limit surface against direct formula", limit_surface_oracle},
      {3, "cone membership against enumeration", cone_oracle},
      {4, "jacobian and joint torques", jacobian_check},
      {5, "robustness cost orderings", robustness_orderings},
      {6, "planner optimality, soundness, determinism", planner_soundness},
      {7, "estimator calibration", calibration},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    report(c.id, c.name, o);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
