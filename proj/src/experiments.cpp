#include "ftamp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ftamp {
namespace {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

// Linear-interpolated quantile of sorted data; infinite neighbours win.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= sorted.size()) return sorted[lo];
  const double a = sorted[lo];
  const double b = sorted[lo + 1];
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) ? a : b;
  return a + frac * (b - a);
}

CostRow cost_row(double x, const std::string& method, double p) {
  CostRow r;
  r.sweep_value = x;
  r.method = method;
  r.probability = p;
  r.cost = action_cost(p).cost;
  r.cost_lo = r.cost;
  r.cost_hi = r.cost;
  return r;
}

}  // namespace

SolveOutcome run_solve(const Scenario& s, const std::set<std::string>& disable, std::uint64_t seed) {
  SolveOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  out.domain = build_domain(s, disable);
  out.domain.problem.validate();
  out.result = planner::solve(out.domain.problem, s.budget, seed);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.result.plan) {
    out.solved = true;
    out.strategy = out.domain.strategy(*out.result.plan);
    out.steps = out.result.plan->steps.size();
    out.cost = out.result.plan->total_cost;
  }
  return out;
}

std::vector<AblationResult> run_ablation(const Scenario& s, std::uint64_t seed) {
  std::vector<AblationResult> rows;
  for (const auto& row : s.ablation) {
    const Scenario variant = patched_scenario(s, row.scene_patch);
    const SolveOutcome o = run_solve(variant, row.disable, seed);
    AblationResult r;
    r.label = row.label;
    r.solved = o.solved;
    r.strategy = o.strategy;
    r.steps = o.steps;
    r.cost = o.cost;
    r.wall_time = o.wall_time;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationResult>& rows, bool with_wall_time) {
  out << "strategy,steps,solved,cost";
  if (with_wall_time) out << ",wall_time";
  out << '\n';
  for (const auto& r : rows) {
    out << (r.solved ? r.strategy : r.label) << ',' << r.steps << ',' << (r.solved ? 1 : 0) << ','
        << format_number(r.cost);
    if (with_wall_time) out << ',' << format_number(r.wall_time);
    out << '\n';
  }
}

std::vector<double> Sweep::values() const {
  std::vector<double> out;
  if (steps == 1) return {min};
  for (int i = 0; i < steps; ++i) out.push_back(min + (max - min) * i / (steps - 1));
  return out;
}

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 4 || parts[0].empty()) {
    throw std::invalid_argument("sweep must look like <variable>:<min>:<max>:<steps>, got '" + text + "'");
  }
  Sweep s;
  s.variable = parts[0];
  try {
    std::size_t used = 0;
    s.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    s.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
    s.steps = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep bounds and steps must be numbers in '" + text + "'");
  }
  if (!std::isfinite(s.min) || !std::isfinite(s.max) || s.max < s.min) {
    throw std::invalid_argument("sweep needs finite min <= max in '" + text + "'");
  }
  if (s.steps < 1) throw std::invalid_argument("sweep needs at least one step in '" + text + "'");
  return s;
}

Sweep default_sweep(const Scenario& s) {
  if (s.domain == "bottle") {
    const int steps = static_cast<int>(std::floor(s.bottle_op.f_max / s.bottle_op.f_step + 1e-9)) + 1;
    return Sweep{"force", 0.0, (steps - 1) * s.bottle_op.f_step, steps};
  }
  return Sweep{"mass", 0.5, 5.0, 10};
}

BottleSweep bottle_sweep(const Scenario& s, const Sweep& sweep, int samples) {
  if (s.domain != "bottle") throw std::invalid_argument("bottle sweep needs a bottle scenario");
  if (sweep.variable != "force") throw std::invalid_argument("bottle sweeps vary \"force\", not \"" + sweep.variable + "\"");
  if (sweep.min < 0.0) throw std::invalid_argument("extra downward force must be >= 0");
  const BottleScene scene = apply_bottle_disables(s.bottle, s.disable);
  PerturbationSpec spec = s.perturbation;
  spec.sample_count = samples;
  spec.validate();

  const auto arm = std::make_shared<const SerialArm>(scene.arms.front());
  const Transform pose =
      bottle_pose(scene, scene.bottle.surface, scene.bottle.position.x(), scene.bottle.position.y());
  struct Method {
    TwistMethod kind;
    std::optional<Config> q;
  };
  std::vector<Method> methods;
  for (TwistMethod m : {TwistMethod::GT, TwistMethod::FT, TwistMethod::PT, TwistMethod::TT}) {
    if (m == TwistMethod::TT && !scene.tool) continue;
    std::optional<Config> q;
    for (int attempt = 0; attempt < 2 && !q; ++attempt) q = solve_ik(*arm, twist_target(scene, m, pose), attempt);
    methods.push_back({m, q});
  }

  BottleSweep out;
  for (double extra : sweep.values()) {
    const double push = s.bottle_op.f_z + extra;
    const Wrench w = push_twist(push, s.bottle_op.t_z);
    for (const auto& m : methods) {
      double p = 0.0;
      if (m.q) p = success_probability(twist_chain(scene, twist_contact(scene, m.kind), arm, *m.q, pose, push), w, spec);
      out.twist.push_back(cost_row(extra, method_code(m.kind), p));
    }
    auto fixture = [&](const std::string& name, Fixture f, double mu) {
      out.fixture.push_back(cost_row(extra, name, success_probability(fixture_chain(scene, f, mu, push), w, spec)));
    };
    if (scene.arms.size() > 1) fixture("RF", Fixture::RF, 0.0);
    if (scene.vise) fixture("VF", Fixture::VF, 0.0);
    fixture("SF(T)", Fixture::SF, scene.table.mu);
    if (scene.mat) fixture("SF(M)", Fixture::SF, scene.mat->mu);
  }
  return out;
}

std::vector<CostRow> nut_sweep(const Scenario& s, const Sweep& sweep, int samples, int replicates) {
  if (s.domain != "nut") throw std::invalid_argument("nut sweep needs a nut scenario");
  if (sweep.variable != "mass") throw std::invalid_argument("nut sweeps vary \"mass\", not \"" + sweep.variable + "\"");
  if (!(sweep.min > 0.0)) throw std::invalid_argument("weight mass must be > 0");
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  const NutScene& scene = s.nut;
  Weight probe = scene.weights.empty() ? Weight{"probe", 1.0, 0.04, 0.06, Vec3::Zero()} : scene.weights.front();
  const Wrench twist = [&] {
    Wrench w;
    w.torque = Vec3(0, 0, s.nut_op.t_z);
    w.frame = "nut";
    return w;
  }();

  std::vector<CostRow> out;
  for (double mass : sweep.values()) {
    probe.mass = mass;
    Wrench load;
    const auto grasp = weight_grasp_chain(scene, probe, load);
    const auto fixture = beam_fixture_chain(scene, mass, 2.0 * probe.radius);
    std::vector<double> fixture_p, grasp_p, fixture_c, grasp_c;
    for (int r = 0; r < replicates; ++r) {
      PerturbationSpec spec = s.perturbation;
      spec.sample_count = samples;
      spec.rng_seed = s.perturbation.rng_seed + static_cast<std::uint64_t>(r);
      fixture_p.push_back(success_probability(fixture, twist, spec));
      grasp_p.push_back(success_probability(grasp, load, spec));
      fixture_c.push_back(action_cost(fixture_p.back()).cost);
      grasp_c.push_back(action_cost(grasp_p.back()).cost);
    }
    auto summarize = [&](const std::string& method, std::vector<double> p, std::vector<double> c) {
      std::sort(p.begin(), p.end());
      std::sort(c.begin(), c.end());
      CostRow row;
      row.sweep_value = mass;
      row.method = method;
      row.probability = quantile(p, 0.5);
      row.cost = quantile(c, 0.5);
      row.cost_lo = quantile(c, 0.025);
      row.cost_hi = quantile(c, 0.975);
      out.push_back(row);
    };
    summarize("fixture", fixture_p, fixture_c);
    summarize("grasp", grasp_p, grasp_c);
  }
  return out;
}

}  // namespace ftamp
