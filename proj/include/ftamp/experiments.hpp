#pragma once

#include "ftamp/robustness.hpp"
#include "ftamp/scenario.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ftamp {

struct SolveOutcome {
  bool solved = false;
  std::string strategy;
  std::size_t steps = 0;
  double cost = std::numeric_limits<double>::infinity();
  double wall_time = 0.0;  // seconds, problem construction included
  planner::SolveResult result;
  DomainProblem domain;
};

/// Builds the scenario's problem with extra disable codes and solves it.
/// Throws std::invalid_argument when the scene is inconsistent.
SolveOutcome run_solve(const Scenario& s, const std::set<std::string>& disable, std::uint64_t seed);

struct AblationResult {
  std::string label;     // strategy the row is meant to force
  std::string strategy;  // strategy found, empty when unsolved
  std::size_t steps = 0;
  bool solved = false;
  double cost = std::numeric_limits<double>::infinity();
  double wall_time = 0.0;
};

/// One solve per ablation row of the scenario.
std::vector<AblationResult> run_ablation(const Scenario& s, std::uint64_t seed);

/// Columns: strategy,steps,solved,cost,wall_time. Unsolved rows report their
/// label as the strategy and cost "inf".
void write_ablation_csv(std::ostream& out, const std::vector<AblationResult>& rows, bool with_wall_time = true);

/// "<variable>:<min>:<max>:<steps>", e.g. "force:0:60:7".
struct Sweep {
  std::string variable;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  std::vector<double> values() const;
};

/// Throws std::invalid_argument on malformed text.
Sweep parse_sweep(const std::string& text);

/// Extra downward force over the operation grid (bottle) or weight mass
/// from 0.5 to 5 kg (nut).
Sweep default_sweep(const Scenario& s);

struct BottleSweep {
  std::vector<CostRow> twist;    // methods GT, FT, PT, TT
  std::vector<CostRow> fixture;  // methods RF, VF, SF(T), SF(M)
};

/// Twist and fixture chain costs per extra downward force. Arm configurations
/// come from inverse kinematics at the bottle's start pose.
BottleSweep bottle_sweep(const Scenario& s, const Sweep& sweep, int samples);

/// Weight-fixture and weight-grasp costs per mass: median and 95% interval
/// over `replicates` independently seeded estimates.
std::vector<CostRow> nut_sweep(const Scenario& s, const Sweep& sweep, int samples, int replicates = 20);

}  // namespace ftamp
