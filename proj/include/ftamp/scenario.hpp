#pragma once

#include "ftamp/domains.hpp"
#include "ftamp/planner.hpp"
#include "ftamp/robustness.hpp"
#include "ftamp/scene.hpp"

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftamp {

/// Invalid scenario document. `where()` is a JSON path such as
/// "scene.bottle.mass" (empty for syntax errors).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// One solve of an ablation study: strategies to invalidate plus scene edits.
struct AblationRow {
  std::string label;  // expected strategy, e.g. "GT+RF"
  std::set<std::string> disable;
  planner::Json scene_patch;  // merge patch applied to the scene section
};

struct Scenario {
  std::string domain = "bottle";  // "bottle" or "nut"
  std::uint64_t seed = 0;
  BottleScene bottle;
  BottleOperation bottle_op;
  NutScene nut;
  NutOperation nut_op;
  PerturbationSpec perturbation;
  planner::Budget budget;
  Vec6 stiffness = DomainSettings{}.stiffness;
  std::set<std::string> disable;
  std::vector<AblationRow> ablation;
  /// Scene section as written, kept so ablation rows can patch it.
  planner::Json scene_doc = planner::Json::object();
};

/// Strict parse: unknown keys, wrong types and out-of-range values are
/// rejected with their JSON path. Comments are allowed.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Copy of `s` with the scene section replaced by scene_doc merged with `patch`.
Scenario patched_scenario(const Scenario& s, const planner::Json& patch);

/// Domain codes accepted by `disable` for the scenario's domain.
const std::set<std::string>& disable_codes(const Scenario& s);

/// Builds the planner problem with the scenario's and the extra disable codes.
DomainProblem build_domain(const Scenario& s, const std::set<std::string>& extra_disable = {});

}  // namespace ftamp
