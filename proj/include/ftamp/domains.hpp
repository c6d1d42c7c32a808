#pragma once

#include "ftamp/planner.hpp"
#include "ftamp/robustness.hpp"
#include "ftamp/scene.hpp"
#include "ftamp/stability.hpp"

#include <functional>
#include <memory>
#include <set>
#include <string>

namespace ftamp {

/// Planner problem plus the mapping from a plan to its strategy label.
struct DomainProblem {
  planner::Problem problem;
  std::function<std::string(const planner::Plan&)> strategy;
};

struct DomainSettings {
  PerturbationSpec perturbation;
  Vec6 stiffness = (Vec6() << 3000, 3000, 3000, 50, 50, 50).finished();
  std::set<std::string> disable;
};

/// Damped least squares from a deterministic seed list; `attempt` selects
/// which seeds are tried.
std::optional<Config> solve_ik(const SerialArm& arm, const Transform& target, int attempt = 0);

// --- bottle ---------------------------------------------------------------

enum class TwistMethod { GT, FT, PT, TT };
enum class Fixture { SF, RF, VF };

std::string method_code(TwistMethod m);  // "GT", ...
TwistMethod parse_method(const std::string& code);

/// Contact parameters a twist grasp carries.
struct TwistContact {
  TwistMethod method = TwistMethod::GT;
  double mu = 0.8;
  double radius = 0.03;
  double grip_force = 0.0;  // GT and TT only; other methods press with the push force
  double tip_offset = 0.0;  // FT only
};

TwistContact twist_contact(const BottleScene& scene, TwistMethod method);

/// Push-twist wrench (0, 0, -push, 0, 0, t_z) in the lid frame.
Wrench push_twist(double push, double t_z);

/// Pose of the bottle base standing on `surface` at (x, y).
Transform bottle_pose(const BottleScene& scene, const std::string& surface, double x, double y);

/// Hand target for twisting, in the world frame.
Transform twist_target(const BottleScene& scene, TwistMethod method, const Transform& bottle, double yaw = 0.0);

/// Hand-lid contacts followed by the arm.
ForcefulKinematicChain twist_chain(const BottleScene& scene, const TwistContact& contact,
                                   const std::shared_ptr<const SerialArm>& arm, const Config& q,
                                   const Transform& bottle, double push);

/// Hand-lid contacts only: the check made by the stability-filtered grasp sampler.
StabilityVerdict twist_contact_stable(const BottleScene& scene, const TwistContact& contact, double push, double t_z);

/// Bottle against the environment. SF uses a circular patch at the bottle base
/// with normal force equal to bottle weight plus the push.
ForcefulKinematicChain fixture_chain(const BottleScene& scene, Fixture fixture, double surface_mu, double push);

/// Codes accepted by --disable for the bottle domain.
const std::set<std::string>& bottle_disable_codes();

/// Applies disable codes (gt, ft, pt, tt, rf, vf, sft, sfm) to a scene.
BottleScene apply_bottle_disables(const BottleScene& scene, const std::set<std::string>& disable);

DomainProblem bottle_domain(const BottleScene& scene, const BottleOperation& op, const DomainSettings& settings);

// --- nut ------------------------------------------------------------------

const std::set<std::string>& nut_disable_codes();
NutScene apply_nut_disables(const NutScene& scene, const std::set<std::string>& disable);

/// Beam-table patch loaded by the beam and a weight resting in the weight slot.
PolygonPatchJoint beam_table_joint(const NutScene& scene, std::optional<double> weight_mass, double weight_extent);

/// Nut twist reaction through the beam-table contact (or a rigid robot grasp).
ForcefulKinematicChain beam_fixture_chain(const NutScene& scene, std::optional<double> weight_mass,
                                          double weight_extent);

/// Pinch grasp carrying a weight against gravity. Applied wrench is returned
/// through `load`.
ForcefulKinematicChain weight_grasp_chain(const NutScene& scene, const Weight& weight, Wrench& load);

/// Finger grip on the nut followed by the arm.
ForcefulKinematicChain finger_twist_chain(const NutScene& scene, const std::shared_ptr<const SerialArm>& arm,
                                          const Config& q);

DomainProblem nut_domain(const NutScene& scene, const NutOperation& op, const DomainSettings& settings);

}  // namespace ftamp
