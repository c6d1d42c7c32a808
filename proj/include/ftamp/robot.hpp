#pragma once

#include "ftamp/spatial.hpp"
#include "ftamp/verdict.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ftamp {

using Config = Eigen::VectorXd;

struct RevoluteJoint {
  Transform origin;        // pose of this joint's frame in the previous joint frame (or base)
  Vec3 axis = Vec3::UnitZ();  // unit rotation axis in the joint frame
  double torque_limit = 1.0;  // N*m, > 0
  double min_position = -std::numbers::pi;
  double max_position = std::numbers::pi;
};

/// Revolute serial manipulator. The end-effector frame sits at `tool` relative
/// to the last joint frame.
struct SerialArm {
  std::string name;
  std::string base_frame = "world";
  Transform base;  // base pose in base_frame
  std::vector<RevoluteJoint> joints;
  Transform tool;

  std::size_t dof() const { return joints.size(); }
  bool within_limits(const Config& q, double tol = 1e-12) const;
  /// Throws std::invalid_argument when the description is inconsistent.
  void validate() const;
};

/// 7-joint arm used by shipped scenarios (z-y-z-y-z-y-z axes; 0.35 m column,
/// 0.40 m upper arm, 0.40 m forearm, 0.12 m hand). Torque limits
/// (87, 87, 87, 87, 12, 12, 12) N*m.
SerialArm default_arm(const std::string& name, const Transform& base);

/// Neutral configuration the default arm starts in (elbow bent, hand down).
Config default_home(const SerialArm& arm);

/// End-effector pose in the base frame of the arm (i.e. including `base`).
Transform fk(const SerialArm& arm, const Config& q);

/// Geometric Jacobian, 6 x n. Rows 0-2: linear velocity of the end-effector
/// point; rows 3-5: angular velocity. Both in the arm's base frame.
Eigen::MatrixXd jacobian(const SerialArm& arm, const Config& q);

/// tau = J^T w, w = (force, torque about the end-effector point) in the base
/// frame. Stable iff |tau_i| < limit_i; margin = 1 - max_i |tau_i| / limit_i.
StabilityVerdict torque_stable(const SerialArm& arm, const Config& q, const Wrench& w_ext);
Eigen::VectorXd joint_torques(const SerialArm& arm, const Config& q, const Wrench& w_ext);

struct IkOptions {
  int max_iterations = 200;
  double tolerance = 1e-4;
  double damping = 1e-2;
  double max_step = 0.3;  // rad per iteration
};

/// Damped least squares from `seed`. Deterministic; nullopt on
/// non-convergence or when the converged solution leaves the joint limits.
std::optional<Config> ik(const SerialArm& arm, const Transform& target, const Config& seed,
                         const IkOptions& options = {});

double pose_error(const Transform& a, const Transform& b);

/// Cartesian impedance parameters. Damping is critical: Kd = 2 sqrt(Kp).
struct ImpedanceCommand {
  Vec6 stiffness_kp;
  Vec6 damping_kd;
  Vec6 pose_offset;
};

/// Linear spring stand-in for a calibrated wrench/offset relation:
/// offset_i = w_i / Kp_i.
Vec6 impedance_offset(const Wrench& w_desired, const Vec6& stiffness_kp);
ImpedanceCommand impedance_command(const Wrench& w_desired, const Vec6& stiffness_kp);

}  // namespace ftamp
