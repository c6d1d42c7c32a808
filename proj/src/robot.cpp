#include "ftamp/robot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ftamp {

bool SerialArm::within_limits(const Config& q, double tol) const {
  if (static_cast<std::size_t>(q.size()) != dof()) return false;
  for (std::size_t i = 0; i < dof(); ++i) {
    if (q(i) < joints[i].min_position - tol || q(i) > joints[i].max_position + tol) return false;
  }
  return true;
}

void SerialArm::validate() const {
  if (!base.is_valid(1e-6) || !tool.is_valid(1e-6)) throw std::invalid_argument(name + ": invalid base or tool transform");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const auto& j = joints[i];
    if (!(j.torque_limit > 0.0)) throw std::invalid_argument(name + ": torque limits must be positive");
    if (!(j.min_position <= j.max_position)) throw std::invalid_argument(name + ": empty position range");
    if (std::abs(j.axis.norm() - 1.0) > 1e-6) throw std::invalid_argument(name + ": joint axis must be unit length");
    if (!j.origin.is_valid(1e-6)) throw std::invalid_argument(name + ": invalid joint origin");
  }
}

SerialArm default_arm(const std::string& name, const Transform& base) {
  SerialArm arm;
  arm.name = name;
  arm.base = base;
  const double roll_limit = 2.9;
  const double pitch_limit = 2.6;
  auto add = [&](double dz, const Vec3& axis, double tau, double limit) {
    RevoluteJoint j;
    j.origin = Transform::translate(Vec3(0, 0, dz));
    j.axis = axis;
    j.torque_limit = tau;
    j.min_position = -limit;
    j.max_position = limit;
    arm.joints.push_back(j);
  };
  add(0.0, Vec3::UnitZ(), 87, roll_limit);    // base yaw
  add(0.35, Vec3::UnitY(), 87, pitch_limit);  // shoulder pitch
  add(0.2, Vec3::UnitZ(), 87, roll_limit);    // upper-arm roll
  add(0.2, Vec3::UnitY(), 87, pitch_limit);   // elbow
  add(0.2, Vec3::UnitZ(), 12, roll_limit);    // forearm roll
  add(0.2, Vec3::UnitY(), 12, pitch_limit);   // wrist pitch
  add(0.0, Vec3::UnitZ(), 12, roll_limit);    // wrist roll
  arm.tool = Transform::translate(Vec3(0, 0, 0.12));
  return arm;
}

Config default_home(const SerialArm& arm) {
  Config q = Config::Zero(static_cast<Eigen::Index>(arm.dof()));
  if (arm.dof() == 7) q << 0.0, 0.2, 0.0, 1.6, 0.0, 1.34, 0.0;
  return q;
}

namespace {

void check_length(const SerialArm& arm, const Config& q) {
  if (static_cast<std::size_t>(q.size()) != arm.dof()) {
    throw std::invalid_argument("configuration length " + std::to_string(q.size()) + " does not match " +
                                std::to_string(arm.dof()) + " joints of " + arm.name);
  }
}

// Joint frames (after applying each joint rotation) in the arm's base frame,
// followed by the end-effector frame.
std::vector<Transform> chain_frames(const SerialArm& arm, const Config& q) {
  std::vector<Transform> frames;
  frames.reserve(arm.dof() + 1);
  Transform t = arm.base;
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    const auto& j = arm.joints[i];
    t = compose(t, j.origin);
    t = compose(t, Transform::rotate(Eigen::AngleAxisd(q(i), j.axis).toRotationMatrix()));
    frames.push_back(t);
  }
  frames.push_back(compose(t, arm.tool));
  return frames;
}

}  // namespace

Transform fk(const SerialArm& arm, const Config& q) {
  check_length(arm, q);
  return chain_frames(arm, q).back();
}

Eigen::MatrixXd jacobian(const SerialArm& arm, const Config& q) {
  check_length(arm, q);
  const auto frames = chain_frames(arm, q);
  const Vec3 ee = frames.back().translation;
  Eigen::MatrixXd J(6, static_cast<Eigen::Index>(arm.dof()));
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    const Vec3 axis = frames[i].rotation * arm.joints[i].axis;
    const Vec3 origin = frames[i].translation;
    J.block<3, 1>(0, static_cast<Eigen::Index>(i)) = axis.cross(ee - origin);
    J.block<3, 1>(3, static_cast<Eigen::Index>(i)) = axis;
  }
  return J;
}

Eigen::VectorXd joint_torques(const SerialArm& arm, const Config& q, const Wrench& w_ext) {
  return jacobian(arm, q).transpose() * w_ext.vector();
}

StabilityVerdict torque_stable(const SerialArm& arm, const Config& q, const Wrench& w_ext) {
  const Eigen::VectorXd tau = joint_torques(arm, q, w_ext);
  double worst = 0.0;
  std::size_t worst_joint = 0;
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    const double ratio = std::abs(tau(static_cast<Eigen::Index>(i))) / arm.joints[i].torque_limit;
    if (ratio > worst) {
      worst = ratio;
      worst_joint = i;
    }
  }
  StabilityVerdict v = StabilityVerdict::from_margin(1.0 - worst);
  if (!v.stable) v.failing_joint = worst_joint;
  return v;
}

double pose_error(const Transform& a, const Transform& b) {
  Vec6 e;
  e << b.translation - a.translation, rotation_error(a.rotation, b.rotation);
  return e.norm();
}

std::optional<Config> ik(const SerialArm& arm, const Transform& target, const Config& seed, const IkOptions& options) {
  check_length(arm, seed);
  Config q = seed;
  const auto n = static_cast<Eigen::Index>(arm.dof());
  const double lambda2 = options.damping * options.damping;
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const Transform current = fk(arm, q);
    Vec6 e;
    e << target.translation - current.translation, rotation_error(current.rotation, target.rotation);
    if (e.norm() < options.tolerance) {
      if (!arm.within_limits(q)) return std::nullopt;
      return q;
    }
    if (iter == options.max_iterations) break;
    const Eigen::MatrixXd J = jacobian(arm, q);
    const Eigen::Matrix<double, 6, 6> JJt = J * J.transpose() + lambda2 * Eigen::Matrix<double, 6, 6>::Identity();
    Eigen::VectorXd dq = J.transpose() * JJt.ldlt().solve(e);
    const double biggest = dq.cwiseAbs().maxCoeff();
    if (biggest > options.max_step) dq *= options.max_step / biggest;
    q += dq;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& j = arm.joints[static_cast<std::size_t>(i)];
      q(i) = std::clamp(q(i), j.min_position, j.max_position);
    }
  }
  return std::nullopt;
}

Vec6 impedance_offset(const Wrench& w_desired, const Vec6& stiffness_kp) {
  if ((stiffness_kp.array() <= 0.0).any()) throw std::invalid_argument("impedance stiffness must be positive");
  return w_desired.vector().cwiseQuotient(stiffness_kp);
}

ImpedanceCommand impedance_command(const Wrench& w_desired, const Vec6& stiffness_kp) {
  ImpedanceCommand cmd;
  cmd.pose_offset = impedance_offset(w_desired, stiffness_kp);
  cmd.stiffness_kp = stiffness_kp;
  cmd.damping_kd = 2.0 * stiffness_kp.cwiseSqrt();
  return cmd;
}

}  // namespace ftamp
