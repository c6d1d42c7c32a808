#include "checks.hpp"

#include "ftamp/robot.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ftamp;

namespace {

constexpr double kPi = std::numbers::pi;

// Planar arm with unit links along x and z joint axes.
SerialArm planar(int links, std::vector<double> limits = {}) {
  SerialArm arm;
  arm.name = "planar";
  for (int i = 0; i < links; ++i) {
    RevoluteJoint j;
    j.origin = i == 0 ? Transform::identity() : Transform::translate(Vec3(1, 0, 0));
    j.torque_limit = limits.empty() ? 100.0 : limits[static_cast<std::size_t>(i)];
    arm.joints.push_back(j);
  }
  arm.tool = Transform::translate(Vec3(links > 0 ? 1 : 0, 0, 0));
  return arm;
}

Config config(std::initializer_list<double> v) {
  Config q(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) q[i++] = x;
  return q;
}

Wrench force(const Vec3& f) {
  Wrench w;
  w.force = f;
  return w;
}

Config random_config(const SerialArm& arm, std::mt19937_64& rng, double inset) {
  Config q(static_cast<Eigen::Index>(arm.dof()));
  for (std::size_t k = 0; k < arm.dof(); ++k) {
    std::uniform_real_distribution<double> u(arm.joints[k].min_position + inset, arm.joints[k].max_position - inset);
    q[static_cast<Eigen::Index>(k)] = u(rng);
  }
  return q;
}

}  // namespace

TEST(Kinematics, StraightAndBentTwoLink) {
  const SerialArm arm = planar(2);
  const Transform straight = fk(arm, config({0, 0}));
  EXPECT_TRUE(straight.translation.isApprox(Vec3(2, 0, 0), 1e-12));
  EXPECT_TRUE(straight.rotation.isApprox(Mat3::Identity(), 1e-12));
  EXPECT_NEAR((fk(arm, config({kPi / 2, 0})).translation - Vec3(0, 2, 0)).norm(), 0.0, 1e-12);
}

TEST(Kinematics, ZeroJointArmIsBasePose) {
  SerialArm arm;
  arm.base = Transform::from_xyz_rpy(Vec3(1, 2, 3), Vec3(0.1, 0.2, 0.3));
  EXPECT_TRUE(approx_equal(fk(arm, Config(0)), arm.base));
}

TEST(Kinematics, OneLinkJacobian) {
  const Eigen::MatrixXd j = jacobian(planar(1), config({0}));
  ASSERT_EQ(j.cols(), 1);
  EXPECT_TRUE((j.block<3, 1>(0, 0).isApprox(Vec3(0, 1, 0), 1e-12)));
  EXPECT_TRUE((j.block<3, 1>(3, 0).isApprox(Vec3(0, 0, 1), 1e-12)));
}

TEST(Kinematics, TwoLinkJacobianMomentArms) {
  const Eigen::MatrixXd j = jacobian(planar(2), config({0, 0}));
  EXPECT_TRUE((j.block<3, 1>(0, 0).isApprox(Vec3(0, 2, 0), 1e-12)));
  EXPECT_TRUE((j.block<3, 1>(0, 1).isApprox(Vec3(0, 1, 0), 1e-12)));
}

TEST(Kinematics, JacobianMatchesFiniteDifferences) {
  const check::Tally t = check::jacobian(500, 21);
  EXPECT_TRUE(t.ok()) << "worst column error " << t.worst;
}

TEST(Torques, ZeroLoad) {
  const auto v = torque_stable(planar(2, {30, 30}), config({0, 0}), Wrench{});
  EXPECT_TRUE(v.stable);
  EXPECT_EQ(v.margin, 1.0);
}

TEST(Torques, StraightArmUnderDownwardLoad) {
  const Wrench w = force(Vec3(0, -10, 0));
  const Config q = config({0, 0});
  const Eigen::VectorXd tau = joint_torques(planar(2, {30, 30}), q, w);
  EXPECT_NEAR(tau[0], -20.0, 1e-12);
  EXPECT_NEAR(tau[1], -10.0, 1e-12);
  const auto ok = torque_stable(planar(2, {30, 30}), q, w);
  EXPECT_TRUE(ok.stable);
  EXPECT_NEAR(ok.margin, 1.0 / 3.0, 1e-12);
  const auto weak = torque_stable(planar(2, {15, 30}), q, w);
  EXPECT_FALSE(weak.stable);
  ASSERT_TRUE(weak.failing_joint.has_value());
  EXPECT_EQ(*weak.failing_joint, 0u);
}

TEST(Torques, MarginZeroExactlyAtLimit) {
  const auto v = torque_stable(planar(2, {20, 30}), config({0, 0}), force(Vec3(0, -10, 0)));
  EXPECT_FALSE(v.stable);
  EXPECT_EQ(v.margin, 0.0);
}

TEST(Torques, LinearInLoad) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const SerialArm arm = default_arm("a", Transform::identity());
  for (int i = 0; i < 100; ++i) {
    const Config q = random_config(arm, rng, 0.0);
    Wrench a, b;
    a.force = Vec3(u(rng), u(rng), u(rng));
    a.torque = Vec3(u(rng), u(rng), u(rng));
    b.force = Vec3(u(rng), u(rng), u(rng));
    b.torque = Vec3(u(rng), u(rng), u(rng));
    const Eigen::VectorXd lhs = joint_torques(arm, q, 3.0 * a + b);
    const Eigen::VectorXd rhs = 3.0 * joint_torques(arm, q, a) + joint_torques(arm, q, b);
    EXPECT_LT((lhs - rhs).norm(), 1e-9);
  }
}

TEST(InverseKinematics, FixedPointAtSeed) {
  const SerialArm arm = default_arm("a", Transform::identity());
  const Config q0 = default_home(arm);
  const auto q = ik(arm, fk(arm, q0), q0);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, q0);
}

TEST(InverseKinematics, RoundTripFromPerturbedSeed) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> noise(0.0, 0.05);
  const SerialArm arm = default_arm("a", Transform::translate(Vec3(0.2, -0.1, 0.05)));
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    const Config q0 = random_config(arm, rng, 0.2);
    Config seed = q0;
    for (Eigen::Index k = 0; k < seed.size(); ++k) seed[k] += noise(rng);
    const Transform target = fk(arm, q0);
    const auto q = ik(arm, target, seed);
    if (!q || pose_error(fk(arm, *q), target) >= 1e-4) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(InverseKinematics, UnreachableTargetFails) {
  const SerialArm arm = planar(2);
  EXPECT_FALSE(ik(arm, Transform::translate(Vec3(3, 0, 0)), config({0.1, 0.1})).has_value());
  const SerialArm big = default_arm("a", Transform::identity());
  EXPECT_FALSE(ik(big, Transform::translate(Vec3(2, 0, 0.5)), default_home(big)).has_value());
}

TEST(Impedance, SpringOffsets) {
  const Vec6 kp = (Vec6() << 3000, 3000, 3000, 50, 50, 50).finished();
  EXPECT_TRUE(impedance_offset(Wrench{}, kp).isZero(0.0));
  Wrench w;
  w.force.z() = -15;
  w.torque.z() = 0.2;
  const Vec6 off = impedance_offset(w, kp);
  EXPECT_NEAR(off[2], -0.005, 1e-15);
  EXPECT_NEAR(off[5], 0.004, 1e-15);
  const ImpedanceCommand cmd = impedance_command(w, kp);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(cmd.damping_kd[i], 2.0 * std::sqrt(kp[i]), 1e-12);
  EXPECT_EQ(cmd.pose_offset, off);
}

TEST(Arm, DefaultArmIsConsistent) {
  const SerialArm arm = default_arm("a", Transform::identity());
  EXPECT_EQ(arm.dof(), 7u);
  EXPECT_NO_THROW(arm.validate());
  EXPECT_TRUE(arm.within_limits(default_home(arm)));
  const std::vector<double> limits = {87, 87, 87, 87, 12, 12, 12};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(arm.joints[i].torque_limit, limits[i]);
}
