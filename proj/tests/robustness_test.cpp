#include "checks.hpp"

#include "ftamp/robustness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace ftamp;

namespace {

PerturbationSpec no_noise(int samples = 50) {
  PerturbationSpec s;
  s.friction_mu = s.applied_wrench = s.frame_translation = s.frame_rotation = s.patch_size = 0.0;
  s.sample_count = samples;
  return s;
}

ForcefulKinematicChain lid_chain(double grip) {
  CircularPatchJoint j;
  j.mu = 0.8;
  j.radius = 0.03;
  j.normal_force = grip;
  ForcefulKinematicChain c;
  c.links.push_back({j, Transform::identity(), 1.0, std::nullopt, "lid"});
  return c;
}

Wrench push_twist() {
  Wrench w;
  w.force.z() = -15;
  w.torque.z() = 0.2;
  return w;
}

ForcefulKinematicChain rigid_chain() {
  ForcefulKinematicChain c;
  c.links.push_back({RigidJoint{}, Transform::translate(Vec3(0.1, 0, 0.2)), 1.0, std::nullopt, "vise"});
  return c;
}

}  // namespace

TEST(Robustness, DegenerateSpecGivesNominalVerdict) {
  EXPECT_EQ(success_probability(lid_chain(15), push_twist(), no_noise()), 1.0);
  EXPECT_EQ(success_probability(lid_chain(5), push_twist(), no_noise()), 0.0);
}

TEST(Robustness, RigidFixtureCostsNothing) {
  const PerturbationSpec spec;
  const double p = success_probability(rigid_chain(), push_twist(), spec);
  EXPECT_EQ(p, 1.0);
  EXPECT_EQ(action_cost(p).cost, 0.0);
}

TEST(Robustness, ActionCostValues) {
  EXPECT_EQ(action_cost(1.0).cost, 0.0);
  EXPECT_TRUE(std::isinf(action_cost(0.0).cost));
  EXPECT_NEAR(action_cost(0.5).cost, 0.6931471805599453, 1e-15);
  EXPECT_THROW(action_cost(1.5), std::invalid_argument);
  EXPECT_THROW(action_cost(-0.1), std::invalid_argument);
  double previous = std::numeric_limits<double>::infinity();
  for (double p = 0.01; p <= 1.0; p += 0.01) {
    EXPECT_LT(action_cost(p).cost, previous);
    previous = action_cost(p).cost;
  }
}

TEST(Robustness, SpecValidation) {
  PerturbationSpec s;
  s.sample_count = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = PerturbationSpec{};
  s.friction_mu = -0.1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_TRUE(no_noise().degenerate());
  EXPECT_FALSE(PerturbationSpec{}.degenerate());
}

TEST(Robustness, SameSeedSameEstimate) {
  PerturbationSpec spec;
  spec.sample_count = 500;
  spec.rng_seed = 9;
  const double a = success_probability(lid_chain(15), push_twist(), spec);
  const double b = success_probability(lid_chain(15), push_twist(), spec);
  EXPECT_EQ(a, b);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, 1.0);
}

TEST(Robustness, ParallelEvaluationMatchesSequentialStreams) {
  PerturbationSpec spec;
  spec.sample_count = 5000;  // large enough to use worker threads
  spec.rng_seed = 77;
  const double parallel = estimate_probability(spec, [](std::size_t, std::mt19937_64& rng) { return rng() % 3 == 0; });
  int hits = 0;
  for (int i = 0; i < spec.sample_count; ++i) {
    std::mt19937_64 rng = sample_rng(spec.rng_seed, static_cast<std::uint64_t>(i));
    hits += rng() % 3 == 0 ? 1 : 0;
  }
  EXPECT_EQ(parallel, static_cast<double>(hits) / spec.sample_count);
}

TEST(Robustness, StreamsDifferAcrossIndicesAndSeeds) {
  EXPECT_NE(sample_rng(1, 0)(), sample_rng(1, 1)());
  EXPECT_NE(sample_rng(1, 0)(), sample_rng(2, 0)());
  EXPECT_EQ(sample_rng(5, 3)(), sample_rng(5, 3)());
}

TEST(Robustness, MatchesGaussianTail) {
  for (double ratio : {0.8, 0.9, 1.0, 1.1}) {
    const check::Calibration c = check::friction_threshold(10'000, 31, ratio);
    EXPECT_NEAR(c.estimate, c.analytic, 0.02) << "load ratio " << ratio;
  }
}

TEST(Robustness, MoreGripMeansCheaper) {
  PerturbationSpec spec;
  spec.sample_count = 1000;
  double previous = std::numeric_limits<double>::infinity();
  for (double grip : {12.0, 15.0, 20.0, 30.0}) {
    const double cost = action_cost(success_probability(lid_chain(grip), push_twist(), spec)).cost;
    EXPECT_LE(cost, previous + 1e-12);
    previous = cost;
  }
}

TEST(Robustness, CostCsvColumns) {
  std::ostringstream out;
  write_cost_csv(out, {{0.0, "GT", 1.0, 0.0, 0.0, 0.0}, {10.0, "FT", 0.0, INFINITY, INFINITY, INFINITY}});
  EXPECT_EQ(out.str(),
            "sweep_value,method,probability,cost\n"
            "0.000000,GT,1.000000,0.000000\n"
            "10.000000,FT,0.000000,inf\n");
}
