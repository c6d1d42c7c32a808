#include "ftamp/stability.hpp"

#include "ftamp/cone_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ftamp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Tension tolerance: ignore round-off from rotating a compressive load.
bool is_tension(const Wrench& w) { return w.force.z() > 1e-9 * (1.0 + w.force.norm()); }

StabilityVerdict circular_patch_stable(const CircularPatchJoint& joint, const Wrench& w) {
  if (is_tension(w)) return StabilityVerdict::unstable_sentinel();
  const StabilityVerdict planar = limit_surface_stable({w.force.x(), w.force.y(), w.torque.z()}, joint);

  // Tilting moments are carried by the pressure distribution as long as the
  // centre of pressure stays inside the patch.
  const double tilt = std::hypot(w.torque.x(), w.torque.y());
  double tilt_margin = 1.0;
  if (tilt > 0.0) {
    const double capacity = joint.normal_force * joint.radius;
    tilt_margin = capacity > 0.0 ? 1.0 - (tilt / capacity) * (tilt / capacity) : -kInf;
  }
  return StabilityVerdict::from_margin(std::min(planar.margin, tilt_margin));
}

StabilityVerdict polygon_patch_stable(const PolygonPatchJoint& joint, const Wrench& w) {
  joint.validate();
  if (w.is_zero()) return StabilityVerdict::from_margin(1.0);
  const double scale = max_cone_scale(joint.preload(), w, friction_cone_generators(joint));
  if (scale <= 0.0) return StabilityVerdict::unstable_sentinel();
  const double margin = 1.0 - 1.0 / (scale * scale);
  StabilityVerdict v;
  v.stable = scale > 1.0;
  v.margin = v.stable ? std::max(margin, std::numeric_limits<double>::min()) : std::min(margin, 0.0);
  return v;
}

}  // namespace

void PolygonPatchJoint::validate() const {
  if (corners.empty()) throw std::invalid_argument("polygon patch needs at least one corner");
  if (corners.size() != corner_normal_forces.size()) {
    throw std::invalid_argument("polygon patch: one normal force per corner required");
  }
  for (const auto& c : corners) {
    if (std::abs(c.z()) > 1e-9) throw std::invalid_argument("polygon patch corners must lie in the z = 0 plane");
  }
  for (double n : corner_normal_forces) {
    if (!(n >= 0.0)) throw std::invalid_argument("polygon patch corner normal forces must be >= 0");
  }
  if (!(mu >= 0.0)) throw std::invalid_argument("polygon patch friction must be >= 0");
}

Wrench PolygonPatchJoint::preload() const {
  Wrench w;
  w.frame = frame;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Vec3 f(0.0, 0.0, corner_normal_forces[i]);
    w.force += f;
    w.torque += corners[i].cross(f);
  }
  return w;
}

const std::string& joint_frame(const JointModel& joint) {
  return std::visit([](const auto& j) -> const std::string& { return j.frame; }, joint);
}

std::string joint_kind(const JointModel& joint) {
  return std::visit(Overloaded{
                        [](const CircularPatchJoint&) { return std::string("circular-patch"); },
                        [](const PolygonPatchJoint&) { return std::string("polygon-patch"); },
                        [](const ArmJoint&) { return std::string("arm"); },
                        [](const RigidJoint&) { return std::string("rigid"); },
                    },
                    joint);
}

double limit_surface_form(const PlanarWrench& w, const CircularPatchJoint& joint) {
  const double force_cap = joint.normal_force * joint.mu;
  const double moment_cap = joint.normal_force * joint.k() * joint.mu;
  const double fx = w.fx / force_cap;
  const double fy = w.fy / force_cap;
  const double mz = w.mz / moment_cap;
  return fx * fx + fy * fy + mz * mz;
}

StabilityVerdict limit_surface_stable(const PlanarWrench& w, const CircularPatchJoint& joint) {
  if (!(joint.normal_force >= 0.0)) throw std::invalid_argument("normal force must be >= 0");
  if (w.fx == 0.0 && w.fy == 0.0 && w.mz == 0.0) return StabilityVerdict::from_margin(1.0);
  if (joint.normal_force == 0.0 || joint.mu == 0.0) return StabilityVerdict::unstable_sentinel();
  const double form = limit_surface_form(w, joint);
  if (std::isnan(form)) return StabilityVerdict::unstable_sentinel();
  return StabilityVerdict::from_margin(1.0 - form);
}

std::vector<Wrench> friction_cone_generators(const PolygonPatchJoint& joint) {
  joint.validate();
  const std::array<Vec3, 4> edges = {Vec3(joint.mu, 0, 1), Vec3(-joint.mu, 0, 1), Vec3(0, joint.mu, 1),
                                     Vec3(0, -joint.mu, 1)};
  std::vector<Wrench> out;
  for (std::size_t i = 0; i < joint.corners.size(); ++i) {
    const double n = joint.corner_normal_forces[i];
    if (n <= 0.0) continue;
    const std::size_t first = out.size();
    for (const Vec3& e : edges) {
      Wrench g;
      g.force = n * e;
      g.torque = joint.corners[i].cross(g.force);
      g.frame = joint.frame;
      const bool duplicate = std::any_of(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                                         [&](const Wrench& h) { return (h.vector() - g.vector()).isZero(1e-15); });
      if (!duplicate) out.push_back(g);
    }
  }
  return out;
}

StabilityVerdict in_convex_cone(const Wrench& w, const std::vector<Wrench>& generators) {
  const Vec6 target = w.vector();
  if (target.isZero(0.0)) return StabilityVerdict::from_margin(1.0);

  std::vector<Vec6> unit;
  for (const auto& g : generators) {
    const Vec6 v = g.vector();
    const double n = v.norm();
    if (n > 0.0) unit.push_back(v / n);
  }
  if (unit.empty()) return StabilityVerdict::unstable_sentinel();

  // Variables: mu_1..mu_G >= 0, t+, t-, slack.  l_i = t + mu_i.
  //   sum mu_i g_i + (t+ - t-) sum g_i = w_hat
  //   t+ - t- + slack = 1
  const auto G = static_cast<Eigen::Index>(unit.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(7, G + 3);
  Vec6 sum = Vec6::Zero();
  for (Eigen::Index i = 0; i < G; ++i) {
    A.block<6, 1>(0, i) = unit[static_cast<std::size_t>(i)];
    sum += unit[static_cast<std::size_t>(i)];
  }
  A.block<6, 1>(0, G) = sum;
  A.block<6, 1>(0, G + 1) = -sum;
  A(6, G) = 1.0;
  A(6, G + 1) = -1.0;
  A(6, G + 2) = 1.0;
  Eigen::VectorXd b(7);
  b << target / target.norm(), 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(G + 3);
  c(G) = 1.0;
  c(G + 1) = -1.0;

  const lp::Result r = lp::maximize(A, b, c);
  if (r.status == lp::Status::Infeasible) return StabilityVerdict::unstable_sentinel();
  // Unbounded cannot happen (t <= 1); treat it as full depth.
  const double depth = r.status == lp::Status::Unbounded ? 1.0 : std::min(r.objective, 1.0);
  return StabilityVerdict::from_margin(depth);
}

double max_cone_scale(const Wrench& base, const Wrench& w, const std::vector<Wrench>& generators, double cap) {
  // Variables: lambda_1..lambda_G, a, slack.
  //   sum lambda_i g_i + a w = base;   a + slack = cap.   maximize a.
  const auto G = static_cast<Eigen::Index>(generators.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(7, G + 2);
  for (Eigen::Index i = 0; i < G; ++i) A.block<6, 1>(0, i) = generators[static_cast<std::size_t>(i)].vector();
  A.block<6, 1>(0, G) = w.vector();
  A(6, G) = 1.0;
  A(6, G + 1) = 1.0;
  Eigen::VectorXd b(7);
  b << base.vector(), cap;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(G + 2);
  c(G) = 1.0;
  const lp::Result r = lp::maximize(A, b, c);
  if (r.status == lp::Status::Infeasible) return 0.0;
  if (r.status == lp::Status::Unbounded) return cap;
  return r.objective;
}

BeamReactions beam_support_forces(double beam_length, double mass, double center, double extent, double gravity) {
  if (!(beam_length > 0.0)) throw std::invalid_argument("beam length must be positive");
  if (!(mass >= 0.0) || !(extent >= 0.0)) throw std::invalid_argument("mass and load extent must be >= 0");
  const double tol = 1e-12 * beam_length;
  if (center - extent / 2.0 < -tol || center + extent / 2.0 > beam_length + tol) {
    throw std::invalid_argument("load overhangs a beam support");
  }
  const double total = mass * gravity;
  BeamReactions r;
  r.right = total * center / beam_length;
  r.left = total - r.right;
  return r;
}

PolygonPatchJoint beam_patch_joint(double beam_length, double beam_width, double mu, const BeamReactions& reactions,
                                   std::string frame) {
  PolygonPatchJoint j;
  j.mu = mu;
  j.frame = std::move(frame);
  const double hx = beam_length / 2.0;
  const double hy = beam_width / 2.0;
  j.corners = {Vec3(-hx, -hy, 0), Vec3(-hx, hy, 0), Vec3(hx, -hy, 0), Vec3(hx, hy, 0)};
  j.corner_normal_forces = {reactions.left / 2.0, reactions.left / 2.0, reactions.right / 2.0, reactions.right / 2.0};
  return j;
}

StabilityVerdict joint_stable(const JointModel& joint, const Wrench& w) {
  const std::string& frame = joint_frame(joint);
  if (!frame.empty() && !w.frame.empty() && frame != w.frame) {
    throw std::invalid_argument("wrench expressed in '" + w.frame + "' but joint tests in '" + frame + "'");
  }
  return std::visit(Overloaded{
                        [&](const CircularPatchJoint& j) { return circular_patch_stable(j, w); },
                        [&](const PolygonPatchJoint& j) { return polygon_patch_stable(j, w); },
                        [&](const ArmJoint& j) {
                          if (!j.arm) throw std::invalid_argument("arm joint without an arm");
                          return torque_stable(*j.arm, j.q, w);
                        },
                        [&](const RigidJoint&) { return StabilityVerdict::from_margin(1.0); },
                    },
                    joint);
}

ChainLink make_link(const FrameTree& tree, const std::string& application_frame, JointModel joint, double load_share,
                    std::optional<Wrench> gravity, std::string label) {
  ChainLink link;
  link.to_joint = tree.lookup(joint_frame(joint), application_frame);
  link.joint = std::move(joint);
  link.load_share = load_share;
  link.gravity = std::move(gravity);
  link.label = std::move(label);
  return link;
}

Wrench link_load(const ChainLink& link, const Wrench& w_applied) {
  Wrench load = link.load_share * w_applied;
  if (link.gravity) load = load + *link.gravity;
  load.frame.clear();
  return transform_wrench(load, link.to_joint, joint_frame(link.joint));
}

StabilityVerdict chain_stable(const ForcefulKinematicChain& chain, const Wrench& w_applied) {
  if (!chain.application_frame.empty() && !w_applied.frame.empty() && chain.application_frame != w_applied.frame) {
    throw std::invalid_argument("applied wrench expressed in '" + w_applied.frame + "' but chain expects '" +
                                chain.application_frame + "'");
  }
  if (!w_applied.is_finite()) throw std::invalid_argument("applied wrench must be finite");
  StabilityVerdict out = StabilityVerdict::from_margin(1.0);
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    const StabilityVerdict v = joint_stable(chain.links[i].joint, link_load(chain.links[i], w_applied));
    if (v.margin < out.margin) out.margin = v.margin;
    if (!v.stable && !out.failing_joint) out.failing_joint = i;
  }
  out.stable = !out.failing_joint.has_value();
  return out;
}

}  // namespace ftamp
