#pragma once

#include "ftamp/robot.hpp"
#include "ftamp/spatial.hpp"
#include "ftamp/verdict.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ftamp {

// Joint test frames use z along the contact normal, pointing out of the
// supporting body toward the body that loads it. Wrenches handed to a joint
// are the load it must transmit, so compression has f_z <= 0.

/// Uniform-pressure circular patch. Friction wrenches live in (f_x, f_y, m_z)
/// and are bounded by an ellipsoidal limit surface with k = 0.6 r.
struct CircularPatchJoint {
  double mu = 0.5;
  double radius = 0.01;
  double normal_force = 0.0;
  std::string frame;

  double k() const { return 0.6 * radius; }
};

/// Patch modelled by point contacts at its corners, each with a pyramidal
/// friction cone and a normal preload.
struct PolygonPatchJoint {
  double mu = 0.5;
  std::vector<Vec3> corners;  // patch frame, z = 0
  std::vector<double> corner_normal_forces;
  std::string frame;

  void validate() const;
  /// Wrench the supporting surface already supplies against static loads.
  Wrench preload() const;
};

/// Robot joints, checked against torque limits. The test frame sits at the
/// end-effector point with the arm's base orientation.
struct ArmJoint {
  std::shared_ptr<const SerialArm> arm;
  Config q;
  std::string frame;
};

/// Fixtures such as a vise or a second robot's grasp.
struct RigidJoint {
  std::string frame;
};

using JointModel = std::variant<CircularPatchJoint, PolygonPatchJoint, ArmJoint, RigidJoint>;

const std::string& joint_frame(const JointModel& joint);
std::string joint_kind(const JointModel& joint);

/// (tangential, tangential, normal moment) = (f_x, f_y, m_z) in a z-normal
/// contact frame.
struct PlanarWrench {
  double fx = 0.0;
  double fy = 0.0;
  double mz = 0.0;
};

/// Ellipsoidal limit surface:
///   f_x^2/(N mu)^2 + f_y^2/(N mu)^2 + m_z^2/(N k mu)^2 < 1,   k = 0.6 r.
/// margin = 1 - quadratic form. N = 0 with a nonzero load gives -inf.
StabilityVerdict limit_surface_stable(const PlanarWrench& w, const CircularPatchJoint& joint);
double limit_surface_form(const PlanarWrench& w, const CircularPatchJoint& joint);

/// Four pyramid edges (+-mu, 0, 1), (0, +-mu, 1) per loaded corner, scaled by
/// the corner normal force and mapped to the patch origin. Corners without
/// load are dropped; duplicate edges (mu = 0) are merged.
std::vector<Wrench> friction_cone_generators(const PolygonPatchJoint& joint);

/// Membership of w in the cone spanned by `generators`.
///
/// margin is the normalized depth t* = max{ t <= 1 : w/|w| = sum l_i g_i/|g_i|,
/// l_i >= t }, which is positive exactly on the relative interior, zero on the
/// boundary and negative outside; -inf when w is not in the span.
StabilityVerdict in_convex_cone(const Wrench& w, const std::vector<Wrench>& generators);

/// Largest a >= 0 with (base - a w) in cone(generators), capped at `cap`.
/// Returns 0 when even the base wrench is outside.
double max_cone_scale(const Wrench& base, const Wrench& w, const std::vector<Wrench>& generators,
                      double cap = 1e6);

struct BeamReactions {
  double left = 0.0;
  double right = 0.0;
};

/// Simply supported beam with a uniform load of total mass `mass` spread over
/// `extent`, centred `center` meters from the left support.
BeamReactions beam_support_forces(double beam_length, double mass, double center, double extent,
                                  double gravity = 9.81);

/// Rectangular beam-on-table patch centred on the beam, x along its length.
/// Each support reaction is split evenly over the two corners at that end.
PolygonPatchJoint beam_patch_joint(double beam_length, double beam_width, double mu, const BeamReactions& reactions,
                                   std::string frame = {});

/// Dispatches to the joint's model; `w` must be expressed in the joint frame.
/// Throws std::invalid_argument on a frame mismatch.
StabilityVerdict joint_stable(const JointModel& joint, const Wrench& w);

struct ChainLink {
  JointModel joint;
  Transform to_joint;  // T_joint_application
  double load_share = 1.0;
  /// Additional load expressed in the application frame, not scaled by load_share.
  std::optional<Wrench> gravity;
  std::string label;
};

/// Joints through which a wrench exerted at `application_frame` must flow.
struct ForcefulKinematicChain {
  std::string application_frame;
  std::vector<ChainLink> links;
};

/// Chain link whose transform is resolved through the frame tree. Throws
/// std::out_of_range when either frame is missing.
ChainLink make_link(const FrameTree& tree, const std::string& application_frame, JointModel joint,
                    double load_share = 1.0, std::optional<Wrench> gravity = std::nullopt, std::string label = {});

/// Load seen by link `i` for an applied wrench.
Wrench link_load(const ChainLink& link, const Wrench& w_applied);

/// Stable iff every joint is stable; margin is the minimum over joints and
/// failing_joint the first joint with margin <= 0.
StabilityVerdict chain_stable(const ForcefulKinematicChain& chain, const Wrench& w_applied);

}  // namespace ftamp
