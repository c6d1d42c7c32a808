#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace ftamp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Rigid transform x' = rotation * x + translation.
///
/// Used throughout as T_target_source: it maps coordinates expressed in the
/// source frame into the target frame.
struct Transform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Transform identity() { return {}; }
  static Transform translate(const Vec3& p);
  static Transform rotate(const Mat3& r);
  static Transform rot_x(double angle);
  static Transform rot_y(double angle);
  static Transform rot_z(double angle);
  /// Fixed-axis roll/pitch/yaw, R = Rz(yaw) * Ry(pitch) * Rx(roll).
  static Transform from_xyz_rpy(const Vec3& xyz, const Vec3& rpy);

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }

  bool is_valid(double tol = 1e-9) const;
};

/// Result maps points through b, then through a.
Transform compose(const Transform& a, const Transform& b);
Transform invert(const Transform& t);
bool approx_equal(const Transform& a, const Transform& b, double tol = 1e-9);

/// Axis-angle vector of the rotation taking `from` onto `to` (log map of to * from^T).
Vec3 rotation_error(const Mat3& from, const Mat3& to);
Mat3 exp_rotation(const Vec3& axis_angle);

/// 6D generalized force, ordered force-then-torque, torque taken about the
/// origin of `frame`.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  std::string frame;

  static Wrench from_vector(const Vec6& v, std::string frame = {});
  Vec6 vector() const;
  bool is_finite() const;
  bool is_zero() const { return force.isZero(0.0) && torque.isZero(0.0); }
};

Wrench operator+(const Wrench& a, const Wrench& b);
Wrench operator*(double s, const Wrench& w);

/// Re-expresses a wrench given t = T_target_source:
///   force'  = R f
///   torque' = R tau + p x (R f)
/// The result carries `target_frame` (or the source frame when empty).
Wrench transform_wrench(const Wrench& w, const Transform& t, const std::string& target_frame = {});

/// Twist [v; omega] with v the velocity of the point at the frame origin.
/// Dual of transform_wrench, so f.v + tau.omega is preserved.
Vec6 transform_twist(const Vec6& twist, const Transform& t);

/// Named frames arranged in a tree. Each frame stores its pose in its parent
/// (T_parent_frame); lookups compose along the path through the common root.
class FrameTree {
 public:
  explicit FrameTree(std::string root = "world");

  const std::string& root() const { return root_; }
  void add(const std::string& name, const std::string& parent, const Transform& pose_in_parent);
  void set_pose(const std::string& name, const Transform& pose_in_parent);
  bool contains(const std::string& name) const;
  std::vector<std::string> frames() const;

  /// Pose of `frame` in the root frame.
  Transform world_pose(const std::string& frame) const;
  /// T_target_source.
  Transform lookup(const std::string& target, const std::string& source) const;

 private:
  struct Node {
    std::string parent;
    Transform pose;
  };
  std::string root_;
  std::map<std::string, Node> nodes_;
};

}  // namespace ftamp
