#include "ftamp/spatial.hpp"

#include <cmath>
#include <stdexcept>

namespace ftamp {

Transform Transform::translate(const Vec3& p) {
  Transform t;
  t.translation = p;
  return t;
}

Transform Transform::rotate(const Mat3& r) {
  Transform t;
  t.rotation = r;
  return t;
}

Transform Transform::rot_x(double angle) {
  return rotate(Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix());
}

Transform Transform::rot_y(double angle) {
  return rotate(Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix());
}

Transform Transform::rot_z(double angle) {
  return rotate(Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix());
}

Transform Transform::from_xyz_rpy(const Vec3& xyz, const Vec3& rpy) {
  Transform t;
  t.rotation = (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
                Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
                Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
                   .toRotationMatrix();
  t.translation = xyz;
  return t;
}

bool Transform::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const Mat3 err = rotation.transpose() * rotation - Mat3::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Transform compose(const Transform& a, const Transform& b) {
  Transform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Transform invert(const Transform& t) {
  Transform out;
  out.rotation = t.rotation.transpose();
  out.translation = -(out.rotation * t.translation);
  return out;
}

bool approx_equal(const Transform& a, const Transform& b, double tol) {
  return (a.rotation - b.rotation).cwiseAbs().maxCoeff() <= tol &&
         (a.translation - b.translation).cwiseAbs().maxCoeff() <= tol;
}

Vec3 rotation_error(const Mat3& from, const Mat3& to) {
  const Eigen::AngleAxisd aa(Mat3(to * from.transpose()));
  return aa.axis() * aa.angle();
}

Mat3 exp_rotation(const Vec3& axis_angle) {
  const double angle = axis_angle.norm();
  if (angle < 1e-15) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
}

Wrench Wrench::from_vector(const Vec6& v, std::string frame) {
  Wrench w;
  w.force = v.head<3>();
  w.torque = v.tail<3>();
  w.frame = std::move(frame);
  return w;
}

Vec6 Wrench::vector() const {
  Vec6 v;
  v << force, torque;
  return v;
}

bool Wrench::is_finite() const { return force.allFinite() && torque.allFinite(); }

Wrench operator+(const Wrench& a, const Wrench& b) {
  Wrench w;
  w.force = a.force + b.force;
  w.torque = a.torque + b.torque;
  w.frame = a.frame;
  return w;
}

Wrench operator*(double s, const Wrench& w) {
  Wrench out = w;
  out.force *= s;
  out.torque *= s;
  return out;
}

Wrench transform_wrench(const Wrench& w, const Transform& t, const std::string& target_frame) {
  Wrench out;
  out.force = t.rotation * w.force;
  out.torque = t.rotation * w.torque + t.translation.cross(out.force);
  out.frame = target_frame.empty() ? w.frame : target_frame;
  return out;
}

Vec6 transform_twist(const Vec6& twist, const Transform& t) {
  const Vec3 omega = t.rotation * twist.tail<3>();
  Vec6 out;
  out.head<3>() = t.rotation * twist.head<3>() + t.translation.cross(omega);
  out.tail<3>() = omega;
  return out;
}

FrameTree::FrameTree(std::string root) : root_(std::move(root)) {}

void FrameTree::add(const std::string& name, const std::string& parent, const Transform& pose_in_parent) {
  if (name == root_ || nodes_.count(name)) throw std::invalid_argument("frame already exists: " + name);
  if (!contains(parent)) throw std::out_of_range("unknown parent frame: " + parent);
  nodes_[name] = Node{parent, pose_in_parent};
}

void FrameTree::set_pose(const std::string& name, const Transform& pose_in_parent) {
  auto it = nodes_.find(name);
  if (it == nodes_.end()) throw std::out_of_range("unknown frame: " + name);
  it->second.pose = pose_in_parent;
}

bool FrameTree::contains(const std::string& name) const { return name == root_ || nodes_.count(name) > 0; }

std::vector<std::string> FrameTree::frames() const {
  std::vector<std::string> out{root_};
  for (const auto& [name, node] : nodes_) out.push_back(name);
  return out;
}

Transform FrameTree::world_pose(const std::string& frame) const {
  Transform pose;
  std::string current = frame;
  while (current != root_) {
    auto it = nodes_.find(current);
    if (it == nodes_.end()) throw std::out_of_range("unknown frame: " + current);
    pose = compose(it->second.pose, pose);
    current = it->second.parent;
  }
  return pose;
}

Transform FrameTree::lookup(const std::string& target, const std::string& source) const {
  return compose(invert(world_pose(target)), world_pose(source));
}

}  // namespace ftamp
