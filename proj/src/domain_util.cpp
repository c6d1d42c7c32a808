#include "domain_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ftamp {

std::optional<Config> solve_ik(const SerialArm& arm, const Transform& target, int attempt) {
  constexpr int kSeedsPerAttempt = 3;
  const Vec3 local = invert(arm.base).apply(target.translation);
  const double yaw = std::atan2(local.y(), local.x());
  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(attempt));
  for (int k = 0; k < kSeedsPerAttempt; ++k) {
    const int index = attempt * kSeedsPerAttempt + k;
    Config seed = default_home(arm);
    if (index > 0) {
      for (std::size_t j = 0; j < arm.dof(); ++j) {
        const auto& joint = arm.joints[j];
        std::uniform_real_distribution<double> u(0.5 * joint.min_position, 0.5 * joint.max_position);
        seed(static_cast<Eigen::Index>(j)) = u(rng);
      }
    }
    if (seed.size() > 0) {
      const auto& j0 = arm.joints.front();
      seed(0) = std::clamp(yaw, j0.min_position, j0.max_position);
    }
    if (auto q = ik(arm, target, seed)) return q;
  }
  return std::nullopt;
}

namespace detail {

Json vec_json(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Eigen::VectorXd json_vec(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

Vec3 json_vec3(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Json pose_json(const std::string& object, const std::string& surface, const Vec3& xyz, double yaw) {
  return Json{{"object", object}, {"surface", surface}, {"xyz", vec_json(xyz)}, {"yaw", yaw}};
}

Transform json_pose(const Json& j) {
  return Transform::from_xyz_rpy(json_vec3(j.at("xyz")), Vec3(0.0, 0.0, j.at("yaw").get<double>()));
}

ArmMap make_arms(const std::vector<SerialArm>& arms) {
  ArmMap out;
  for (const auto& a : arms) out.emplace(a.name, std::make_shared<const SerialArm>(a));
  return out;
}

Json conf_json(const std::string& robot, const Config& q) { return Json{{"robot", robot}, {"q", vec_json(q)}}; }

Config json_conf(const Json& j) { return json_vec(j.at("q")); }

bool reaches(const SerialArm& arm, const Config& q, const Transform& target) {
  if (static_cast<std::size_t>(q.size()) != arm.dof() || !arm.within_limits(q, 1e-9)) return false;
  return pose_error(fk(arm, q), target) < 2e-4;
}

Transform lifted(const Transform& t, double dz) {
  Transform out = t;
  out.translation.z() += dz;
  return out;
}

planner::Value value(const std::string& label_prefix, Json payload) {
  planner::Value v;
  v.label = label_prefix;
  v.payload = std::move(payload);
  return v;
}

planner::Stream motion_stream(const ArmMap& arms) {
  planner::Stream s;
  s.name = "plan-motion";
  s.inputs = {{"?r", "robot"}, {"?q1", "conf"}, {"?q2", "conf"}};
  s.domain = {{"Conf", {"?r", "?q1"}}, {"Conf", {"?r", "?q2"}}};
  s.outputs = {{"?t", "path"}};
  s.certified = {{"Motion", {"?r", "?q1", "?q2", "?t"}}};
  s.sample = [arms](const planner::ValueTable& v, const planner::Binding& in, std::uint64_t, int) {
    std::vector<planner::StreamOutput> out;
    if (in[1] == in[2]) return out;
    const auto& arm = *arms.at(v[in[0]].label);
    const Config a = json_conf(v[in[1]].payload);
    const Config b = json_conf(v[in[2]].payload);
    if (!arm.within_limits(a, 1e-9) || !arm.within_limits(b, 1e-9)) return out;
    // Joint-space straight line; the joint box is convex so every waypoint
    // stays within limits.
    const double span = (b - a).cwiseAbs().maxCoeff();
    const int steps = std::max(1, static_cast<int>(std::ceil(span / 0.05)));
    out.push_back({value("t", Json{{"robot", v[in[0]].label}, {"from", vec_json(a)}, {"to", vec_json(b)},
                                   {"steps", steps}})});
    return out;
  };
  s.check = [arms](const planner::ValueTable& v, const planner::Binding& in, const planner::Binding& out) {
    const auto& arm = *arms.at(v[in[0]].label);
    const Json& path = v[out[0]].payload;
    const Config a = json_vec(path.at("from"));
    const Config b = json_vec(path.at("to"));
    return a.isApprox(json_conf(v[in[1]].payload), 0.0) && b.isApprox(json_conf(v[in[2]].payload), 0.0) &&
           arm.within_limits(a, 1e-9) && arm.within_limits(b, 1e-9);
  };
  s.calls_per_level = 1;
  s.max_calls = 1;
  return s;
}

planner::Stream kin_stream(std::string name, std::vector<planner::Param> inputs, std::vector<planner::Atom> domain,
                           std::vector<planner::Atom> certified, std::string robot_param, const ArmMap& arms,
                           std::function<std::optional<Transform>(const planner::ValueTable&, const planner::Binding&)>
                               target,
                           std::string label_prefix) {
  planner::Stream s;
  s.name = std::move(name);
  s.inputs = std::move(inputs);
  s.domain = std::move(domain);
  s.outputs = {{"?q", "conf"}};
  s.certified = std::move(certified);
  std::size_t robot_index = 0;
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    if (s.inputs[i].name == robot_param) robot_index = i;
  }
  s.sample = [arms, target, robot_index, label_prefix](const planner::ValueTable& v, const planner::Binding& in,
                                                      std::uint64_t, int attempt) {
    std::vector<planner::StreamOutput> out;
    const std::string& robot = v[in[robot_index]].label;
    const auto t = target(v, in);
    if (!t) return out;
    if (auto q = solve_ik(*arms.at(robot), *t, attempt)) {
      out.push_back({value(label_prefix + "-" + robot + "-", conf_json(robot, *q))});
    }
    return out;
  };
  s.check = [arms, target, robot_index](const planner::ValueTable& v, const planner::Binding& in,
                                        const planner::Binding& out) {
    const auto t = target(v, in);
    const auto& arm = *arms.at(v[in[robot_index]].label);
    return t && reaches(arm, json_conf(v[out[0]].payload), *t);
  };
  s.calls_per_level = 1;
  s.max_calls = 2;
  return s;
}

planner::ActionSchema move_schema() {
  planner::ActionSchema a;
  a.id = "move";
  a.name = "move";
  a.params = {{"?r", "robot"}, {"?q1", "conf"}, {"?q2", "conf"}, {"?t", "path"}};
  a.preconditions = {{"Motion", {"?r", "?q1", "?q2", "?t"}}, {"AtConf", {"?r", "?q1"}}};
  a.add = {{"AtConf", {"?r", "?q2"}}};
  a.del = {{"AtConf", {"?r", "?q1"}}};
  return a;
}

Json impedance_json(const Wrench& w, const Vec6& stiffness) {
  const ImpedanceCommand cmd = impedance_command(w, stiffness);
  return Json{{"wrench", vec_json(w.vector())},
              {"stiffness", vec_json(cmd.stiffness_kp)},
              {"damping", vec_json(cmd.damping_kd)},
              {"pose_offset", vec_json(cmd.pose_offset)}};
}

void add_fact(planner::Problem& p, const std::string& predicate, const std::vector<std::string>& labels) {
  p.init.push_back(p.fact(predicate, labels));
}

planner::StepCost chain_cost(const std::vector<std::pair<ForcefulKinematicChain, Wrench>>& parts,
                             const PerturbationSpec& spec) {
  planner::StepCost c;
  c.margin = std::numeric_limits<double>::infinity();
  for (const auto& [chain, w] : parts) {
    c.margin = std::min(c.margin, chain_stable(chain, w).margin);
    const double p = success_probability(chain, w, spec);
    c.cost += action_cost(p).cost;
  }
  if (std::isinf(c.margin) && c.margin > 0) c.margin = 1.0;
  return c;
}

}  // namespace detail
}  // namespace ftamp
