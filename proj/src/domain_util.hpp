#pragma once

#include "ftamp/domains.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ftamp::detail {

using planner::Json;

Json vec_json(const Eigen::VectorXd& v);
Eigen::VectorXd json_vec(const Json& j);
Vec3 json_vec3(const Json& j);

/// Poses are stored as position plus yaw.
Json pose_json(const std::string& object, const std::string& surface, const Vec3& xyz, double yaw);
Transform json_pose(const Json& j);

using ArmMap = std::map<std::string, std::shared_ptr<const SerialArm>>;
ArmMap make_arms(const std::vector<SerialArm>& arms);

Json conf_json(const std::string& robot, const Config& q);
Config json_conf(const Json& j);

/// True when q is within limits and fk(q) matches target.
bool reaches(const SerialArm& arm, const Config& q, const Transform& target);

/// Lifted copy of a target, used for retreat configurations.
Transform lifted(const Transform& t, double dz);

planner::Value value(const std::string& label_prefix, Json payload);

planner::Stream motion_stream(const ArmMap& arms);
/// Single conf output reaching `target(values, inputs)`.
planner::Stream kin_stream(std::string name, std::vector<planner::Param> inputs, std::vector<planner::Atom> domain,
                           std::vector<planner::Atom> certified, std::string robot_param, const ArmMap& arms,
                           std::function<std::optional<Transform>(const planner::ValueTable&, const planner::Binding&)>
                               target,
                           std::string label_prefix);

planner::ActionSchema move_schema();

Json impedance_json(const Wrench& w, const Vec6& stiffness);

/// Joins the labels of the initial values into (predicate, args) facts.
void add_fact(planner::Problem& p, const std::string& predicate, const std::vector<std::string>& labels);

planner::StepCost chain_cost(const std::vector<std::pair<ForcefulKinematicChain, Wrench>>& parts,
                             const PerturbationSpec& spec);

}  // namespace ftamp::detail
