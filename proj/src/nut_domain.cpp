#include "domain_util.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ftamp {
namespace {

using detail::Json;
using planner::Binding;
using planner::StreamOutput;
using planner::ValueId;
using planner::ValueTable;

constexpr double kRetreat = 0.05;          // m
constexpr double kSpannerThickness = 0.01;  // m
constexpr double kBeamGraspOffset = 0.2;   // m, from the beam center toward +x

Transform beam_pose(const NutScene& s) { return Transform::translate(s.beam.center); }

Transform nut_frame(const NutScene& s) {
  return compose(beam_pose(s), Transform::translate(Vec3(s.nut.x, 0, s.beam.height + s.nut.height)));
}

Transform slot_pose(const NutScene& s) {
  return compose(beam_pose(s), Transform::translate(Vec3(s.weight_slot, 0, s.beam.height)));
}

// Top-down grasp at (x, 0, height) in the object frame.
Transform grasp_transform(const Json& g) {
  return compose(Transform::translate(Vec3(g.value("x", 0.0), 0, g.at("height").get<double>())),
                 Transform::rot_x(std::numbers::pi));
}

Json top_grasp(const std::string& object, double x, double height) {
  return Json{{"object", object}, {"type", "top"}, {"x", x}, {"height", height}};
}

const Weight* find_weight(const NutScene& s, const std::string& name) {
  for (const auto& w : s.weights) {
    if (w.name == name) return &w;
  }
  return nullptr;
}

Wrench nut_wrench(double t_z) {
  Wrench w;
  w.torque = Vec3(0, 0, t_z);
  w.frame = "nut";
  return w;
}

// Handle force the hand applies at the spanner grip to produce t_z at the nut.
Wrench handle_force(const NutScene& s, double t_z) {
  Wrench w;
  w.force = Vec3(0, t_z / s.spanner.value_or(NutScene::Spanner{}).handle_length, 0);
  w.frame = "spanner-grip";
  return w;
}

ForcefulKinematicChain spanner_chain(const NutScene& s, const std::shared_ptr<const SerialArm>& arm,
                                     const Config& q) {
  const double length = s.spanner.value_or(NutScene::Spanner{}).handle_length;
  FrameTree tree;
  tree.add("nut", "world", nut_frame(s));
  tree.add("spanner-grip", "nut", Transform::translate(Vec3(length, 0, kSpannerThickness)));
  ForcefulKinematicChain chain;
  chain.application_frame = "spanner-grip";
  PolygonPatchJoint pads;
  pads.mu = s.hand.mu;
  pads.frame = "spanner-grip";
  const double hx = s.hand.pad_half_x;
  const double hy = s.hand.pad_half_y;
  pads.corners = {Vec3(-hx, -hy, 0), Vec3(-hx, hy, 0), Vec3(hx, -hy, 0), Vec3(hx, hy, 0)};
  pads.corner_normal_forces.assign(4, s.hand.grip_force / 4.0);
  chain.links.push_back(make_link(tree, "spanner-grip", pads, 1.0, std::nullopt, "hand-spanner"));
  chain.links.push_back(make_link(tree, "spanner-grip", RigidJoint{"nut"}, 1.0, std::nullopt, "spanner-nut"));
  if (arm) {
    tree.add("ee", "world", Transform::translate(fk(*arm, q).translation));
    chain.links.push_back(make_link(tree, "spanner-grip", ArmJoint{arm, q, "ee"}, 1.0, std::nullopt, arm->name));
  }
  return chain;
}

ForcefulKinematicChain arm_chain(const std::shared_ptr<const SerialArm>& arm, const Config& q,
                                 const Transform& application, const std::string& frame) {
  FrameTree tree;
  tree.add(frame, "world", application);
  tree.add("ee", "world", Transform::translate(fk(*arm, q).translation));
  ForcefulKinematicChain chain;
  chain.application_frame = frame;
  chain.links.push_back(make_link(tree, frame, ArmJoint{arm, q, "ee"}, 1.0, std::nullopt, arm->name));
  return chain;
}

}  // namespace

const std::set<std::string>& nut_disable_codes() {
  static const std::set<std::string> codes = {"rf", "weight", "finger", "spanner"};
  return codes;
}

NutScene apply_nut_disables(const NutScene& scene, const std::set<std::string>& disable) {
  NutScene s = scene;
  for (const auto& code : disable) {
    if (!nut_disable_codes().count(code)) throw std::invalid_argument("unknown nut disable code '" + code + "'");
  }
  if (disable.count("rf") && s.arms.size() > 1) s.arms.resize(1);
  if (disable.count("weight")) s.weights.clear();
  if (disable.count("spanner")) s.spanner.reset();
  return s;
}

PolygonPatchJoint beam_table_joint(const NutScene& scene, std::optional<double> weight_mass, double weight_extent) {
  const auto& b = scene.beam;
  BeamReactions r = beam_support_forces(b.length, b.mass, b.length / 2.0, b.length, kGravity);
  if (weight_mass) {
    const BeamReactions w =
        beam_support_forces(b.length, *weight_mass, b.length / 2.0 + scene.weight_slot, weight_extent, kGravity);
    r.left += w.left;
    r.right += w.right;
  }
  return beam_patch_joint(b.length, b.width, b.mu, r, "beam");
}

ForcefulKinematicChain beam_fixture_chain(const NutScene& scene, std::optional<double> weight_mass,
                                          double weight_extent) {
  FrameTree tree;
  tree.add("beam", "world", beam_pose(scene));
  tree.add("nut", "world", nut_frame(scene));
  ForcefulKinematicChain chain;
  chain.application_frame = "nut";
  chain.links.push_back(make_link(tree, "nut", beam_table_joint(scene, weight_mass, weight_extent), 1.0,
                                  std::nullopt, "beam-table"));
  return chain;
}

ForcefulKinematicChain weight_grasp_chain(const NutScene& scene, const Weight& weight, Wrench& load) {
  // Jaws close along world y; the center of mass sits weight_com_offset from
  // the pinch axis, so gravity also spins the weight about the jaw normal.
  // The patch stands for both jaws, each squeezing with weight_grip_force.
  FrameTree tree;
  tree.add("weight", "world", Transform::identity());
  tree.add("pinch", "weight",
           compose(Transform::translate(Vec3(scene.weight_com_offset, 0, 0)), Transform::rot_x(-std::numbers::pi / 2)));
  load = Wrench{};
  load.force = Vec3(0, 0, -weight.mass * kGravity);
  load.frame = "weight";
  ForcefulKinematicChain chain;
  chain.application_frame = "weight";
  // The squeeze presses the jaws onto the weight, as a commanded push does.
  const double squeeze = 2.0 * scene.weight_grip_force;
  Wrench press;
  press.force = Vec3(0, 0, -squeeze);
  press.frame = "pinch";
  chain.links.push_back(make_link(tree, "weight",
                                  CircularPatchJoint{scene.hand.mu, scene.weight_pinch_radius, squeeze, "pinch"}, 1.0,
                                  transform_wrench(press, tree.lookup("weight", "pinch"), "weight"), "hand-weight"));
  return chain;
}

ForcefulKinematicChain finger_twist_chain(const NutScene& scene, const std::shared_ptr<const SerialArm>& arm,
                                          const Config& q) {
  FrameTree tree;
  tree.add("nut", "world", nut_frame(scene));
  ForcefulKinematicChain chain;
  chain.application_frame = "nut";
  chain.links.push_back(make_link(tree, "nut",
                                  CircularPatchJoint{scene.hand.mu, scene.nut.radius, scene.nut.grip_force, "nut"}, 1.0,
                                  std::nullopt, "fingers-nut"));
  if (arm) {
    tree.add("ee", "world", Transform::translate(fk(*arm, q).translation));
    chain.links.push_back(make_link(tree, "nut", ArmJoint{arm, q, "ee"}, 1.0, std::nullopt, arm->name));
  }
  return chain;
}

DomainProblem nut_domain(const NutScene& scene_in, const NutOperation& op, const DomainSettings& settings) {
  const NutScene scene = apply_nut_disables(scene_in, settings.disable);
  if (scene.arms.empty()) throw std::invalid_argument("nut scene needs at least one arm");
  for (const auto& a : scene.arms) a.validate();
  if (std::abs(scene.nut.x) > scene.beam.length / 2.0) throw std::invalid_argument("nut lies off the beam");
  for (const auto& w : scene.weights) {
    if (!(w.mass > 0.0) || !(w.radius > 0.0) || !(w.height > 0.0)) {
      throw std::invalid_argument("weight '" + w.name + "' needs positive mass and size");
    }
  }
  settings.perturbation.validate();

  const auto S = std::make_shared<const NutScene>(scene);
  const detail::ArmMap arms = detail::make_arms(scene.arms);
  const PerturbationSpec spec = settings.perturbation;
  const Vec6 stiffness = settings.stiffness;

  std::vector<std::string> methods;
  if (!settings.disable.count("finger")) methods.push_back("finger");
  if (scene.spanner) methods.push_back("spanner");

  DomainProblem out;
  planner::Problem& p = out.problem;
  const std::string twister = scene.arms.front().name;
  for (const auto& a : scene.arms) {
    p.add_value("robot", a.name);
    p.add_value("conf", "q-home-" + a.name, detail::conf_json(a.name, default_home(a)));
  }
  p.add_value("object", "nut");
  p.add_value("object", "beam", Json{{"mass", scene.beam.mass}});
  p.add_value("pose", "p-beam", detail::pose_json("beam", "table", scene.beam.center, 0.0));
  if (scene.spanner) {
    p.add_value("object", "spanner");
    p.add_value("pose", "p-spanner-rest", detail::pose_json("spanner", "table", scene.spanner->rest, 0.0));
  }
  for (const auto& w : scene.weights) {
    p.add_value("object", w.name, Json{{"mass", w.mass}});
    p.add_value("pose", "p-" + w.name + "-rest", detail::pose_json(w.name, "table", w.rest, 0.0));
  }
  for (const auto& m : methods) p.add_value("method", "m-" + m);
  p.add_value("wrench", "w-nut", Json{{"t_z", op.t_z}});

  using detail::add_fact;
  for (const auto& a : scene.arms) {
    add_fact(p, "Arm", {a.name});
    add_fact(p, "AtConf", {a.name, "q-home-" + a.name});
    add_fact(p, "Conf", {a.name, "q-home-" + a.name});
    add_fact(p, "HandEmpty", {a.name});
    if (a.name != twister) {
      add_fact(p, "Other", {twister, a.name});
      add_fact(p, "Helper", {a.name});
    }
  }
  add_fact(p, "Twister", {twister});
  add_fact(p, "Pose", {"beam", "p-beam"});
  add_fact(p, "Graspable", {"beam"});
  if (scene.spanner) {
    add_fact(p, "AtPose", {"spanner", "p-spanner-rest"});
    add_fact(p, "Pose", {"spanner", "p-spanner-rest"});
    add_fact(p, "Stow", {"spanner", "p-spanner-rest"});
    add_fact(p, "Movable", {"spanner"});
    add_fact(p, "Graspable", {"spanner"});
  }
  for (const auto& w : scene.weights) {
    const std::string rest = "p-" + w.name + "-rest";
    add_fact(p, "Weight", {w.name});
    add_fact(p, "AtPose", {w.name, rest});
    add_fact(p, "Pose", {w.name, rest});
    add_fact(p, "Stow", {w.name, rest});
    add_fact(p, "Movable", {w.name});
    add_fact(p, "Graspable", {w.name});
  }
  for (const auto& m : methods) add_fact(p, "Method", {"m-" + m});
  add_fact(p, "Operation", {"nut", "w-nut"});
  p.goal.push_back(p.fact("Twisted", {"nut"}));

  // Pinch stability of a weight grasp, hand only.
  auto pinch_ok = [S](const std::string& name) {
    const Weight* w = find_weight(*S, name);
    Wrench load;
    const auto chain = weight_grasp_chain(*S, *w, load);
    return chain_stable(chain, load).stable;
  };

  // --- streams ---
  {
    planner::Stream s;
    s.name = "sample-grasp";
    s.inputs = {{"?o", "object"}};
    s.domain = {{"Graspable", {"?o"}}};
    s.outputs = {{"?g", "grasp"}};
    s.certified = {{"Grasp", {"?o", "?g"}}};
    s.sample = [S, pinch_ok](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      std::vector<StreamOutput> out;
      const std::string object = v[in[0]].label;
      if (object == "beam") {
        out.push_back({detail::value("g-beam-", top_grasp(object, kBeamGraspOffset, S->beam.height))});
      } else if (object == "spanner") {
        out.push_back({detail::value("g-spanner-", top_grasp(object, S->spanner->handle_length, kSpannerThickness))});
      } else if (const Weight* w = find_weight(*S, object)) {
        if (pinch_ok(object)) out.push_back({detail::value("g-" + object + "-", top_grasp(object, 0.0, w->height))});
      }
      return out;
    };
    s.check = [S, pinch_ok](const ValueTable& v, const Binding& in, const Binding& o) {
      const std::string object = v[in[0]].label;
      if (v[o[0]].payload.at("object") != object) return false;
      return !find_weight(*S, object) || pinch_ok(object);
    };
    p.streams.push_back(std::move(s));
  }
  {
    planner::Stream s;
    s.name = "sample-weight-slot";
    s.inputs = {{"?m", "object"}};
    s.domain = {{"Weight", {"?m"}}};
    s.outputs = {{"?p", "pose"}};
    s.certified = {{"Pose", {"?m", "?p"}}, {"OnBeam", {"?m", "?p"}}};
    s.sample = [S](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      const std::string m = v[in[0]].label;
      return std::vector<StreamOutput>{
          {detail::value("p-" + m + "-slot-", detail::pose_json(m, "beam", slot_pose(*S).translation, 0.0))}};
    };
    s.check = [S](const ValueTable& v, const Binding&, const Binding& o) {
      return (detail::json_vec3(v[o[0]].payload.at("xyz")) - slot_pose(*S).translation).norm() < 1e-9;
    };
    p.streams.push_back(std::move(s));
  }
  p.streams.push_back(detail::kin_stream(
      "plan-grasp-kin", {{"?r", "robot"}, {"?o", "object"}, {"?p", "pose"}, {"?g", "grasp"}},
      {{"Arm", {"?r"}}, {"Pose", {"?o", "?p"}}, {"Grasp", {"?o", "?g"}}},
      {{"Kin", {"?r", "?o", "?p", "?g", "?q"}}, {"Conf", {"?r", "?q"}}}, "?r", arms,
      [](const ValueTable& v, const Binding& in) -> std::optional<Transform> {
        return compose(detail::json_pose(v[in[2]].payload), grasp_transform(v[in[3]].payload));
      },
      "q-pick"));
  {
    planner::Stream s;
    s.name = "sample-twist-grasp";
    s.inputs = {{"?k", "method"}};
    s.domain = {{"Method", {"?k"}}};
    s.outputs = {{"?g", "grasp"}};
    s.certified = {{"TwistGrasp", {"?k", "?g"}}};
    s.sample = [](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      const std::string k = v[in[0]].label.substr(2);
      return std::vector<StreamOutput>{{detail::value("g-" + k + "-", Json{{"method", k}})}};
    };
    s.check = [](const ValueTable& v, const Binding& in, const Binding& o) {
      return "m-" + v[o[0]].payload.at("method").get<std::string>() == v[in[0]].label;
    };
    p.streams.push_back(std::move(s));
  }
  auto twist_target = [S](const std::string& method) {
    Transform t = nut_frame(*S);
    if (method == "spanner") {
      t = compose(t, Transform::translate(Vec3(S->spanner->handle_length, 0, kSpannerThickness)));
    }
    return compose(t, Transform::rot_x(std::numbers::pi));
  };
  {
    planner::Stream s;
    s.name = "plan-nut-kin";
    s.inputs = {{"?r", "robot"}, {"?k", "method"}, {"?g", "grasp"}};
    s.domain = {{"Twister", {"?r"}}, {"TwistGrasp", {"?k", "?g"}}};
    s.outputs = {{"?q", "conf"}, {"?qe", "conf"}};
    s.certified = {{"NutKin", {"?r", "?g", "?q"}},
                   {"Retract", {"?r", "?q", "?qe"}},
                   {"Conf", {"?r", "?q"}},
                   {"Conf", {"?r", "?qe"}}};
    s.sample = [arms, twist_target](const ValueTable& v, const Binding& in, std::uint64_t, int attempt) {
      std::vector<StreamOutput> out;
      const std::string robot = v[in[0]].label;
      const std::string method = v[in[1]].label.substr(2);
      const SerialArm& arm = *arms.at(robot);
      const Transform t = twist_target(method);
      const auto q = solve_ik(arm, t, attempt);
      if (!q) return out;
      const auto qe = ik(arm, detail::lifted(t, kRetreat), *q);
      if (!qe) return out;
      out.push_back({detail::value("q-" + method + "-" + robot + "-", detail::conf_json(robot, *q)),
                     detail::value("q-" + method + "-up-" + robot + "-", detail::conf_json(robot, *qe))});
      return out;
    };
    s.check = [arms, twist_target](const ValueTable& v, const Binding& in, const Binding& o) {
      const SerialArm& arm = *arms.at(v[in[0]].label);
      const Transform t = twist_target(v[in[1]].label.substr(2));
      return detail::reaches(arm, detail::json_conf(v[o[0]].payload), t) &&
             detail::reaches(arm, detail::json_conf(v[o[1]].payload), detail::lifted(t, kRetreat));
    };
    s.max_calls = 2;
    p.streams.push_back(std::move(s));
  }

  // Nominal twist chain for a method, including the arm.
  auto twist_parts = [S, arms](const ValueTable& v, ValueId robot, ValueId grasp, ValueId conf, ValueId wrench) {
    const auto& arm = arms.at(v[robot].label);
    const Config q = detail::json_conf(v[conf].payload);
    const double t_z = v[wrench].payload.at("t_z").get<double>();
    if (v[grasp].payload.at("method") == "spanner") return std::make_pair(spanner_chain(*S, arm, q), handle_force(*S, t_z));
    return std::make_pair(finger_twist_chain(*S, arm, q), nut_wrench(t_z));
  };
  auto twist_ok = [twist_parts](const ValueTable& v, const Binding& in) {
    const auto [chain, w] = twist_parts(v, in[0], in[1], in[2], in[3]);
    return chain_stable(chain, w).stable;
  };
  {
    planner::Stream s;
    s.name = "test-nut-twist-stable";
    s.inputs = {{"?r", "robot"}, {"?g", "grasp"}, {"?q", "conf"}, {"?w", "wrench"}};
    s.domain = {{"NutKin", {"?r", "?g", "?q"}}, {"Operation", {"nut", "?w"}}};
    s.certified = {{"NutTwistStable", {"?r", "?g", "?q", "?w"}}};
    s.sample = [twist_ok](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      return twist_ok(v, in) ? std::vector<StreamOutput>{{}} : std::vector<StreamOutput>{};
    };
    s.check = [twist_ok](const ValueTable& v, const Binding& in, const Binding&) { return twist_ok(v, in); };
    p.streams.push_back(std::move(s));
  }
  auto beam_ok = [S](const ValueTable& v, const Binding& in) {
    const Weight* w = find_weight(*S, v[in[0]].label);
    if (!w) return false;
    const auto chain = beam_fixture_chain(*S, w->mass, 2.0 * w->radius);
    return chain_stable(chain, nut_wrench(v[in[2]].payload.at("t_z").get<double>())).stable;
  };
  {
    planner::Stream s;
    s.name = "test-beam-fixture";
    s.inputs = {{"?m", "object"}, {"?p", "pose"}, {"?w", "wrench"}};
    s.domain = {{"OnBeam", {"?m", "?p"}}, {"Operation", {"nut", "?w"}}};
    s.certified = {{"BeamHolds", {"?m", "?p", "?w"}}};
    s.sample = [beam_ok](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      return beam_ok(v, in) ? std::vector<StreamOutput>{{}} : std::vector<StreamOutput>{};
    };
    s.check = [beam_ok](const ValueTable& v, const Binding& in, const Binding&) { return beam_ok(v, in); };
    p.streams.push_back(std::move(s));
  }
  p.streams.push_back(detail::motion_stream(arms));

  // --- schemas ---
  p.schemas.push_back(detail::move_schema());
  {
    planner::ActionSchema a;
    a.id = "pick";
    a.name = "pick";
    a.params = {{"?r", "robot"}, {"?o", "object"}, {"?p", "pose"}, {"?g", "grasp"}, {"?q", "conf"}};
    a.preconditions = {{"Kin", {"?r", "?o", "?p", "?g", "?q"}}, {"AtPose", {"?o", "?p"}}, {"HandEmpty", {"?r"}},
                       {"AtConf", {"?r", "?q"}},                {"Movable", {"?o"}}};
    a.add = {{"AtGrasp", {"?r", "?o", "?g"}}};
    a.del = {{"AtPose", {"?o", "?p"}}, {"HandEmpty", {"?r"}}};
    // Lifting a weight loads the pinch grasp and the arm with its weight.
    a.cost = [S, arms, spec](const ValueTable& v, const Binding& b) {
      const Weight* w = find_weight(*S, v[b[1]].label);
      if (!w) return planner::StepCost{};
      Wrench load;
      const auto grasp = weight_grasp_chain(*S, *w, load);
      const Transform at = detail::json_pose(v[b[2]].payload);
      const auto arm = arm_chain(arms.at(v[b[0]].label), detail::json_conf(v[b[4]].payload),
                                 compose(at, Transform::translate(Vec3(0, 0, 0.5 * w->height))), "weight");
      return detail::chain_cost({{grasp, load}, {arm, load}}, spec);
    };
    p.schemas.push_back(std::move(a));
  }
  {
    planner::ActionSchema a;
    a.id = "place";
    a.name = "place";
    a.params = {{"?r", "robot"}, {"?o", "object"}, {"?p", "pose"}, {"?g", "grasp"}, {"?q", "conf"}};
    a.preconditions = {{"Kin", {"?r", "?o", "?p", "?g", "?q"}}, {"Stow", {"?o", "?p"}},
                       {"AtGrasp", {"?r", "?o", "?g"}},           {"AtConf", {"?r", "?q"}}};
    a.add = {{"AtPose", {"?o", "?p"}}, {"HandEmpty", {"?r"}}};
    a.del = {{"AtGrasp", {"?r", "?o", "?g"}}};
    p.schemas.push_back(std::move(a));
  }
  if (!scene.weights.empty()) {
    planner::ActionSchema a;
    a.id = "place-weight";
    a.name = "place-weight";
    a.params = {{"?r", "robot"}, {"?m", "object"}, {"?p", "pose"}, {"?g", "grasp"}, {"?q", "conf"}};
    a.preconditions = {{"Kin", {"?r", "?m", "?p", "?g", "?q"}}, {"OnBeam", {"?m", "?p"}},
                       {"AtGrasp", {"?r", "?m", "?g"}},           {"AtConf", {"?r", "?q"}}};
    a.add = {{"AtPose", {"?m", "?p"}}, {"HandEmpty", {"?r"}}, {"WeightOn", {"?m", "?p"}}};
    a.del = {{"AtGrasp", {"?r", "?m", "?g"}}};
    p.schemas.push_back(std::move(a));
  }
  if (scene.arms.size() > 1) {
    planner::ActionSchema a;
    a.id = "fixture-grasp";
    a.name = "fixture-grasp";
    a.params = {{"?r", "robot"}, {"?g", "grasp"}, {"?q", "conf"}};
    a.preconditions = {{"Helper", {"?r"}},
                       {"Kin", {"?r", "beam", "p-beam", "?g", "?q"}},
                       {"AtConf", {"?r", "?q"}},
                       {"HandEmpty", {"?r"}}};
    a.add = {{"BeamGrasped", {"?r"}}};
    a.del = {{"HandEmpty", {"?r"}}};
    p.schemas.push_back(std::move(a));
  }
  for (const auto& method : methods) {
    for (const std::string fix : {"rf", "weight"}) {
      if (fix == "rf" && scene.arms.size() < 2) continue;
      if (fix == "weight" && scene.weights.empty()) continue;
      planner::ActionSchema a;
      a.name = method == "finger" ? "finger-twist-nut" : "spanner-twist";
      a.id = a.name + "/" + fix;
      a.params = {{"?r", "robot"}, {"?g", "grasp"}, {"?q", "conf"}, {"?qe", "conf"}, {"?w", "wrench"}};
      a.preconditions = {{"TwistGrasp", {"m-" + method, "?g"}},
                         {"NutKin", {"?r", "?g", "?q"}},
                         {"Retract", {"?r", "?q", "?qe"}},
                         {"NutTwistStable", {"?r", "?g", "?q", "?w"}},
                         {"Operation", {"nut", "?w"}},
                         {"AtConf", {"?r", "?q"}}};
      if (method == "spanner") {
        a.params.push_back({"?gs", "grasp"});
        a.preconditions.push_back({"AtGrasp", {"?r", "spanner", "?gs"}});
      } else {
        a.preconditions.push_back({"HandEmpty", {"?r"}});
      }
      std::size_t weight_index = 0;
      if (fix == "rf") {
        a.params.push_back({"?r2", "robot"});
        a.preconditions.push_back({"Other", {"?r", "?r2"}});
        a.preconditions.push_back({"BeamGrasped", {"?r2"}});
      } else {
        weight_index = a.params.size();
        a.params.push_back({"?m", "object"});
        a.params.push_back({"?p", "pose"});
        a.preconditions.push_back({"WeightOn", {"?m", "?p"}});
        a.preconditions.push_back({"BeamHolds", {"?m", "?p", "?w"}});
      }
      a.add = {{"Twisted", {"nut"}}, {"AtConf", {"?r", "?qe"}}};
      a.del = {{"AtConf", {"?r", "?q"}}};
      a.cost = [S, spec, twist_parts, fix, weight_index](const ValueTable& v, const Binding& b) {
        auto parts = std::vector<std::pair<ForcefulKinematicChain, Wrench>>{twist_parts(v, b[0], b[1], b[2], b[4])};
        if (fix == "weight") {
          const Weight* w = find_weight(*S, v[b[weight_index]].label);
          parts.emplace_back(beam_fixture_chain(*S, w->mass, 2.0 * w->radius),
                             nut_wrench(v[b[4]].payload.at("t_z").get<double>()));
        }
        return detail::chain_cost(parts, spec);
      };
      a.annotate = [stiffness, twist_parts](const ValueTable& v, const Binding& b) {
        return detail::impedance_json(twist_parts(v, b[0], b[1], b[2], b[4]).second, stiffness);
      };
      p.schemas.push_back(std::move(a));
    }
  }

  out.strategy = [](const planner::Plan& plan) -> std::string {
    for (const auto& step : plan.steps) {
      const auto slash = step.schema.find('/');
      if (slash == std::string::npos) continue;
      const std::string method = step.name == "spanner-twist" ? "spanner" : "finger";
      if (step.schema.substr(slash + 1) == "rf") return method + "+RF";
      for (auto id : step.args) {
        if (plan.values[id].type == "object") return method + "+" + plan.values[id].label;
      }
    }
    return "none";
  };
  return out;
}

}  // namespace ftamp
