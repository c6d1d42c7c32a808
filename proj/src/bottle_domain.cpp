#include "domain_util.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ftamp {
namespace {

using detail::Json;
using planner::Atom;
using planner::Binding;
using planner::Param;
using planner::StreamOutput;
using planner::ValueTable;

constexpr double kRetreat = 0.05;  // m, hand lift after a twist

const char* display_name(TwistMethod m) {
  switch (m) {
    case TwistMethod::GT: return "grasp-twist";
    case TwistMethod::FT: return "finger-twist";
    case TwistMethod::PT: return "palm-twist";
    case TwistMethod::TT: return "tool-twist";
  }
  return "";
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Transform lid_offset(const BottleScene& s) { return Transform::translate(Vec3(0, 0, s.bottle.height + s.lid_height)); }

Json contact_json(const TwistContact& c) {
  return Json{{"method", method_code(c.method)}, {"mu", c.mu},           {"radius", c.radius},
              {"grip_force", c.grip_force},      {"tip_offset", c.tip_offset}, {"yaw", 0.0}};
}

TwistContact json_contact(const Json& j) {
  TwistContact c;
  c.method = parse_method(j.at("method").get<std::string>());
  c.mu = j.at("mu").get<double>();
  c.radius = j.at("radius").get<double>();
  c.grip_force = j.at("grip_force").get<double>();
  c.tip_offset = j.at("tip_offset").get<double>();
  return c;
}

// Grasp frame relative to the object frame.
Transform grasp_transform(const Json& g) {
  const std::string type = g.at("type").get<std::string>();
  const double height = g.at("height").get<double>();
  if (type == "side") {
    return compose(Transform::rot_z(g.at("yaw").get<double>()),
                   compose(Transform::translate(Vec3(0, 0, height)), Transform::rot_y(std::numbers::pi / 2)));
  }
  return compose(Transform::translate(Vec3(0, 0, height)), Transform::rot_x(std::numbers::pi));
}

double surface_height(const BottleScene& s, const std::string& surface) {
  if (surface == "table") return s.table.height;
  if (surface == "mat" && s.mat) return s.mat->height;
  if (surface == "vise" && s.vise) return s.vise->height;
  throw std::invalid_argument("unknown or missing surface '" + surface + "'");
}

double surface_mu(const BottleScene& s, const std::string& surface) {
  if (surface == "table") return s.table.mu;
  if (surface == "mat" && s.mat) return s.mat->mu;
  throw std::invalid_argument("surface '" + surface + "' is not a friction surface");
}

std::string wrench_label(double extra) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "w-push-%06.2f", extra);
  return buf;
}

}  // namespace

std::string method_code(TwistMethod m) {
  switch (m) {
    case TwistMethod::GT: return "GT";
    case TwistMethod::FT: return "FT";
    case TwistMethod::PT: return "PT";
    case TwistMethod::TT: return "TT";
  }
  return "";
}

TwistMethod parse_method(const std::string& code) {
  if (code == "GT") return TwistMethod::GT;
  if (code == "FT") return TwistMethod::FT;
  if (code == "PT") return TwistMethod::PT;
  if (code == "TT") return TwistMethod::TT;
  throw std::invalid_argument("unknown twist method '" + code + "'");
}

TwistContact twist_contact(const BottleScene& scene, TwistMethod method) {
  TwistContact c;
  c.method = method;
  switch (method) {
    case TwistMethod::GT:
      c.mu = scene.hand.mu;
      c.radius = scene.lid_radius;
      c.grip_force = scene.hand.grip_force;
      break;
    case TwistMethod::PT:
      c.mu = scene.hand.mu;
      c.radius = scene.hand.palm_radius;
      break;
    case TwistMethod::FT:
      c.mu = scene.hand.fingertip_mu;
      c.radius = scene.hand.fingertip_radius;
      c.tip_offset = scene.hand.fingertip_offset;
      break;
    case TwistMethod::TT: {
      const BottleScene::Tool tool = scene.tool.value_or(BottleScene::Tool{});
      c.mu = tool.tip_mu;
      c.radius = tool.tip_radius;
      c.grip_force = scene.hand.grip_force;
      break;
    }
  }
  return c;
}

Wrench push_twist(double push, double t_z) {
  Wrench w;
  w.force = Vec3(0, 0, -push);
  w.torque = Vec3(0, 0, t_z);
  w.frame = "lid";
  return w;
}

Transform bottle_pose(const BottleScene& scene, const std::string& surface, double x, double y) {
  return Transform::translate(Vec3(x, y, surface_height(scene, surface)));
}

Transform twist_target(const BottleScene& scene, TwistMethod method, const Transform& bottle, double yaw) {
  Transform contact = compose(bottle, lid_offset(scene));
  if (method == TwistMethod::TT) {
    const double length = scene.tool.value_or(BottleScene::Tool{}).length;
    contact = compose(contact, Transform::translate(Vec3(0, 0, length)));
  }
  return compose(contact, compose(Transform::rot_z(yaw), Transform::rot_x(std::numbers::pi)));
}

ForcefulKinematicChain twist_chain(const BottleScene& scene, const TwistContact& contact,
                                   const std::shared_ptr<const SerialArm>& arm, const Config& q,
                                   const Transform& bottle, double push) {
  FrameTree tree;
  tree.add("bottle", "world", bottle);
  tree.add("lid", "bottle", lid_offset(scene));
  tree.add("tip-a", "lid", Transform::translate(Vec3(contact.tip_offset, 0, 0)));
  tree.add("tip-b", "lid", Transform::translate(Vec3(-contact.tip_offset, 0, 0)));
  const double tool_length = scene.tool.value_or(BottleScene::Tool{}).length;
  tree.add("tool-grip", "lid", Transform::translate(Vec3(0, 0, tool_length)));

  ForcefulKinematicChain chain;
  chain.application_frame = "lid";
  auto link = [&](JointModel j, double share, const std::string& label) {
    chain.links.push_back(make_link(tree, "lid", std::move(j), share, std::nullopt, label));
  };
  switch (contact.method) {
    case TwistMethod::GT:
      link(CircularPatchJoint{contact.mu, contact.radius, contact.grip_force, "lid"}, 1.0, "hand-lid");
      break;
    case TwistMethod::PT:
      link(CircularPatchJoint{contact.mu, contact.radius, push, "lid"}, 1.0, "palm-lid");
      break;
    case TwistMethod::FT:
      link(CircularPatchJoint{contact.mu, contact.radius, push / 2.0, "tip-a"}, 0.5, "fingertip-a");
      link(CircularPatchJoint{contact.mu, contact.radius, push / 2.0, "tip-b"}, 0.5, "fingertip-b");
      break;
    case TwistMethod::TT: {
      PolygonPatchJoint pads;
      pads.mu = scene.hand.mu;
      pads.frame = "tool-grip";
      const double hx = scene.hand.pad_half_x;
      const double hy = scene.hand.pad_half_y;
      pads.corners = {Vec3(-hx, -hy, 0), Vec3(-hx, hy, 0), Vec3(hx, -hy, 0), Vec3(hx, hy, 0)};
      pads.corner_normal_forces.assign(4, contact.grip_force / 4.0);
      link(pads, 1.0, "hand-tool");
      link(CircularPatchJoint{contact.mu, contact.radius, push, "lid"}, 1.0, "tool-lid");
      break;
    }
  }
  if (arm) {
    tree.add("ee", "world", Transform::translate(fk(*arm, q).translation));
    link(ArmJoint{arm, q, "ee"}, 1.0, arm->name);
  }
  return chain;
}

StabilityVerdict twist_contact_stable(const BottleScene& scene, const TwistContact& contact, double push,
                                      double t_z) {
  const auto chain = twist_chain(scene, contact, nullptr, Config(), Transform::identity(), push);
  return chain_stable(chain, push_twist(push, t_z));
}

ForcefulKinematicChain fixture_chain(const BottleScene& scene, Fixture fixture, double surface_mu, double push) {
  FrameTree tree;
  tree.add("bottle", "world", Transform::identity());
  tree.add("lid", "bottle", lid_offset(scene));
  ForcefulKinematicChain chain;
  chain.application_frame = "lid";
  if (fixture == Fixture::SF) {
    const double normal = scene.bottle.mass * kGravity + push;
    chain.links.push_back(make_link(
        tree, "lid", CircularPatchJoint{surface_mu, scene.bottle.radius, normal, "bottle"}, 1.0, std::nullopt,
        "bottle-surface"));
  } else {
    chain.links.push_back(make_link(tree, "lid", RigidJoint{"bottle"}, 1.0, std::nullopt,
                                    fixture == Fixture::RF ? "robot-grasp" : "vise"));
  }
  return chain;
}

const std::set<std::string>& bottle_disable_codes() {
  static const std::set<std::string> codes = {"gt", "ft", "pt", "tt", "rf", "vf", "sft", "sfm"};
  return codes;
}

BottleScene apply_bottle_disables(const BottleScene& scene, const std::set<std::string>& disable) {
  BottleScene s = scene;
  for (const auto& code : disable) {
    if (!bottle_disable_codes().count(code)) throw std::invalid_argument("unknown bottle disable code '" + code + "'");
  }
  if (disable.count("rf") && s.arms.size() > 1) s.arms.resize(1);
  if (disable.count("vf")) s.vise.reset();
  if (disable.count("sfm") && s.bottle.surface != "mat") s.mat.reset();
  if (disable.count("sft")) s.table.mu = s.table_mu_disabled;
  if (disable.count("tt")) s.tool.reset();
  return s;
}

DomainProblem bottle_domain(const BottleScene& scene_in, const BottleOperation& op, const DomainSettings& settings) {
  const BottleScene scene = apply_bottle_disables(scene_in, settings.disable);
  if (scene.arms.empty()) throw std::invalid_argument("bottle scene needs at least one arm");
  for (const auto& a : scene.arms) a.validate();
  surface_height(scene, scene.bottle.surface);
  if (scene.bottle.surface == "vise") throw std::invalid_argument("bottle must start on the table or the mat");
  if (!(op.f_step > 0.0) || !(op.f_max >= 0.0)) throw std::invalid_argument("operation force grid is invalid");
  settings.perturbation.validate();

  const auto S = std::make_shared<const BottleScene>(scene);
  const detail::ArmMap arms = detail::make_arms(scene.arms);
  const PerturbationSpec spec = settings.perturbation;
  const Vec6 stiffness = settings.stiffness;
  const BottleOperation oper = op;

  std::vector<TwistMethod> methods;
  for (TwistMethod m : {TwistMethod::GT, TwistMethod::FT, TwistMethod::PT, TwistMethod::TT}) {
    if (settings.disable.count(lower(method_code(m)))) continue;
    if (m == TwistMethod::TT && !scene.tool) continue;
    methods.push_back(m);
  }

  DomainProblem out;
  planner::Problem& p = out.problem;
  const std::string twister = scene.arms.front().name;
  for (const auto& a : scene.arms) {
    p.add_value("robot", a.name);
    p.add_value("conf", "q-home-" + a.name, detail::conf_json(a.name, default_home(a)));
  }
  p.add_value("object", "bottle", Json{{"mass", scene.bottle.mass}});
  p.add_value("object", "lid");
  p.add_value("surface", "table");
  if (scene.mat) p.add_value("surface", "mat");
  if (scene.vise) p.add_value("surface", "vise");
  if (scene.tool) p.add_value("object", "tool");
  for (TwistMethod m : methods) p.add_value("method", method_code(m));

  const Vec3 start = bottle_pose(scene, scene.bottle.surface, scene.bottle.position.x(), scene.bottle.position.y())
                         .translation;
  p.add_value("pose", "p-bottle-start", detail::pose_json("bottle", scene.bottle.surface, start, 0.0));
  if (scene.tool) p.add_value("pose", "p-tool-rest", detail::pose_json("tool", "rack", scene.tool->rest, 0.0));

  std::vector<std::string> wrenches;
  for (int i = 0;; ++i) {
    const double extra = i * op.f_step;
    if (extra > op.f_max + 1e-9) break;
    wrenches.push_back(wrench_label(extra));
    p.add_value("wrench", wrenches.back(), Json{{"extra", extra}, {"push", op.f_z + extra}, {"t_z", op.t_z}});
  }

  using detail::add_fact;
  for (const auto& a : scene.arms) {
    add_fact(p, "Arm", {a.name});
    add_fact(p, "AtConf", {a.name, "q-home-" + a.name});
    add_fact(p, "Conf", {a.name, "q-home-" + a.name});
    add_fact(p, "HandEmpty", {a.name});
    for (const auto& b : scene.arms) {
      if (a.name != b.name) add_fact(p, "Other", {a.name, b.name});
    }
  }
  add_fact(p, "Twister", {twister});
  add_fact(p, "AtPose", {"bottle", "p-bottle-start"});
  add_fact(p, "Pose", {"bottle", "p-bottle-start"});
  add_fact(p, "Supported", {"bottle", "p-bottle-start", scene.bottle.surface});
  add_fact(p, "Movable", {"bottle"});
  add_fact(p, "Graspable", {"bottle"});
  add_fact(p, "FrictionSurface", {"table"});
  if (scene.mat) {
    add_fact(p, "FrictionSurface", {"mat"});
    if (scene.bottle.surface != "mat") add_fact(p, "Placeable", {"bottle", "mat"});
  }
  if (scene.vise) add_fact(p, "Placeable", {"bottle", "vise"});
  if (scene.tool) {
    add_fact(p, "AtPose", {"tool", "p-tool-rest"});
    add_fact(p, "Pose", {"tool", "p-tool-rest"});
    add_fact(p, "Movable", {"tool"});
    add_fact(p, "Graspable", {"tool"});
  }
  for (TwistMethod m : methods) add_fact(p, "Method", {method_code(m)});
  for (const auto& w : wrenches) add_fact(p, "Operation", {"lid", w});
  p.goal.push_back(p.fact("Removed", {"lid"}));

  // --- streams ---
  {
    planner::Stream s;
    s.name = "sample-placement";
    s.inputs = {{"?o", "object"}, {"?s", "surface"}};
    s.domain = {{"Placeable", {"?o", "?s"}}};
    s.outputs = {{"?p", "pose"}};
    s.certified = {{"Pose", {"?o", "?p"}}, {"Supported", {"?o", "?p", "?s"}}};
    s.sample = [S](const ValueTable& v, const Binding& in, std::uint64_t seed, int attempt) {
      std::vector<StreamOutput> out;
      const std::string surface = v[in[1]].label;
      Vec3 xyz;
      if (surface == "vise") {
        if (attempt > 0) return out;
        xyz = S->vise->center;
        xyz.z() = S->vise->height;
      } else {
        const Surface& sf = *S->mat;
        xyz = sf.center;
        if (attempt > 0) {
          std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
          std::uniform_real_distribution<double> u(-0.5, 0.5);
          xyz.x() += u(rng) * sf.half_x;
          xyz.y() += u(rng) * sf.half_y;
        }
        xyz.z() = sf.height;
      }
      out.push_back({detail::value("p-bottle-" + surface + "-", detail::pose_json("bottle", surface, xyz, 0.0))});
      return out;
    };
    s.check = [S](const ValueTable& v, const Binding& in, const Binding& o) {
      const Json& pose = v[o[0]].payload;
      const std::string surface = v[in[1]].label;
      const Vec3 xyz = detail::json_vec3(pose.at("xyz"));
      if (pose.at("surface") != surface) return false;
      if (surface == "vise") return S->vise && (xyz - Vec3(S->vise->center.x(), S->vise->center.y(), S->vise->height)).norm() < 1e-9;
      if (!S->mat) return false;
      return std::abs(xyz.x() - S->mat->center.x()) <= S->mat->half_x &&
             std::abs(xyz.y() - S->mat->center.y()) <= S->mat->half_y && std::abs(xyz.z() - S->mat->height) < 1e-9;
    };
    s.max_calls = 2;
    p.streams.push_back(std::move(s));
  }
  {
    planner::Stream s;
    s.name = "sample-grasp";
    s.inputs = {{"?o", "object"}};
    s.domain = {{"Graspable", {"?o"}}};
    s.outputs = {{"?g", "grasp"}};
    s.certified = {{"Grasp", {"?o", "?g"}}};
    s.sample = [S](const ValueTable& v, const Binding& in, std::uint64_t, int attempt) {
      std::vector<StreamOutput> out;
      const std::string object = v[in[0]].label;
      if (object == "bottle") {
        const double yaw = attempt == 0 ? 0.0 : std::numbers::pi;
        out.push_back({detail::value("g-bottle-", Json{{"object", object}, {"type", "side"}, {"yaw", yaw},
                                                      {"height", 0.5 * S->bottle.height}})});
      } else if (object == "tool" && attempt == 0) {
        out.push_back({detail::value("g-tool-", Json{{"object", object}, {"type", "top"}, {"yaw", 0.0},
                                                    {"height", S->tool->length}})});
      }
      return out;
    };
    s.calls_per_level = 2;
    s.max_calls = 2;
    p.streams.push_back(std::move(s));
  }
  {
    planner::Stream s;
    s.name = "sample-twist-grasp";
    s.inputs = {{"?k", "method"}};
    s.domain = {{"Method", {"?k"}}};
    s.outputs = {{"?g", "grasp"}};
    s.certified = {{"TwistGrasp", {"?k", "?g"}}};
    s.sample = [S](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      const TwistMethod m = parse_method(v[in[0]].label);
      return std::vector<StreamOutput>{
          {detail::value("g-" + lower(method_code(m)) + "-", contact_json(twist_contact(*S, m)))}};
    };
    s.check = [](const ValueTable& v, const Binding& in, const Binding& o) {
      return v[o[0]].payload.at("method") == v[in[0]].label;
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
    s.name = "plan-twist-kin";
    s.inputs = {{"?r", "robot"}, {"?k", "method"}, {"?g", "grasp"}, {"?p", "pose"}};
    s.domain = {{"Twister", {"?r"}}, {"TwistGrasp", {"?k", "?g"}}, {"Pose", {"bottle", "?p"}}};
    s.outputs = {{"?q", "conf"}, {"?qe", "conf"}};
    s.certified = {{"TwistKin", {"?r", "?g", "?p", "?q"}},
                   {"Retract", {"?r", "?q", "?qe"}},
                   {"Conf", {"?r", "?q"}},
                   {"Conf", {"?r", "?qe"}}};
    auto target = [S](const ValueTable& v, const Binding& in) {
      return twist_target(*S, parse_method(v[in[1]].label), detail::json_pose(v[in[3]].payload),
                          v[in[2]].payload.at("yaw").get<double>());
    };
    s.sample = [S, arms, target](const ValueTable& v, const Binding& in, std::uint64_t, int attempt) {
      std::vector<StreamOutput> out;
      const std::string robot = v[in[0]].label;
      const SerialArm& arm = *arms.at(robot);
      const Transform t = target(v, in);
      const auto q = solve_ik(arm, t, attempt);
      if (!q) return out;
      auto qe = ik(arm, detail::lifted(t, kRetreat), *q);
      if (!qe) return out;
      const std::string tag = lower(v[in[1]].label);
      out.push_back({detail::value("q-" + tag + "-" + robot + "-", detail::conf_json(robot, *q)),
                     detail::value("q-" + tag + "-up-" + robot + "-", detail::conf_json(robot, *qe))});
      return out;
    };
    s.check = [arms, target](const ValueTable& v, const Binding& in, const Binding& o) {
      const SerialArm& arm = *arms.at(v[in[0]].label);
      const Transform t = target(v, in);
      return detail::reaches(arm, detail::json_conf(v[o[0]].payload), t) &&
             detail::reaches(arm, detail::json_conf(v[o[1]].payload), detail::lifted(t, kRetreat));
    };
    s.max_calls = 2;
    p.streams.push_back(std::move(s));
  }
  {
    planner::Stream s;
    s.name = "plan-cap-kin";
    s.inputs = {{"?r", "robot"}, {"?p", "pose"}};
    s.domain = {{"Twister", {"?r"}}, {"Pose", {"bottle", "?p"}}};
    s.outputs = {{"?g", "grasp"}, {"?q", "conf"}};
    s.certified = {{"CapKin", {"?r", "?p", "?g", "?q"}}, {"Conf", {"?r", "?q"}}};
    auto target = [S](const ValueTable& v, const Binding& in) {
      return compose(compose(detail::json_pose(v[in[1]].payload), lid_offset(*S)),
                     Transform::rot_x(std::numbers::pi));
    };
    s.sample = [arms, target](const ValueTable& v, const Binding& in, std::uint64_t, int attempt) {
      std::vector<StreamOutput> out;
      const std::string robot = v[in[0]].label;
      if (auto q = solve_ik(*arms.at(robot), target(v, in), attempt)) {
        out.push_back({detail::value("g-cap-", Json{{"object", "lid"}, {"type", "top"}, {"yaw", 0.0}, {"height", 0.0}}),
                       detail::value("q-cap-" + robot + "-", detail::conf_json(robot, *q))});
      }
      return out;
    };
    s.check = [arms, target](const ValueTable& v, const Binding& in, const Binding& o) {
      return detail::reaches(*arms.at(v[in[0]].label), detail::json_conf(v[o[1]].payload), target(v, in));
    };
    s.max_calls = 2;
    p.streams.push_back(std::move(s));
  }

  // Nominal twist-chain stability, including the arm.
  auto twist_ok = [S, arms](const ValueTable& v, const Binding& in) {
    const Json& w = v[in[4]].payload;
    const double push = w.at("push").get<double>();
    const auto chain = twist_chain(*S, json_contact(v[in[1]].payload), arms.at(v[in[0]].label),
                                   detail::json_conf(v[in[3]].payload), detail::json_pose(v[in[2]].payload), push);
    return chain_stable(chain, push_twist(push, w.at("t_z").get<double>())).stable;
  };
  {
    planner::Stream s;
    s.name = "test-twist-stable";
    s.inputs = {{"?r", "robot"}, {"?g", "grasp"}, {"?p", "pose"}, {"?q", "conf"}, {"?w", "wrench"}};
    s.domain = {{"TwistKin", {"?r", "?g", "?p", "?q"}}, {"Operation", {"lid", "?w"}}};
    s.certified = {{"TwistStable", {"?r", "?g", "?p", "?q", "?w"}}};
    s.sample = [twist_ok](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      return twist_ok(v, in) ? std::vector<StreamOutput>{{}} : std::vector<StreamOutput>{};
    };
    s.check = [twist_ok](const ValueTable& v, const Binding& in, const Binding&) { return twist_ok(v, in); };
    p.streams.push_back(std::move(s));
  }
  auto surface_ok = [S](const ValueTable& v, const Binding& in) {
    const Json& w = v[in[2]].payload;
    const double push = w.at("push").get<double>();
    const auto chain = fixture_chain(*S, Fixture::SF, surface_mu(*S, v[in[1]].label), push);
    return chain_stable(chain, push_twist(push, w.at("t_z").get<double>())).stable;
  };
  {
    planner::Stream s;
    s.name = "test-surface-fixture";
    s.inputs = {{"?p", "pose"}, {"?s", "surface"}, {"?w", "wrench"}};
    s.domain = {{"Supported", {"bottle", "?p", "?s"}}, {"FrictionSurface", {"?s"}}, {"Operation", {"lid", "?w"}}};
    s.certified = {{"SurfaceHolds", {"?p", "?s", "?w"}}};
    s.sample = [surface_ok](const ValueTable& v, const Binding& in, std::uint64_t, int) {
      return surface_ok(v, in) ? std::vector<StreamOutput>{{}} : std::vector<StreamOutput>{};
    };
    s.check = [surface_ok](const ValueTable& v, const Binding& in, const Binding&) { return surface_ok(v, in); };
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
    p.schemas.push_back(std::move(a));
  }
  {
    planner::ActionSchema a;
    a.id = "place";
    a.name = "place";
    a.params = {{"?r", "robot"}, {"?o", "object"}, {"?p", "pose"}, {"?g", "grasp"}, {"?q", "conf"}};
    a.preconditions = {{"Kin", {"?r", "?o", "?p", "?g", "?q"}}, {"AtGrasp", {"?r", "?o", "?g"}},
                       {"AtConf", {"?r", "?q"}}};
    a.add = {{"AtPose", {"?o", "?p"}}, {"HandEmpty", {"?r"}}};
    a.del = {{"AtGrasp", {"?r", "?o", "?g"}}};
    p.schemas.push_back(std::move(a));
  }
  if (scene.vise) {
    planner::ActionSchema a;
    a.id = "engage-vise";
    a.name = "engage-vise";
    a.params = {{"?o", "object"}, {"?p", "pose"}};
    a.preconditions = {{"Supported", {"?o", "?p", "vise"}}, {"AtPose", {"?o", "?p"}}};
    a.add = {{"Clamped", {"?o", "?p"}}};
    p.schemas.push_back(std::move(a));
  }
  std::vector<Fixture> fixtures = {Fixture::SF};
  if (scene.arms.size() > 1) fixtures.push_back(Fixture::RF);
  if (scene.vise) fixtures.push_back(Fixture::VF);
  for (TwistMethod m : methods) {
    for (Fixture f : fixtures) {
      planner::ActionSchema a;
      const std::string fix = f == Fixture::SF ? "sf" : (f == Fixture::RF ? "rf" : "vf");
      a.id = "twist/" + lower(method_code(m)) + "/" + fix;
      a.name = display_name(m);
      a.params = {{"?r", "robot"}, {"?g", "grasp"}, {"?p", "pose"}, {"?q", "conf"}, {"?qe", "conf"}, {"?w", "wrench"}};
      a.preconditions = {{"TwistGrasp", {method_code(m), "?g"}},
                         {"TwistKin", {"?r", "?g", "?p", "?q"}},
                         {"Retract", {"?r", "?q", "?qe"}},
                         {"TwistStable", {"?r", "?g", "?p", "?q", "?w"}},
                         {"Operation", {"lid", "?w"}},
                         {"AtConf", {"?r", "?q"}},
                         {"Movable", {"bottle"}}};
      if (m == TwistMethod::TT) {
        a.params.push_back({"?gt", "grasp"});
        a.preconditions.push_back({"AtGrasp", {"?r", "tool", "?gt"}});
      } else {
        a.preconditions.push_back({"HandEmpty", {"?r"}});
      }
      std::optional<std::size_t> surface_index;
      if (f == Fixture::SF) {
        surface_index = a.params.size();
        a.params.push_back({"?s", "surface"});
        a.preconditions.push_back({"AtPose", {"bottle", "?p"}});
        a.preconditions.push_back({"SurfaceHolds", {"?p", "?s", "?w"}});
      } else if (f == Fixture::VF) {
        a.preconditions.push_back({"AtPose", {"bottle", "?p"}});
        a.preconditions.push_back({"Clamped", {"bottle", "?p"}});
      } else {
        a.params.push_back({"?r2", "robot"});
        a.params.push_back({"?g2", "grasp"});
        a.params.push_back({"?q2", "conf"});
        a.preconditions.push_back({"Other", {"?r", "?r2"}});
        a.preconditions.push_back({"AtGrasp", {"?r2", "bottle", "?g2"}});
        a.preconditions.push_back({"AtConf", {"?r2", "?q2"}});
        a.preconditions.push_back({"Kin", {"?r2", "bottle", "?p", "?g2", "?q2"}});
      }
      a.add = {{"Unlocked", {"lid", "?p"}}, {"AtConf", {"?r", "?qe"}}};
      a.del = {{"AtConf", {"?r", "?q"}}, {"Movable", {"bottle"}}};
      a.cost = [S, arms, spec, f, surface_index](const ValueTable& v, const Binding& b) {
        const Json& w = v[b[5]].payload;
        const double push = w.at("push").get<double>();
        const Wrench wrench = push_twist(push, w.at("t_z").get<double>());
        const auto twist = twist_chain(*S, json_contact(v[b[1]].payload), arms.at(v[b[0]].label),
                                       detail::json_conf(v[b[3]].payload), detail::json_pose(v[b[2]].payload), push);
        const double mu = surface_index ? surface_mu(*S, v[b[*surface_index]].label) : 0.0;
        return detail::chain_cost({{twist, wrench}, {fixture_chain(*S, f, mu, push), wrench}}, spec);
      };
      a.annotate = [stiffness](const ValueTable& v, const Binding& b) {
        const Json& w = v[b[5]].payload;
        Json j = detail::impedance_json(push_twist(w.at("push").get<double>(), w.at("t_z").get<double>()), stiffness);
        j["extra_force"] = w.at("extra");
        return j;
      };
      p.schemas.push_back(std::move(a));
    }
  }
  {
    planner::ActionSchema a;
    a.id = "pick-cap";
    a.name = "pick";
    a.params = {{"?r", "robot"}, {"?p", "pose"}, {"?g", "grasp"}, {"?q", "conf"}};
    a.preconditions = {{"CapKin", {"?r", "?p", "?g", "?q"}},
                       {"Unlocked", {"lid", "?p"}},
                       {"AtConf", {"?r", "?q"}},
                       {"HandEmpty", {"?r"}}};
    a.add = {{"Removed", {"lid"}}, {"AtGrasp", {"?r", "lid", "?g"}}};
    a.del = {{"HandEmpty", {"?r"}}};
    p.schemas.push_back(std::move(a));
  }

  out.strategy = [](const planner::Plan& plan) -> std::string {
    for (const auto& step : plan.steps) {
      if (step.schema.rfind("twist/", 0) != 0) continue;
      std::string method = step.schema.substr(6, 2);
      for (auto& c : method) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      const std::string fix = step.schema.substr(9);
      if (fix == "rf") return method + "+RF";
      if (fix == "vf") return method + "+VF";
      for (auto id : step.args) {
        if (plan.values[id].type == "surface") return method + (plan.values[id].label == "mat" ? "+SF(M)" : "+SF(T)");
      }
      return method + "+SF";
    }
    return "none";
  };
  (void)oper;
  return out;
}

}  // namespace ftamp
