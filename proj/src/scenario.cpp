#include "ftamp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ftamp {
namespace {

using planner::Json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Object reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }

  const Json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out, double lo = -kInf, double hi = kInf, bool open_lo = false) {
    const Json* v = get(key);
    if (!v) return;
    if (!v->is_number()) throw ScenarioError(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
      std::ostringstream msg;
      msg << "value " << x << " out of range";
      if (open_lo) msg << " (must be > " << lo << ")";
      else if (lo > -kInf) msg << " (must be >= " << lo << ")";
      throw ScenarioError(at(key), msg.str());
    }
    out = x;
  }
  void positive(const std::string& key, double& out) { number(key, out, 0.0, kInf, true); }
  void nonneg(const std::string& key, double& out) { number(key, out, 0.0); }

  void integer(const std::string& key, int& out, int lo) {
    const Json* v = get(key);
    if (!v) return;
    if (!v->is_number_integer() || v->get<long long>() < lo || v->get<long long>() > std::numeric_limits<int>::max()) {
      throw ScenarioError(at(key), "expected an integer >= " + std::to_string(lo));
    }
    out = v->get<int>();
  }

  void unsigned64(const std::string& key, std::uint64_t& out) {
    const Json* v = get(key);
    if (!v) return;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      throw ScenarioError(at(key), "expected a non-negative integer");
    }
    out = v->get<std::uint64_t>();
  }

  void string(const std::string& key, std::string& out) {
    const Json* v = get(key);
    if (!v) return;
    if (!v->is_string()) throw ScenarioError(at(key), "expected a string");
    out = v->get<std::string>();
  }

  template <int N>
  void vector(const std::string& key, Eigen::Matrix<double, N, 1>& out) {
    const Json* v = get(key);
    if (!v) return;
    if (!v->is_array() || v->size() != static_cast<std::size_t>(N)) {
      throw ScenarioError(at(key), "expected an array of " + std::to_string(N) + " numbers");
    }
    for (int i = 0; i < N; ++i) {
      const Json& e = (*v)[static_cast<std::size_t>(i)];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        throw ScenarioError(index_path(at(key), static_cast<std::size_t>(i)), "expected a finite number");
      }
      out(i) = e.get<double>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ScenarioError(at(it.key()), "unknown key");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::set<std::string> parse_codes(const Json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of strings");
  std::set<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw ScenarioError(index_path(path, i), "expected a string");
    const std::string code = j[i].get<std::string>();
    if (!allowed.count(code)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ScenarioError(index_path(path, i), "unknown disable code '" + code + "' (expected one of: " + list + ")");
    }
    out.insert(code);
  }
  return out;
}

std::vector<SerialArm> parse_arms(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ScenarioError(path, "expected a non-empty array of arms");
  std::vector<SerialArm> arms;
  std::set<std::string> names;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Section s(j[i], index_path(path, i));
    std::string name;
    s.string("name", name);
    if (name.empty()) throw ScenarioError(s.at("name"), "arm needs a name");
    if (!names.insert(name).second) throw ScenarioError(s.at("name"), "duplicate arm name '" + name + "'");
    Vec3 xyz = Vec3::Zero();
    Vec3 rpy = Vec3::Zero();
    if (const Json* base = s.get("base")) {
      Section b(*base, s.at("base"));
      b.vector("xyz", xyz);
      b.vector("rpy", rpy);
      b.finish();
    }
    s.finish();
    arms.push_back(default_arm(name, Transform::from_xyz_rpy(xyz, rpy)));
  }
  return arms;
}

void parse_surface(const Json& j, const std::string& path, Surface& out) {
  Section s(j, path);
  s.vector("center", out.center);
  s.positive("half_x", out.half_x);
  s.positive("half_y", out.half_y);
  s.nonneg("height", out.height);
  s.nonneg("mu", out.mu);
  s.finish();
}

void parse_hand(const Json& j, const std::string& path, HandModel& h) {
  Section s(j, path);
  s.nonneg("mu", h.mu);
  s.nonneg("grip_force", h.grip_force);
  s.positive("palm_radius", h.palm_radius);
  s.positive("fingertip_radius", h.fingertip_radius);
  s.nonneg("fingertip_mu", h.fingertip_mu);
  s.nonneg("fingertip_offset", h.fingertip_offset);
  s.positive("pad_half_x", h.pad_half_x);
  s.positive("pad_half_y", h.pad_half_y);
  s.finish();
}

BottleScene parse_bottle_scene(const Json& j, const std::string& path) {
  BottleScene scene = default_bottle_scene();
  Section s(j, path);
  if (const Json* v = s.get("arms")) scene.arms = parse_arms(*v, s.at("arms"));
  if (const Json* v = s.get("table")) parse_surface(*v, s.at("table"), scene.table);
  s.nonneg("table_mu_disabled", scene.table_mu_disabled);
  if (const Json* v = s.get("mat")) {
    if (v->is_null()) {
      scene.mat.reset();
    } else {
      Surface mat = scene.mat.value_or(*default_bottle_scene().mat);
      parse_surface(*v, s.at("mat"), mat);
      scene.mat = mat;
    }
  }
  if (const Json* v = s.get("vise")) {
    if (v->is_null()) {
      scene.vise.reset();
    } else {
      BottleScene::Vise vise = scene.vise.value_or(BottleScene::Vise{});
      Section r(*v, s.at("vise"));
      r.vector("center", vise.center);
      r.nonneg("height", vise.height);
      r.finish();
      scene.vise = vise;
    }
  }
  if (const Json* v = s.get("tool")) {
    if (v->is_null()) {
      scene.tool.reset();
    } else {
      BottleScene::Tool tool = scene.tool.value_or(BottleScene::Tool{});
      Section r(*v, s.at("tool"));
      r.vector("rest", tool.rest);
      r.positive("length", tool.length);
      r.positive("tip_radius", tool.tip_radius);
      r.nonneg("tip_mu", tool.tip_mu);
      r.finish();
      scene.tool = tool;
    }
  }
  if (const Json* v = s.get("bottle")) {
    Section r(*v, s.at("bottle"));
    Eigen::Vector2d xy(scene.bottle.position.x(), scene.bottle.position.y());
    r.vector("xy", xy);
    scene.bottle.position = Vec3(xy.x(), xy.y(), 0.0);
    r.string("surface", scene.bottle.surface);
    r.positive("mass", scene.bottle.mass);
    r.positive("radius", scene.bottle.radius);
    r.positive("height", scene.bottle.height);
    if (scene.bottle.surface != "table" && scene.bottle.surface != "mat") {
      throw ScenarioError(r.at("surface"), "bottle must stand on \"table\" or \"mat\"");
    }
    r.finish();
  }
  s.positive("lid_radius", scene.lid_radius);
  s.positive("lid_height", scene.lid_height);
  if (const Json* v = s.get("hand")) parse_hand(*v, s.at("hand"), scene.hand);
  s.finish();
  if (scene.bottle.surface == "mat" && !scene.mat) {
    throw ScenarioError(join(path, "bottle.surface"), "bottle stands on the mat but the scene has no mat");
  }
  return scene;
}

NutScene parse_nut_scene(const Json& j, const std::string& path) {
  NutScene scene = default_nut_scene();
  Section s(j, path);
  if (const Json* v = s.get("arms")) scene.arms = parse_arms(*v, s.at("arms"));
  if (const Json* v = s.get("beam")) {
    Section r(*v, s.at("beam"));
    r.vector("center", scene.beam.center);
    r.positive("length", scene.beam.length);
    r.positive("width", scene.beam.width);
    r.positive("height", scene.beam.height);
    r.nonneg("mass", scene.beam.mass);
    r.nonneg("mu", scene.beam.mu);
    r.finish();
  }
  if (const Json* v = s.get("nut")) {
    Section r(*v, s.at("nut"));
    r.number("x", scene.nut.x);
    r.positive("radius", scene.nut.radius);
    r.positive("height", scene.nut.height);
    r.nonneg("grip_force", scene.nut.grip_force);
    r.finish();
  }
  if (const Json* v = s.get("spanner")) {
    if (v->is_null()) {
      scene.spanner.reset();
    } else {
      NutScene::Spanner sp = scene.spanner.value_or(NutScene::Spanner{});
      Section r(*v, s.at("spanner"));
      r.vector("rest", sp.rest);
      r.positive("handle_length", sp.handle_length);
      r.finish();
      scene.spanner = sp;
    }
  }
  if (const Json* v = s.get("weights")) {
    if (!v->is_array()) throw ScenarioError(s.at("weights"), "expected an array");
    scene.weights.clear();
    std::set<std::string> names;
    for (std::size_t i = 0; i < v->size(); ++i) {
      Section r((*v)[i], index_path(s.at("weights"), i));
      Weight w;
      r.string("name", w.name);
      if (w.name.empty()) throw ScenarioError(r.at("name"), "weight needs a name");
      if (!names.insert(w.name).second) throw ScenarioError(r.at("name"), "duplicate weight '" + w.name + "'");
      r.positive("mass", w.mass);
      r.positive("radius", w.radius);
      r.positive("height", w.height);
      r.vector("rest", w.rest);
      r.finish();
      scene.weights.push_back(w);
    }
  }
  s.nonneg("weight_grip_force", scene.weight_grip_force);
  s.positive("weight_pinch_radius", scene.weight_pinch_radius);
  s.nonneg("weight_com_offset", scene.weight_com_offset);
  s.number("weight_slot", scene.weight_slot);
  if (const Json* v = s.get("hand")) parse_hand(*v, s.at("hand"), scene.hand);
  s.finish();
  if (std::abs(scene.nut.x) > scene.beam.length / 2.0) {
    throw ScenarioError(join(path, "nut.x"), "nut lies off the beam");
  }
  for (const auto& w : scene.weights) {
    if (std::abs(scene.weight_slot) + w.radius > scene.beam.length / 2.0) {
      throw ScenarioError(join(path, "weight_slot"), "weight '" + w.name + "' would overhang the beam");
    }
  }
  return scene;
}

void parse_scene_into(Scenario& out, const Json& doc, const std::string& path) {
  if (out.domain == "bottle") {
    out.bottle = parse_bottle_scene(doc, path);
  } else {
    out.nut = parse_nut_scene(doc, path);
  }
}

}  // namespace

const std::set<std::string>& disable_codes(const Scenario& s) {
  return s.domain == "bottle" ? bottle_disable_codes() : nut_disable_codes();
}

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ScenarioError("", std::string("syntax error: ") + e.what());
  }
  Scenario out;
  Section top(doc, "");
  top.string("domain", out.domain);
  if (!top.get("domain")) throw ScenarioError("domain", "missing (expected \"bottle\" or \"nut\")");
  if (out.domain != "bottle" && out.domain != "nut") {
    throw ScenarioError("domain", "expected \"bottle\" or \"nut\", got \"" + out.domain + "\"");
  }
  top.unsigned64("seed", out.seed);

  out.bottle = default_bottle_scene();
  out.nut = default_nut_scene();
  if (const Json* v = top.get("scene")) {
    if (!v->is_object()) throw ScenarioError("scene", "expected an object");
    out.scene_doc = *v;
  }
  parse_scene_into(out, out.scene_doc, "scene");

  if (const Json* v = top.get("operation")) {
    Section s(*v, "operation");
    if (out.domain == "bottle") {
      s.nonneg("f_z", out.bottle_op.f_z);
      s.number("t_z", out.bottle_op.t_z);
      s.nonneg("f_max", out.bottle_op.f_max);
      s.positive("f_step", out.bottle_op.f_step);
    } else {
      s.number("t_z", out.nut_op.t_z);
    }
    s.finish();
  }
  if (const Json* v = top.get("perturbation")) {
    Section s(*v, "perturbation");
    auto& p = out.perturbation;
    s.nonneg("friction_mu", p.friction_mu);
    s.nonneg("applied_wrench", p.applied_wrench);
    s.nonneg("frame_translation", p.frame_translation);
    s.nonneg("frame_rotation", p.frame_rotation);
    s.nonneg("patch_size", p.patch_size);
    s.integer("sample_count", p.sample_count, 1);
    s.unsigned64("rng_seed", p.rng_seed);
    s.finish();
  }
  if (const Json* v = top.get("budget")) {
    Section s(*v, "budget");
    auto& b = out.budget;
    s.integer("max_levels", b.max_levels, 0);
    s.positive("time_limit", b.time_limit);
    s.nonneg("length_penalty", b.length_penalty);
    int expansions = static_cast<int>(std::min<std::size_t>(b.max_expansions, std::numeric_limits<int>::max()));
    s.integer("max_expansions", expansions, 1);
    b.max_expansions = static_cast<std::size_t>(expansions);
    s.finish();
  }
  {
    Vec6 k = out.stiffness;
    top.vector("stiffness", k);
    for (int i = 0; i < 6; ++i) {
      if (!(k(i) > 0.0)) throw ScenarioError(index_path("stiffness", static_cast<std::size_t>(i)), "must be > 0");
    }
    out.stiffness = k;
  }
  if (const Json* v = top.get("disable")) out.disable = parse_codes(*v, "disable", disable_codes(out));
  if (const Json* v = top.get("ablation")) {
    if (!v->is_array()) throw ScenarioError("ablation", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = index_path("ablation", i);
      Section s((*v)[i], path);
      AblationRow row;
      s.string("label", row.label);
      if (row.label.empty()) throw ScenarioError(s.at("label"), "row needs a label");
      if (const Json* d = s.get("disable")) row.disable = parse_codes(*d, s.at("disable"), disable_codes(out));
      if (const Json* p = s.get("scene")) {
        if (!p->is_object()) throw ScenarioError(s.at("scene"), "expected an object");
        row.scene_patch = *p;
        Json merged = out.scene_doc;
        merged.merge_patch(*p);
        Scenario probe = out;
        parse_scene_into(probe, merged, s.at("scene"));
      }
      s.finish();
      out.ablation.push_back(std::move(row));
    }
  }
  top.finish();
  return out;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

Scenario patched_scenario(const Scenario& s, const Json& patch) {
  Scenario out = s;
  if (patch.is_null() || patch.empty()) return out;
  out.scene_doc.merge_patch(patch);
  parse_scene_into(out, out.scene_doc, "scene");
  return out;
}

DomainProblem build_domain(const Scenario& s, const std::set<std::string>& extra_disable) {
  DomainSettings settings;
  settings.perturbation = s.perturbation;
  settings.stiffness = s.stiffness;
  settings.disable = s.disable;
  settings.disable.insert(extra_disable.begin(), extra_disable.end());
  if (s.domain == "bottle") return bottle_domain(s.bottle, s.bottle_op, settings);
  return nut_domain(s.nut, s.nut_op, settings);
}

}  // namespace ftamp
