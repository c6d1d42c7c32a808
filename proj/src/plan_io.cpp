#include "ftamp/plan_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace ftamp {

using planner::Json;
using planner::ValueId;

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

// Sampled values reachable from the step arguments through provenance.
std::set<ValueId> referenced(const planner::Plan& plan, std::size_t base) {
  std::set<ValueId> out;
  std::vector<ValueId> stack;
  for (const auto& s : plan.steps) stack.insert(stack.end(), s.args.begin(), s.args.end());
  while (!stack.empty()) {
    const ValueId id = stack.back();
    stack.pop_back();
    if (id < base || !out.insert(id).second) continue;
    const auto& v = plan.values.at(id);
    stack.insert(stack.end(), v.inputs.begin(), v.inputs.end());
    stack.insert(stack.end(), v.outputs.begin(), v.outputs.end());
  }
  return out;
}

}  // namespace

Json plan_to_json(const planner::Plan& plan, const planner::Problem& problem, const std::string& strategy) {
  const std::size_t base = problem.values.size();
  for (std::size_t i = 0; i < base; ++i) {
    if (i >= plan.values.size() || plan.values[i].label != problem.values[i].label) {
      throw std::invalid_argument("plan values do not extend the problem values");
    }
  }
  auto labels = [&](const std::vector<ValueId>& ids) {
    Json out = Json::array();
    for (auto id : ids) out.push_back(plan.values.at(id).label);
    return out;
  };

  Json doc;
  doc["format"] = kPlanFormat;
  doc["strategy"] = strategy;
  doc["level"] = plan.level;
  doc["total_cost"] = plan.total_cost;
  Json steps = Json::array();
  for (const auto& s : plan.steps) {
    Json step;
    step["action"] = s.name;
    step["schema"] = s.schema;
    step["args"] = labels(s.args);
    step["cost"] = number_or_null(s.cost);
    step["margin"] = number_or_null(s.margin);
    if (!s.extra.is_null()) step["extra"] = s.extra;
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);

  Json values = Json::array();
  for (ValueId id : referenced(plan, base)) {
    const auto& v = plan.values[id];
    values.push_back(Json{{"label", v.label},
                          {"type", v.type},
                          {"payload", v.payload},
                          {"stream", v.stream},
                          {"inputs", labels(v.inputs)},
                          {"outputs", labels(v.outputs)}});
  }
  doc["values"] = std::move(values);
  return doc;
}

planner::Plan plan_from_json(const Json& doc, const planner::Problem& problem) {
  try {
    if (!doc.is_object() || doc.value("format", "") != std::string(kPlanFormat)) {
      throw std::invalid_argument("not a plan document (expected format " + std::string(kPlanFormat) + ")");
    }
    planner::Plan plan;
    plan.values = problem.values;
    std::map<std::string, ValueId> index;
    for (ValueId i = 0; i < plan.values.size(); ++i) index.emplace(plan.values[i].label, i);

    const Json& values = doc.at("values");
    for (const auto& v : values) {
      planner::Value value;
      value.label = v.at("label").get<std::string>();
      value.type = v.at("type").get<std::string>();
      value.payload = v.at("payload");
      value.stream = v.at("stream").get<std::string>();
      if (value.stream.empty()) throw std::invalid_argument("sampled value '" + value.label + "' has no stream");
      if (!index.emplace(value.label, plan.values.size()).second) {
        throw std::invalid_argument("duplicate value label '" + value.label + "'");
      }
      plan.values.push_back(std::move(value));
    }
    auto resolve = [&](const Json& labels) {
      std::vector<ValueId> out;
      for (const auto& l : labels) {
        const auto it = index.find(l.get<std::string>());
        if (it == index.end()) throw std::invalid_argument("unknown value label '" + l.get<std::string>() + "'");
        out.push_back(it->second);
      }
      return out;
    };
    for (std::size_t i = 0; i < values.size(); ++i) {
      auto& v = plan.values[problem.values.size() + i];
      v.inputs = resolve(values[i].at("inputs"));
      v.outputs = resolve(values[i].at("outputs"));
    }

    for (const auto& s : doc.at("steps")) {
      planner::PlanStep step;
      step.schema = s.at("schema").get<std::string>();
      const auto schema = std::find_if(problem.schemas.begin(), problem.schemas.end(),
                                       [&](const planner::ActionSchema& a) { return a.id == step.schema; });
      if (schema == problem.schemas.end()) throw std::invalid_argument("unknown action schema '" + step.schema + "'");
      step.name = s.at("action").get<std::string>();
      step.args = resolve(s.at("args"));
      if (step.args.size() != schema->params.size()) {
        throw std::invalid_argument("step '" + step.name + "' has the wrong number of arguments");
      }
      step.cost = number_or_nan(s.at("cost"));
      step.margin = number_or_nan(s.at("margin"));
      if (s.contains("extra")) step.extra = s.at("extra");
      plan.steps.push_back(std::move(step));
    }
    plan.total_cost = doc.at("total_cost").get<double>();
    plan.level = doc.value("level", 0);
    return plan;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed plan document: ") + e.what());
  }
}

std::string plan_listing(const planner::Plan& plan) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    std::snprintf(buf, sizeof(buf), "%2zu. ", i + 1);
    out += buf;
    out += s.text(plan.values);
    std::snprintf(buf, sizeof(buf), "  cost=%.4f", s.cost);
    out += buf;
    if (std::isfinite(s.margin)) {
      std::snprintf(buf, sizeof(buf), " margin=%.4f", s.margin);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace ftamp
