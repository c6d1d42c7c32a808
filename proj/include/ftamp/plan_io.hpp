#pragma once

#include "ftamp/planner.hpp"

#include <string>

namespace ftamp {

inline constexpr const char* kPlanFormat = "ftamp-plan/1";

/// Plan document: steps with labels, costs and margins, plus every sampled
/// value the steps depend on (payload and producing stream call).
planner::Json plan_to_json(const planner::Plan& plan, const planner::Problem& problem, const std::string& strategy);

/// Rebuilds a plan against `problem`. Sampled values are appended after the
/// problem's own values in file order. Throws std::invalid_argument on
/// unknown labels, schemas or malformed documents.
planner::Plan plan_from_json(const planner::Json& doc, const planner::Problem& problem);

/// One line per step: index, action text, cost and margin.
std::string plan_listing(const planner::Plan& plan);

}  // namespace ftamp
