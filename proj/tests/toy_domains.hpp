#pragma once

// Small symbolic problems whose plan spaces can be enumerated exhaustively.

#include "ftamp/planner.hpp"

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace toy {

using ftamp::planner::ActionSchema;
using ftamp::planner::Atom;
using ftamp::planner::Binding;
using ftamp::planner::Problem;
using ftamp::planner::StepCost;
using ftamp::planner::ValueTable;

struct Domain {
  std::string name;
  Problem problem;
  int depth = 6;  // enumeration bound that covers every optimal plan
};

inline std::string node(int i) { return "n" + std::to_string(i); }

// Two routes to the goal: one direct step costing 0.9 and a two-step detour
// costing 0.1 + 0.1.
inline Domain routes() {
  Domain d{"routes", {}, 4};
  Problem& p = d.problem;
  for (const char* l : {"s", "a", "t"}) p.add_value("loc", l);
  const std::map<std::pair<std::string, std::string>, double> cost{
      {{"s", "t"}, 0.9}, {{"s", "a"}, 0.1}, {{"a", "t"}, 0.1}};
  for (const auto& [edge, c] : cost) p.init.push_back(p.fact("edge", {edge.first, edge.second}));
  p.init.push_back(p.fact("at", {"s"}));
  p.goal.push_back(p.fact("at", {"t"}));
  ActionSchema move;
  move.id = move.name = "move";
  move.params = {{"?a", "loc"}, {"?b", "loc"}};
  move.preconditions = {{"at", {"?a"}}, {"edge", {"?a", "?b"}}};
  move.add = {{"at", {"?b"}}};
  move.del = {{"at", {"?a"}}};
  move.cost = [cost](const ValueTable& v, const Binding& b) {
    return StepCost{cost.at({v[b[0]].label, v[b[1]].label})};
  };
  p.schemas.push_back(move);
  return d;
}

// Random directed graph on six nodes; reach the last node from the first.
inline Domain graph(std::uint64_t seed) {
  Domain d{"graph", {}, 6};
  Problem& p = d.problem;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int n = 6;
  for (int i = 0; i < n; ++i) p.add_value("node", node(i));
  std::map<std::pair<std::string, std::string>, double> cost;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || u(rng) < 0.45) continue;
      cost[{node(i), node(j)}] = u(rng);
      p.init.push_back(p.fact("edge", {node(i), node(j)}));
    }
  }
  p.init.push_back(p.fact("at", {node(0)}));
  p.goal.push_back(p.fact("at", {node(n - 1)}));
  ActionSchema move;
  move.id = move.name = "move";
  move.params = {{"?a", "node"}, {"?b", "node"}};
  move.preconditions = {{"at", {"?a"}}, {"edge", {"?a", "?b"}}};
  move.add = {{"at", {"?b"}}};
  move.del = {{"at", {"?a"}}};
  move.cost = [cost](const ValueTable& v, const Binding& b) {
    return StepCost{cost.at({v[b[0]].label, v[b[1]].label})};
  };
  p.schemas.push_back(move);
  return d;
}

// One-handed robot moving two packages between three rooms. Moves and picks
// have random costs; drops are free.
inline Domain delivery(std::uint64_t seed) {
  Domain d{"delivery", {}, 10};
  Problem& p = d.problem;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> room(0, 2);
  const std::vector<std::string> rooms{"r0", "r1", "r2"};
  for (const auto& r : rooms) p.add_value("room", r);
  std::map<std::string, double> cost;
  for (const auto& a : rooms) {
    for (const auto& b : rooms) {
      if (a == b) continue;
      p.init.push_back(p.fact("door", {a, b}));
      cost["move" + a + b] = u(rng);
    }
  }
  for (const char* pkg : {"p0", "p1"}) {
    p.add_value("pkg", pkg);
    const int from = room(rng);
    const int to = (from + 1 + room(rng) % 2) % 3;
    p.init.push_back(p.fact("in", {pkg, rooms[from]}));
    p.goal.push_back(p.fact("in", {pkg, rooms[to]}));
    cost[std::string("pick") + pkg] = u(rng);
  }
  p.init.push_back(p.fact("robot", {rooms[room(rng)]}));
  p.init.push_back(p.fact("free", {}));

  ActionSchema move;
  move.id = move.name = "move";
  move.params = {{"?a", "room"}, {"?b", "room"}};
  move.preconditions = {{"robot", {"?a"}}, {"door", {"?a", "?b"}}};
  move.add = {{"robot", {"?b"}}};
  move.del = {{"robot", {"?a"}}};
  move.cost = [cost](const ValueTable& v, const Binding& b) {
    return StepCost{cost.at("move" + v[b[0]].label + v[b[1]].label)};
  };
  ActionSchema pick;
  pick.id = pick.name = "pick";
  pick.params = {{"?p", "pkg"}, {"?r", "room"}};
  pick.preconditions = {{"robot", {"?r"}}, {"in", {"?p", "?r"}}, {"free", {}}};
  pick.add = {{"holding", {"?p"}}};
  pick.del = {{"in", {"?p", "?r"}}, {"free", {}}};
  pick.cost = [cost](const ValueTable& v, const Binding& b) { return StepCost{cost.at("pick" + v[b[0]].label)}; };
  ActionSchema drop;
  drop.id = drop.name = "drop";
  drop.params = {{"?p", "pkg"}, {"?r", "room"}};
  drop.preconditions = {{"robot", {"?r"}}, {"holding", {"?p"}}};
  drop.add = {{"in", {"?p", "?r"}}, {"free", {}}};
  drop.del = {{"holding", {"?p"}}};
  p.schemas = {move, pick, drop};
  return d;
}

// Three lamps. Each can be lit directly at a random price, or cheaply after
// a shared calibration step that itself has a random price.
inline Domain lamps(std::uint64_t seed) {
  Domain d{"lamps", {}, 6};
  Problem& p = d.problem;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, std::pair<double, double>> price;  // direct, calibrated
  for (const char* lamp : {"l0", "l1", "l2"}) {
    p.add_value("lamp", lamp);
    const double direct = u(rng);
    price[lamp] = {direct, direct * u(rng)};
    p.goal.push_back(p.fact("lit", {lamp}));
  }
  const double calibration = u(rng);

  ActionSchema calibrate;
  calibrate.id = calibrate.name = "calibrate";
  calibrate.add = {{"calibrated", {}}};
  calibrate.cost = [calibration](const ValueTable&, const Binding&) { return StepCost{calibration}; };
  ActionSchema direct;
  direct.id = direct.name = "light";
  direct.params = {{"?l", "lamp"}};
  direct.add = {{"lit", {"?l"}}};
  direct.cost = [price](const ValueTable& v, const Binding& b) { return StepCost{price.at(v[b[0]].label).first}; };
  ActionSchema tuned;
  tuned.id = tuned.name = "light-calibrated";
  tuned.params = {{"?l", "lamp"}};
  tuned.preconditions = {{"calibrated", {}}};
  tuned.add = {{"lit", {"?l"}}};
  tuned.cost = [price](const ValueTable& v, const Binding& b) { return StepCost{price.at(v[b[0]].label).second}; };
  p.schemas = {calibrate, direct, tuned};
  return d;
}

}  // namespace toy
