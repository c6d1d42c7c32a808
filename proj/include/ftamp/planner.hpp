#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ftamp::planner {

using ValueId = std::size_t;
using Json = nlohmann::json;

/// A symbol or a sampled continuous value. Sampled values remember the stream
/// call that produced them so certificates can be re-checked later.
struct Value {
  std::string type;
  std::string label;  // unique across the problem
  Json payload;
  std::string stream;  // empty for values given in the initial state
  std::vector<ValueId> inputs;
  std::vector<ValueId> outputs;  // every output of the producing call, in order

  bool initial() const { return stream.empty(); }
};

struct Fact {
  std::string predicate;
  std::vector<ValueId> args;

  auto operator<=>(const Fact&) const = default;
};

/// Predicate over schema or stream parameters. Arguments starting with '?'
/// name parameters; anything else is the label of a constant value.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;
};

struct Param {
  std::string name;  // "?q"
  std::string type;
};

struct StepCost {
  double cost = 0.0;
  double margin = std::numeric_limits<double>::quiet_NaN();  // NaN when the action exerts no force
};

using ValueTable = std::vector<Value>;
using Binding = std::vector<ValueId>;  // aligned with a parameter list

struct ActionSchema {
  std::string id;    // unique, e.g. "grasp-twist/sf"
  std::string name;  // display name, e.g. "grasp-twist"
  std::vector<Param> params;
  std::vector<Atom> preconditions;
  std::vector<Atom> add;
  std::vector<Atom> del;
  /// Unset means cost 0 and no margin.
  std::function<StepCost(const ValueTable&, const Binding&)> cost;
  /// Optional extra data recorded with each plan step.
  std::function<Json(const ValueTable&, const Binding&)> annotate;
};

/// Output values of one stream call, aligned with Stream::outputs. The label
/// of each value is used as a prefix; the planner appends a counter.
using StreamOutput = std::vector<Value>;

struct Stream {
  std::string name;
  std::vector<Param> inputs;
  std::vector<Atom> domain;
  std::vector<Param> outputs;
  std::vector<Atom> certified;
  /// Deterministic in (inputs, seed, attempt). May return no outputs.
  std::function<std::vector<StreamOutput>(const ValueTable&, const Binding& inputs, std::uint64_t seed, int attempt)>
      sample;
  /// Re-checks certified facts for existing inputs and outputs. Unset means
  /// the certificate is accepted on provenance alone.
  std::function<bool(const ValueTable&, const Binding& inputs, const Binding& outputs)> check;
  int calls_per_level = 1;
  int max_calls = 1;  // per input tuple
};

struct Problem {
  ValueTable values;
  std::vector<Fact> init;
  std::vector<Fact> goal;
  std::vector<ActionSchema> schemas;
  std::vector<Stream> streams;

  ValueId add_value(std::string type, std::string label, Json payload = {});
  /// Throws std::out_of_range for unknown labels.
  ValueId id(const std::string& label) const;
  std::optional<ValueId> find(const std::string& label) const;
  Fact fact(const std::string& predicate, const std::vector<std::string>& labels) const;
  /// Throws std::invalid_argument on inconsistent schemas or streams.
  void validate() const;
};

struct Budget {
  int max_levels = 3;
  double time_limit = 60.0;  // seconds
  double length_penalty = 1e-3;
  std::size_t max_expansions = 2'000'000;
};

struct PlanStep {
  std::string schema;  // schema id
  std::string name;    // display name
  Binding args;
  double cost = 0.0;
  double margin = std::numeric_limits<double>::quiet_NaN();
  Json extra;

  std::string text(const ValueTable& values) const;
};

struct Plan {
  std::vector<PlanStep> steps;
  double total_cost = 0.0;
  ValueTable values;  // table the step arguments index into
  int level = 0;
};

struct SolveResult {
  std::optional<Plan> plan;
  std::string diagnostic;
  int levels = 0;
  std::size_t stream_calls = 0;
  std::size_t ground_actions = 0;
};

struct GroundAction {
  std::size_t schema = 0;
  Binding args;
  std::string name;
  std::vector<Fact> pre;     // fluent preconditions
  std::vector<Fact> statics;  // static preconditions it relies on
  std::vector<Fact> add;
  std::vector<Fact> del;
};

/// Predicates that appear in some effect.
std::vector<std::string> fluent_predicates(const Problem& problem);

/// Every binding of every schema whose static preconditions hold in `facts`.
/// Parameters not fixed by a static precondition range over values of their
/// type. Result is sorted by name and free of duplicates.
std::vector<GroundAction> ground(const Problem& problem, const ValueTable& values, const std::vector<Fact>& facts);

struct SearchResult {
  std::optional<std::vector<std::size_t>> actions;  // indices into the ground set
  std::vector<StepCost> costs;
  double total_cost = 0.0;
  std::size_t expanded = 0;
};

/// Uniform-cost search over fluent states minimizing sum(cost) + penalty * length.
/// Equal-cost plans are ordered by their sequence of ground-action names.
SearchResult search(const Problem& problem, const ValueTable& values, const std::vector<GroundAction>& actions,
                    const std::vector<Fact>& init, double length_penalty = 1e-3,
                    std::size_t max_expansions = 2'000'000);

/// Incremental loop: sample streams for one more level, ground, search.
SolveResult solve(const Problem& problem, const Budget& budget, std::uint64_t seed);

struct ValidationReport {
  bool valid = true;
  double total_cost = 0.0;
  std::vector<std::string> violations;
  std::vector<std::size_t> failing_steps;
};

/// Re-simulates the plan from the initial state, re-checks every static fact
/// a step relies on (through the certifying stream, recursively) and
/// recomputes the total cost.
ValidationReport validate_plan(const Plan& plan, const Problem& problem, double length_penalty = 1e-3);

}  // namespace ftamp::planner
