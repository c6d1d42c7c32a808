#include "ftamp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ftamp::planner {
namespace {

constexpr ValueId kUnbound = std::numeric_limits<ValueId>::max();

bool is_param(const std::string& arg) { return !arg.empty() && arg[0] == '?'; }

std::uint64_t mix(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= 0xff;
  h *= 0x100000001b3ULL;
  return h;
}

struct Term {
  bool param = false;
  std::size_t index = 0;  // parameter index when `param`
  ValueId constant = 0;
};

struct CompiledAtom {
  std::string predicate;
  std::vector<Term> terms;
  bool resolvable = true;  // false when a constant is missing from the table
};

class LabelIndex {
 public:
  explicit LabelIndex(const ValueTable& values) {
    for (ValueId i = 0; i < values.size(); ++i) add(values[i].label, i);
  }
  void add(const std::string& label, ValueId id) { map_.emplace(label, id); }
  std::optional<ValueId> find(const std::string& label) const {
    auto it = map_.find(label);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<std::string, ValueId> map_;
};

CompiledAtom compile(const Atom& atom, const std::vector<Param>& params, const LabelIndex& labels) {
  CompiledAtom out;
  out.predicate = atom.predicate;
  for (const auto& arg : atom.args) {
    Term t;
    if (is_param(arg)) {
      auto it = std::find_if(params.begin(), params.end(), [&](const Param& p) { return p.name == arg; });
      if (it == params.end()) throw std::invalid_argument("atom " + atom.predicate + " uses undeclared " + arg);
      t.param = true;
      t.index = static_cast<std::size_t>(it - params.begin());
    } else {
      auto id = labels.find(arg);
      if (!id) {
        out.resolvable = false;
      } else {
        t.constant = *id;
      }
    }
    out.terms.push_back(t);
  }
  return out;
}

Fact instantiate(const CompiledAtom& atom, const Binding& b) {
  Fact f;
  f.predicate = atom.predicate;
  for (const auto& t : atom.terms) f.args.push_back(t.param ? b[t.index] : t.constant);
  return f;
}

// Static facts grouped by predicate, in insertion order.
class FactIndex {
 public:
  bool add(const Fact& f) {
    if (!all_.insert(f).second) return false;
    by_predicate_[f.predicate].push_back(f);
    return true;
  }
  bool contains(const Fact& f) const { return all_.count(f) > 0; }
  const std::vector<Fact>& with(const std::string& predicate) const {
    static const std::vector<Fact> empty;
    auto it = by_predicate_.find(predicate);
    return it == by_predicate_.end() ? empty : it->second;
  }
  std::size_t size() const { return all_.size(); }

 private:
  std::set<Fact> all_;
  std::map<std::string, std::vector<Fact>> by_predicate_;
};

// Enumerates bindings of `params` satisfying every atom, then binds leftover
// parameters over values of their type.
void join(const std::vector<CompiledAtom>& atoms, const std::vector<Param>& params, const ValueTable& values,
          const FactIndex& facts, const std::map<std::string, std::vector<ValueId>>& by_type, Binding seed,
          const std::function<void(const Binding&)>& emit) {
  for (const auto& a : atoms) {
    if (!a.resolvable) return;
  }
  std::vector<char> used(atoms.size(), 0);
  Binding b = std::move(seed);
  b.resize(params.size(), kUnbound);

  std::function<void(std::size_t)> bind_rest = [&](std::size_t i) {
    if (i == params.size()) {
      emit(b);
      return;
    }
    if (b[i] != kUnbound) {
      if (values[b[i]].type == params[i].type) bind_rest(i + 1);
      return;
    }
    auto it = by_type.find(params[i].type);
    if (it == by_type.end()) return;
    for (ValueId v : it->second) {
      b[i] = v;
      bind_rest(i + 1);
    }
    b[i] = kUnbound;
  };

  std::function<void(std::size_t)> step = [&](std::size_t done) {
    if (done == atoms.size()) {
      bind_rest(0);
      return;
    }
    // Most constrained atom first.
    std::size_t pick = atoms.size();
    int best = -1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (used[i]) continue;
      int bound = 0;
      for (const auto& t : atoms[i].terms) bound += (!t.param || b[t.index] != kUnbound) ? 1 : 0;
      if (bound > best) {
        best = bound;
        pick = i;
      }
    }
    const CompiledAtom& atom = atoms[pick];
    used[pick] = 1;
    for (const Fact& f : facts.with(atom.predicate)) {
      if (f.args.size() != atom.terms.size()) continue;
      std::vector<std::size_t> newly;
      bool ok = true;
      for (std::size_t k = 0; k < atom.terms.size() && ok; ++k) {
        const Term& t = atom.terms[k];
        if (!t.param) {
          ok = f.args[k] == t.constant;
        } else if (b[t.index] == kUnbound) {
          if (values[f.args[k]].type != params[t.index].type) {
            ok = false;
          } else {
            b[t.index] = f.args[k];
            newly.push_back(t.index);
          }
        } else {
          ok = b[t.index] == f.args[k];
        }
      }
      if (ok) step(done + 1);
      for (std::size_t idx : newly) b[idx] = kUnbound;
    }
    used[pick] = 0;
  };
  step(0);
}

std::map<std::string, std::vector<ValueId>> values_by_type(const ValueTable& values) {
  std::map<std::string, std::vector<ValueId>> out;
  for (ValueId i = 0; i < values.size(); ++i) out[values[i].type].push_back(i);
  return out;
}

std::string fact_text(const Fact& f, const ValueTable& values) {
  std::string s = f.predicate + "(";
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) s += ",";
    s += values[f.args[i]].label;
  }
  return s + ")";
}

std::string action_text(const std::string& name, const Binding& args, const ValueTable& values) {
  std::string s = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += values[args[i]].label;
  }
  return s + ")";
}

StepCost evaluate_cost(const ActionSchema& schema, const ValueTable& values, const Binding& args) {
  if (!schema.cost) return {};
  return schema.cost(values, args);
}

struct SchemaParts {
  std::vector<CompiledAtom> statics;
  std::vector<CompiledAtom> fluents;
  std::vector<CompiledAtom> add;
  std::vector<CompiledAtom> del;
};

SchemaParts split(const ActionSchema& schema, const std::set<std::string>& fluent, const LabelIndex& labels) {
  SchemaParts parts;
  for (const auto& a : schema.preconditions) {
    (fluent.count(a.predicate) ? parts.fluents : parts.statics).push_back(compile(a, schema.params, labels));
  }
  for (const auto& a : schema.add) parts.add.push_back(compile(a, schema.params, labels));
  for (const auto& a : schema.del) parts.del.push_back(compile(a, schema.params, labels));
  return parts;
}

std::vector<GroundAction> ground_index(const Problem& problem, const ValueTable& values, const FactIndex& statics) {
  const auto fl = fluent_predicates(problem);
  const std::set<std::string> fluent(fl.begin(), fl.end());
  const LabelIndex labels(values);
  const auto by_type = values_by_type(values);
  std::vector<GroundAction> out;
  for (std::size_t s = 0; s < problem.schemas.size(); ++s) {
    const ActionSchema& schema = problem.schemas[s];
    const SchemaParts parts = split(schema, fluent, labels);
    bool resolvable = true;
    for (const auto* group : {&parts.fluents, &parts.add, &parts.del}) {
      for (const auto& a : *group) resolvable = resolvable && a.resolvable;
    }
    if (!resolvable) continue;
    std::set<Binding> seen;
    join(parts.statics, schema.params, values, statics, by_type, {}, [&](const Binding& b) {
      if (!seen.insert(b).second) return;
      GroundAction g;
      g.schema = s;
      g.args = b;
      g.name = action_text(schema.name, b, values);
      for (const auto& a : parts.statics) g.statics.push_back(instantiate(a, b));
      for (const auto& a : parts.fluents) g.pre.push_back(instantiate(a, b));
      for (const auto& a : parts.add) g.add.push_back(instantiate(a, b));
      for (const auto& a : parts.del) g.del.push_back(instantiate(a, b));
      out.push_back(std::move(g));
    });
  }
  std::sort(out.begin(), out.end(), [&](const GroundAction& a, const GroundAction& b) {
    if (a.name != b.name) return a.name < b.name;
    return problem.schemas[a.schema].id < problem.schemas[b.schema].id;
  });
  return out;
}

FactIndex static_index(const Problem& problem, const std::vector<Fact>& facts) {
  const auto fl = fluent_predicates(problem);
  const std::set<std::string> fluent(fl.begin(), fl.end());
  FactIndex idx;
  for (const auto& f : facts) {
    if (!fluent.count(f.predicate)) idx.add(f);
  }
  return idx;
}

std::string unique_label(const std::string& prefix, std::map<std::string, int>& counters, const LabelIndex& labels) {
  for (;;) {
    const std::string label = prefix + std::to_string(counters[prefix]++);
    if (!labels.find(label)) return label;
  }
}

}  // namespace

ValueId Problem::add_value(std::string type, std::string label, Json payload) {
  if (find(label)) throw std::invalid_argument("duplicate value label '" + label + "'");
  Value v;
  v.type = std::move(type);
  v.label = std::move(label);
  v.payload = std::move(payload);
  values.push_back(std::move(v));
  return values.size() - 1;
}

std::optional<ValueId> Problem::find(const std::string& label) const {
  for (ValueId i = 0; i < values.size(); ++i) {
    if (values[i].label == label) return i;
  }
  return std::nullopt;
}

ValueId Problem::id(const std::string& label) const {
  auto v = find(label);
  if (!v) throw std::out_of_range("unknown value '" + label + "'");
  return *v;
}

Fact Problem::fact(const std::string& predicate, const std::vector<std::string>& labels) const {
  Fact f;
  f.predicate = predicate;
  for (const auto& l : labels) f.args.push_back(id(l));
  return f;
}

void Problem::validate() const {
  std::set<std::string> ids;
  for (const auto& s : schemas) {
    if (!ids.insert(s.id).second) throw std::invalid_argument("duplicate schema id '" + s.id + "'");
    for (const auto& p : s.params) {
      bool mentioned = false;
      for (const auto* group : {&s.preconditions, &s.add, &s.del}) {
        for (const auto& a : *group) {
          mentioned = mentioned || std::find(a.args.begin(), a.args.end(), p.name) != a.args.end();
        }
      }
      if (!mentioned) throw std::invalid_argument("schema " + s.id + ": parameter " + p.name + " is never used");
    }
    for (const auto* group : {&s.preconditions, &s.add, &s.del}) {
      for (const auto& a : *group) {
        for (const auto& arg : a.args) {
          if (is_param(arg) && std::none_of(s.params.begin(), s.params.end(),
                                            [&](const Param& p) { return p.name == arg; })) {
            throw std::invalid_argument("schema " + s.id + ": undeclared parameter " + arg);
          }
        }
      }
    }
  }
  const auto fl = fluent_predicates(*this);
  const std::set<std::string> fluent(fl.begin(), fl.end());
  for (const auto& st : streams) {
    if (!st.sample) throw std::invalid_argument("stream " + st.name + " has no sampler");
    if (st.calls_per_level < 1 || st.max_calls < 1) throw std::invalid_argument("stream " + st.name + ": bad limits");
    auto declared = [&](const std::vector<Param>& ps, const std::string& arg) {
      return std::any_of(ps.begin(), ps.end(), [&](const Param& p) { return p.name == arg; });
    };
    for (const auto& a : st.domain) {
      if (fluent.count(a.predicate)) throw std::invalid_argument("stream " + st.name + ": domain fact is fluent");
      for (const auto& arg : a.args) {
        if (is_param(arg) && !declared(st.inputs, arg)) {
          throw std::invalid_argument("stream " + st.name + ": domain uses non-input " + arg);
        }
      }
    }
    for (const auto& a : st.certified) {
      if (fluent.count(a.predicate)) throw std::invalid_argument("stream " + st.name + ": certified fact is fluent");
      for (const auto& arg : a.args) {
        if (is_param(arg) && !declared(st.inputs, arg) && !declared(st.outputs, arg)) {
          throw std::invalid_argument("stream " + st.name + ": certified fact uses undeclared " + arg);
        }
      }
    }
    if (st.outputs.empty()) {
      for (const auto& p : st.inputs) {
        const bool covered = std::any_of(st.certified.begin(), st.certified.end(), [&](const Atom& a) {
          return std::find(a.args.begin(), a.args.end(), p.name) != a.args.end();
        });
        if (!covered) throw std::invalid_argument("test stream " + st.name + " must certify over input " + p.name);
      }
    }
  }
}

std::string PlanStep::text(const ValueTable& values) const { return action_text(name, args, values); }

std::vector<std::string> fluent_predicates(const Problem& problem) {
  std::set<std::string> out;
  for (const auto& s : problem.schemas) {
    for (const auto& a : s.add) out.insert(a.predicate);
    for (const auto& a : s.del) out.insert(a.predicate);
  }
  return {out.begin(), out.end()};
}

std::vector<GroundAction> ground(const Problem& problem, const ValueTable& values, const std::vector<Fact>& facts) {
  return ground_index(problem, values, static_index(problem, facts));
}

SearchResult search(const Problem& problem, const ValueTable& values, const std::vector<GroundAction>& actions,
                    const std::vector<Fact>& init, double length_penalty, std::size_t max_expansions) {
  SearchResult result;
  const auto fl = fluent_predicates(problem);
  const std::set<std::string> fluent(fl.begin(), fl.end());

  std::map<Fact, int> intern;
  auto id_of = [&](const Fact& f) {
    auto [it, inserted] = intern.emplace(f, static_cast<int>(intern.size()));
    return it->second;
  };
  auto ids_of = [&](const std::vector<Fact>& facts) {
    std::vector<int> out;
    for (const auto& f : facts) out.push_back(id_of(f));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  std::vector<Fact> init_fluent;
  for (const auto& f : init) {
    if (fluent.count(f.predicate)) init_fluent.push_back(f);
  }
  const std::vector<int> start = ids_of(init_fluent);

  // A goal fact that is static must already hold.
  std::vector<Fact> goal_fluent;
  const std::set<Fact> init_set(init.begin(), init.end());
  for (const auto& g : problem.goal) {
    if (fluent.count(g.predicate)) {
      goal_fluent.push_back(g);
    } else if (!init_set.count(g)) {
      return result;
    }
  }
  const std::vector<int> goal = ids_of(goal_fluent);

  std::vector<std::vector<int>> pre(actions.size()), add(actions.size()), del(actions.size());
  std::map<int, std::vector<std::size_t>> bucket;
  std::vector<std::size_t> always;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    pre[i] = ids_of(actions[i].pre);
    add[i] = ids_of(actions[i].add);
    del[i] = ids_of(actions[i].del);
    if (pre[i].empty()) {
      always.push_back(i);
    } else {
      bucket[pre[i].front()].push_back(i);
    }
  }

  std::vector<std::optional<StepCost>> memo(actions.size());
  auto cost_of = [&](std::size_t i) -> const StepCost& {
    if (!memo[i]) memo[i] = evaluate_cost(problem.schemas[actions[i].schema], values, actions[i].args);
    return *memo[i];
  };

  struct Entry {
    std::int64_t key;
    std::vector<std::size_t> path;
    std::vector<int> state;
    double g;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.key != b.key) return a.key > b.key;
      return a.path > b.path;
    }
  };
  auto quantize = [](double g) { return static_cast<std::int64_t>(std::llround(g * 1e9)); };

  std::priority_queue<Entry, std::vector<Entry>, Later> open;
  std::set<std::vector<int>> closed;
  open.push({0, {}, start, 0.0});
  while (!open.empty()) {
    Entry e = open.top();
    open.pop();
    if (!closed.insert(e.state).second) continue;
    ++result.expanded;
    if (std::includes(e.state.begin(), e.state.end(), goal.begin(), goal.end())) {
      result.actions = e.path;
      result.total_cost = e.g;
      for (std::size_t i : e.path) result.costs.push_back(cost_of(i));
      return result;
    }
    if (result.expanded >= max_expansions) break;

    std::vector<std::size_t> candidates = always;
    for (int f : e.state) {
      auto it = bucket.find(f);
      if (it != bucket.end()) candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
    for (std::size_t i : candidates) {
      if (!std::includes(e.state.begin(), e.state.end(), pre[i].begin(), pre[i].end())) continue;
      std::vector<int> next;
      std::set_difference(e.state.begin(), e.state.end(), del[i].begin(), del[i].end(), std::back_inserter(next));
      std::vector<int> merged;
      std::set_union(next.begin(), next.end(), add[i].begin(), add[i].end(), std::back_inserter(merged));
      if (closed.count(merged)) continue;
      const StepCost& c = cost_of(i);
      if (!std::isfinite(c.cost) || c.cost < 0.0) continue;
      const double g = e.g + c.cost + length_penalty;
      std::vector<std::size_t> path = e.path;
      path.push_back(i);
      open.push({quantize(g), std::move(path), std::move(merged), g});
    }
  }
  return result;
}

namespace {

std::string failure_diagnostic(const Problem& problem, const ValueTable& values, const std::vector<Fact>& facts,
                               const std::vector<GroundAction>& actions) {
  const auto fl = fluent_predicates(problem);
  const std::set<std::string> fluent(fl.begin(), fl.end());
  const FactIndex statics = static_index(problem, facts);

  // Delete-relaxed reachability.
  std::set<Fact> reached;
  for (const auto& f : facts) {
    if (fluent.count(f.predicate)) reached.insert(f);
  }
  std::vector<char> fired(actions.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (fired[i]) continue;
      const bool ok = std::all_of(actions[i].pre.begin(), actions[i].pre.end(),
                                  [&](const Fact& f) { return reached.count(f) > 0; });
      if (!ok) continue;
      fired[i] = 1;
      for (const auto& f : actions[i].add) changed = reached.insert(f).second || changed;
    }
  }

  std::ostringstream out;
  for (const auto& g : problem.goal) {
    const bool held = fluent.count(g.predicate) ? reached.count(g) > 0 : statics.contains(g);
    if (!held) out << "goal " << fact_text(g, values) << " is never reachable\n";
  }
  for (std::size_t s = 0; s < problem.schemas.size(); ++s) {
    const auto& schema = problem.schemas[s];
    const bool any = std::any_of(actions.begin(), actions.end(), [&](const GroundAction& a) { return a.schema == s; });
    if (!any) {
      std::vector<std::string> missing;
      for (const auto& a : schema.preconditions) {
        if (!fluent.count(a.predicate) && statics.with(a.predicate).empty()) missing.push_back(a.predicate);
      }
      out << "schema " << schema.id << ": no binding satisfies its static preconditions";
      if (!missing.empty()) {
        out << " (never certified:";
        for (const auto& m : missing) out << ' ' << m;
        out << ')';
      }
      out << '\n';
      continue;
    }
    bool applicable = false;
    std::set<std::string> blocked;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (actions[i].schema != s) continue;
      if (fired[i]) {
        applicable = true;
        break;
      }
      for (const auto& f : actions[i].pre) {
        if (!reached.count(f)) blocked.insert(f.predicate);
      }
    }
    if (!applicable) {
      out << "schema " << schema.id << ": fluent preconditions never satisfiable:";
      for (const auto& b : blocked) out << ' ' << b;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

SolveResult solve(const Problem& problem, const Budget& budget, std::uint64_t seed) {
  problem.validate();
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  SolveResult result;
  ValueTable values = problem.values;
  LabelIndex labels(values);
  std::vector<Fact> facts = problem.init;
  FactIndex statics = static_index(problem, facts);
  std::map<std::pair<std::size_t, Binding>, int> calls;
  std::map<std::string, int> counters;
  std::vector<GroundAction> actions;
  bool out_of_time = false;

  for (int level = 0; level <= budget.max_levels; ++level) {
    result.levels = level;
    if (level > 0) {
      for (std::size_t s = 0; s < problem.streams.size() && !out_of_time; ++s) {
        const Stream& stream = problem.streams[s];
        std::vector<CompiledAtom> domain;
        for (const auto& a : stream.domain) domain.push_back(compile(a, stream.inputs, labels));
        std::vector<Param> all = stream.inputs;
        all.insert(all.end(), stream.outputs.begin(), stream.outputs.end());

        std::vector<Binding> tuples;
        const auto by_type = values_by_type(values);
        join(domain, stream.inputs, values, statics, by_type, {}, [&](const Binding& b) { tuples.push_back(b); });
        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());

        for (const Binding& in : tuples) {
          int& n = calls[{s, in}];
          std::uint64_t call_seed = mix(0xcbf29ce484222325ULL ^ seed, stream.name);
          for (ValueId v : in) call_seed = mix(call_seed, values[v].label);
          for (int k = 0; k < stream.calls_per_level && n < stream.max_calls; ++k, ++n) {
            ++result.stream_calls;
            const auto produced = stream.sample(values, in, call_seed, n);
            for (const StreamOutput& outs : produced) {
              if (outs.size() != stream.outputs.size()) {
                throw std::logic_error("stream " + stream.name + " returned the wrong number of outputs");
              }
              Binding full = in;
              const ValueId first = values.size();
              for (std::size_t o = 0; o < outs.size(); ++o) {
                Value v = outs[o];
                v.type = stream.outputs[o].type;
                v.label = unique_label(v.label.empty() ? v.type : v.label, counters, labels);
                v.stream = stream.name;
                v.inputs = in;
                labels.add(v.label, values.size());
                full.push_back(values.size());
                values.push_back(std::move(v));
              }
              for (ValueId id = first; id < values.size(); ++id) {
                values[id].outputs.assign(full.begin() + static_cast<std::ptrdiff_t>(in.size()), full.end());
              }
              for (const auto& a : stream.certified) {
                const Fact f = instantiate(compile(a, all, labels), full);
                if (statics.add(f)) facts.push_back(f);
              }
            }
          }
          if (elapsed() > budget.time_limit) {
            out_of_time = true;
            break;
          }
        }
      }
    }

    actions = ground_index(problem, values, statics);
    result.ground_actions = actions.size();
    SearchResult found = search(problem, values, actions, facts, budget.length_penalty, budget.max_expansions);
    if (found.actions) {
      Plan plan;
      plan.level = level;
      for (std::size_t k = 0; k < found.actions->size(); ++k) {
        const GroundAction& g = actions[(*found.actions)[k]];
        const ActionSchema& schema = problem.schemas[g.schema];
        PlanStep step;
        step.schema = schema.id;
        step.name = schema.name;
        step.args = g.args;
        step.cost = found.costs[k].cost;
        step.margin = found.costs[k].margin;
        if (schema.annotate) step.extra = schema.annotate(values, g.args);
        plan.steps.push_back(std::move(step));
      }
      plan.total_cost = found.total_cost;
      plan.values = std::move(values);
      result.plan = std::move(plan);
      return result;
    }
    if (out_of_time || elapsed() > budget.time_limit) {
      result.diagnostic = "time limit of " + std::to_string(budget.time_limit) + " s reached\n";
      break;
    }
  }
  result.diagnostic += failure_diagnostic(problem, values, facts, actions);
  return result;
}

ValidationReport validate_plan(const Plan& plan, const Problem& problem, double length_penalty) {
  ValidationReport report;
  const ValueTable& values = plan.values;
  auto fail = [&](std::optional<std::size_t> step, const std::string& msg) {
    report.valid = false;
    report.violations.push_back(step ? "step " + std::to_string(*step + 1) + ": " + msg : msg);
    if (step && (report.failing_steps.empty() || report.failing_steps.back() != *step)) {
      report.failing_steps.push_back(*step);
    }
  };

  if (values.size() < problem.values.size()) {
    fail(std::nullopt, "plan value table does not extend the problem's values");
    return report;
  }
  for (ValueId i = 0; i < problem.values.size(); ++i) {
    if (values[i].label != problem.values[i].label || values[i].type != problem.values[i].type) {
      fail(std::nullopt, "plan value table does not extend the problem's values");
      return report;
    }
  }

  const auto fl = fluent_predicates(problem);
  const std::set<std::string> fluent(fl.begin(), fl.end());
  const LabelIndex labels(values);
  std::set<Fact> state;
  std::set<Fact> init_static;
  for (const auto& f : problem.init) (fluent.count(f.predicate) ? state : init_static).insert(f);

  std::map<Fact, bool> verified;
  std::function<bool(const Fact&, int)> certify = [&](const Fact& f, int depth) -> bool {
    if (init_static.count(f)) return true;
    if (auto it = verified.find(f); it != verified.end()) return it->second;
    verified[f] = false;  // guards against cycles
    if (depth > 64) return false;
    for (const Stream& s : problem.streams) {
      std::vector<Param> all = s.inputs;
      all.insert(all.end(), s.outputs.begin(), s.outputs.end());
      for (const Atom& atom : s.certified) {
        if (atom.predicate != f.predicate || atom.args.size() != f.args.size()) continue;
        const CompiledAtom ca = compile(atom, all, labels);
        if (!ca.resolvable) continue;
        Binding b(all.size(), kUnbound);
        bool ok = true;
        for (std::size_t k = 0; k < ca.terms.size() && ok; ++k) {
          const Term& t = ca.terms[k];
          if (!t.param) {
            ok = t.constant == f.args[k];
          } else if (b[t.index] == kUnbound || b[t.index] == f.args[k]) {
            b[t.index] = f.args[k];
          } else {
            ok = false;
          }
        }
        if (!ok) continue;
        if (std::find(b.begin(), b.end(), kUnbound) != b.end()) {
          // Recover the full call from an output's provenance.
          for (ValueId v : f.args) {
            const Value& val = values[v];
            if (val.stream != s.name || val.inputs.size() != s.inputs.size() ||
                val.outputs.size() != s.outputs.size()) {
              continue;
            }
            Binding call = val.inputs;
            call.insert(call.end(), val.outputs.begin(), val.outputs.end());
            bool consistent = true;
            for (std::size_t k = 0; k < b.size(); ++k) consistent = consistent && (b[k] == kUnbound || b[k] == call[k]);
            if (consistent) {
              b = call;
              break;
            }
          }
        }
        if (std::find(b.begin(), b.end(), kUnbound) != b.end()) continue;
        bool typed = true;
        for (std::size_t k = 0; k < all.size(); ++k) typed = typed && values[b[k]].type == all[k].type;
        if (!typed || instantiate(ca, b) != f) continue;
        for (std::size_t k = s.inputs.size(); k < b.size(); ++k) {
          typed = typed && values[b[k]].stream == s.name;
        }
        if (!typed) continue;

        const Binding in(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(s.inputs.size()));
        const Binding out(b.begin() + static_cast<std::ptrdiff_t>(s.inputs.size()), b.end());
        bool domain_ok = true;
        for (const Atom& d : s.domain) {
          const CompiledAtom cd = compile(d, s.inputs, labels);
          domain_ok = domain_ok && cd.resolvable && certify(instantiate(cd, in), depth + 1);
        }
        if (!domain_ok) continue;
        if (s.check && !s.check(values, in, out)) continue;
        verified[f] = true;
        return true;
      }
    }
    return false;
  };

  double total = 0.0;
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const PlanStep& step = plan.steps[k];
    auto it = std::find_if(problem.schemas.begin(), problem.schemas.end(),
                           [&](const ActionSchema& s) { return s.id == step.schema; });
    if (it == problem.schemas.end()) {
      fail(k, "unknown action schema '" + step.schema + "'");
      return report;
    }
    const ActionSchema& schema = *it;
    if (step.args.size() != schema.params.size()) {
      fail(k, "wrong number of arguments for " + schema.id);
      return report;
    }
    bool typed = true;
    for (std::size_t i = 0; i < step.args.size(); ++i) {
      typed = typed && step.args[i] < values.size() && values[step.args[i]].type == schema.params[i].type;
    }
    if (!typed) {
      fail(k, "argument types do not match " + schema.id);
      return report;
    }
    const SchemaParts parts = split(schema, fluent, labels);
    for (const auto& a : parts.fluents) {
      const Fact f = instantiate(a, step.args);
      if (!a.resolvable || !state.count(f)) fail(k, "precondition " + fact_text(f, values) + " does not hold");
    }
    for (const auto& a : parts.statics) {
      const Fact f = instantiate(a, step.args);
      if (!a.resolvable || !certify(f, 0)) fail(k, "certificate " + fact_text(f, values) + " does not hold");
    }
    for (const auto& a : parts.del) state.erase(instantiate(a, step.args));
    for (const auto& a : parts.add) state.insert(instantiate(a, step.args));

    const StepCost c = evaluate_cost(schema, values, step.args);
    if (!std::isfinite(c.cost)) fail(k, step.text(values) + " has zero success probability");
    if (!std::isnan(c.margin) && !(c.margin > 0.0)) fail(k, step.text(values) + " exerts a wrench its chain cannot hold");
    if (std::abs(c.cost - step.cost) > 1e-9 * (1.0 + std::abs(c.cost))) {
      fail(k, "recorded cost differs from recomputed cost");
    }
    total += c.cost + length_penalty;
  }
  for (const auto& g : problem.goal) {
    const bool held = fluent.count(g.predicate) ? state.count(g) > 0 : init_static.count(g) > 0;
    if (!held) fail(std::nullopt, "goal " + fact_text(g, values) + " not reached");
  }
  report.total_cost = total;
  if (std::abs(total - plan.total_cost) > 1e-6 * (1.0 + std::abs(total))) {
    fail(std::nullopt, "recorded total cost differs from recomputed cost");
  }
  return report;
}

}  // namespace ftamp::planner
