#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instar/constraints.hpp"
#include "instar/engine.hpp"
#include "instar/mlp.hpp"
#include "instar/parser.hpp"
#include "instar/scenario.hpp"
#include "instar/trace.hpp"
#include "reference.hpp"

namespace instar::testing {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  int below(int n) { return static_cast<int>(gen() % static_cast<uint64_t>(n)); }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive
  bool chance(int percent) { return below(100) < percent; }
};

// ---------------------------------------------------------------------------
// Grid oracle for the constraint solver.
//
// Evaluates every constraint over all assignments on a 1/8-step grid whose
// bound covers the largest constant plus the sum of difference offsets. For
// the generated fragment (integer constants, at most one variable per side) a
// satisfiable set always has a witness on that grid: feasible potentials sit
// within one bound constant plus the chain of offsets, and tightening each
// strict edge by 1/8 cannot flip a cycle whose integer weight is >= 1.
// ---------------------------------------------------------------------------

struct GridEnv {
  const std::vector<std::string>& names;
  const long long* values;

  std::optional<long long> lookup(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return values[i];
    return std::nullopt;
  }
};

// Value of a term scaled by 8, under an assignment (also scaled by 8).
inline std::optional<long long> eval8(const Term& t, const GridEnv& env) {
  switch (t.kind()) {
    case Term::Kind::number: {
      Rational scaled = t.value() * 8;
      if (denominator(scaled) != 1) return std::nullopt;
      return static_cast<long long>(numerator(scaled));
    }
    case Term::Kind::variable: return env.lookup(t.name());
    case Term::Kind::compound: {
      if (t.args().size() == 1 && t.name() == "-") {
        auto a = eval8(t.args()[0], env);
        if (!a) return std::nullopt;
        return -*a;
      }
      if (t.args().size() != 2) return std::nullopt;
      auto a = eval8(t.args()[0], env);
      auto b = eval8(t.args()[1], env);
      if (!a || !b) return std::nullopt;
      if (t.name() == "+") return *a + *b;
      if (t.name() == "-") return *a - *b;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

inline bool compare_op(RelOp op, long long a, long long b) {
  switch (op) {
    case RelOp::eq: return a == b;
    case RelOp::ne: return a != b;
    case RelOp::lt: return a < b;
    case RelOp::le: return a <= b;
    case RelOp::gt: return a > b;
    case RelOp::ge: return a >= b;
  }
  return false;
}

inline bool grid_sat(const std::vector<Constraint>& constraints) {
  std::set<std::string> var_set;
  for (const auto& c : constraints) c.collect_vars(var_set);
  std::vector<std::string> vars(var_set.begin(), var_set.end());

  // Half of the grid width: the largest bound constant plus all difference
  // offsets, plus one of slack.
  long long max_bound8 = 0, offsets8 = 0;
  std::vector<std::string> empty_names;
  GridEnv zeros{empty_names, nullptr};
  for (const auto& c : constraints) {
    std::set<std::string> lv, rv;
    c.lhs.collect_vars(lv);
    c.rhs.collect_vars(rv);
    long long magnitude = 0;
    for (const Term* side : {&c.lhs, &c.rhs}) {
      Substitution to_zero;
      std::set<std::string> side_vars;
      side->collect_vars(side_vars);
      for (const auto& v : side_vars) to_zero.bind(v, Term::num(0));
      auto value = eval8(apply_subst(*side, to_zero), zeros);
      if (value) magnitude += std::abs(*value);
    }
    if (!lv.empty() && !rv.empty())
      offsets8 += magnitude;
    else if (!lv.empty() || !rv.empty())
      max_bound8 = std::max(max_bound8, magnitude);
  }
  const long long bound8 = max_bound8 + offsets8 + 8;

  std::vector<long long> point(vars.size(), -bound8);
  GridEnv env{vars, point.data()};
  for (;;) {
    bool all_hold = true;
    for (const auto& c : constraints) {
      auto a = eval8(c.lhs, env);
      auto b = eval8(c.rhs, env);
      if (!a || !b || !compare_op(c.op, *a, *b)) {
        all_hold = false;
        break;
      }
    }
    if (all_hold) return true;
    size_t i = 0;
    while (i < vars.size()) {
      if (point[i] < bound8) {
        ++point[i];
        break;
      }
      point[i] = -bound8;
      ++i;
    }
    if (i == vars.size()) return false;
  }
}

/// Random constraint set inside the supported fragment. Three-variable sets
/// keep their constants small so the oracle grid stays tractable.
inline std::vector<Constraint> random_supported_set(Rng& rng) {
  int var_count = rng.range(1, 3);
  const char* names[3] = {"X", "Y", "Z"};
  int bound_abs = var_count == 3 ? 4 : 8;
  int count = rng.range(1, var_count == 3 ? 4 : 6);
  auto op_of = [&]() {
    return static_cast<RelOp>(rng.below(6));
  };
  auto var_of = [&]() { return Term::var(names[rng.below(var_count)]); };

  std::vector<Constraint> out;
  for (int i = 0; i < count; ++i) {
    switch (rng.below(4)) {
      case 0:  // ground
        out.push_back(Constraint{Term::num(rng.range(-bound_abs, bound_abs)), op_of(),
                                 Term::num(rng.range(-bound_abs, bound_abs))});
        break;
      case 1:  // bound
        out.push_back(Constraint{var_of(), op_of(), Term::num(rng.range(-bound_abs, bound_abs))});
        break;
      case 2:  // variable vs variable
        out.push_back(Constraint{var_of(), op_of(), var_of()});
        break;
      default: {  // difference form
        int offset = rng.range(-2, 2);
        Term rhs = offset == 0
                       ? var_of()
                       : Term::fn(offset > 0 ? "+" : "-", {var_of(), Term::num(std::abs(offset))});
        out.push_back(Constraint{var_of(), op_of(), std::move(rhs)});
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random networks and their numeric forward pass.
// ---------------------------------------------------------------------------

inline Rational random_weight(Rng& rng) {
  return Rational(rng.range(-20, 20), rng.range(1, 10));
}

inline MlpSpec random_mlp(Rng& rng) {
  MlpSpec spec;
  int depth = rng.range(1, 3);
  spec.layer_sizes.push_back(rng.range(1, 4));
  for (int k = 0; k < depth; ++k) spec.layer_sizes.push_back(rng.range(1, 4));
  spec.activation = static_cast<Activation>(rng.below(3));
  for (int k = 1; k <= depth; ++k) {
    std::vector<Neuron> layer;
    for (int j = 0; j < spec.layer_sizes[static_cast<size_t>(k)]; ++j) {
      Neuron n;
      for (int i = 0; i < spec.layer_sizes[static_cast<size_t>(k - 1)]; ++i)
        n.weights.push_back(random_weight(rng));
      n.bias = random_weight(rng);
      layer.push_back(std::move(n));
    }
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

/// Plain numeric evaluation, layer by layer.
inline std::vector<std::vector<Rational>> forward_pass(const MlpSpec& spec,
                                                       const std::vector<Rational>& inputs) {
  std::vector<std::vector<Rational>> values;
  std::vector<Rational> current = inputs;
  for (const auto& layer : spec.layers) {
    std::vector<Rational> next;
    for (const auto& neuron : layer) {
      Rational sum = neuron.bias;
      for (size_t i = 0; i < neuron.weights.size(); ++i)
        sum += neuron.weights[i] * current[i];
      next.push_back(activate(spec.activation, sum));
    }
    values.push_back(next);
    current = next;
  }
  return values;
}

/// Runs the compiled rule program for one input vector and collects the o(..)
/// facts keyed by their layer/neuron label.
inline std::map<std::string, std::vector<Rational>> run_network_program(
    const MlpSpec& spec, const std::vector<Rational>& inputs) {
  RuleBase program = gen_mlp_program(spec);
  BuiltinRegistry registry = standard_builtins();
  register_calculate(registry, spec);
  Engine engine(EngineConfig{}, &registry);

  EventSet xi;
  for (size_t j = 0; j < inputs.size(); ++j)
    xi.insert(AtomicFormula{"i", {Term::num(inputs[j]), slot_label(0, static_cast<int>(j) + 1)}},
              "teacher");
  RunResult run = engine.run(StateOfAffairs{}, {xi}, program);
  std::map<std::string, std::vector<Rational>> outputs;
  if (run.error) return outputs;
  for (const auto& cf : run.final_state.entries()) {
    if (cf.atom.predicate != "o" || cf.atom.args.size() != 2) continue;
    outputs[cf.atom.args[1].str()].push_back(cf.atom.args[0].value());
  }
  return outputs;
}

/// True iff the rule program's outputs coincide exactly with the numeric pass:
/// one fact per neuron, equal value.
inline bool network_matches_oracle(const MlpSpec& spec, const std::vector<Rational>& inputs) {
  auto program_out = run_network_program(spec, inputs);
  auto oracle = forward_pass(spec, inputs);
  size_t facts = 0;
  for (const auto& [label, values] : program_out) facts += values.size();
  size_t neurons = 0;
  for (const auto& layer : oracle) neurons += layer.size();
  if (facts != neurons) return false;
  for (size_t k = 0; k < oracle.size(); ++k) {
    for (size_t j = 0; j < oracle[k].size(); ++j) {
      std::string label = slot_label(static_cast<int>(k) + 1, static_cast<int>(j) + 1).str();
      auto it = program_out.find(label);
      if (it == program_out.end() || it->second.size() != 1) return false;
      if (it->second[0] != oracle[k][j]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Differential testing: random small programs run through the engine and the
// naive interpreter. The generator stays inside the overlap where the two
// prevent/fired/ignore readings coincide: ground events everywhere, prevent
// conditions fixed to true, one condition predicate per if-rule, every
// condition variable used by the actions, constraints ground at evaluation.
// ---------------------------------------------------------------------------

struct DiffProgram {
  RuleBase rules;
  std::vector<ConstrainedFormula> initial;
  std::vector<std::vector<AtomicFormula>> trace;  // ground events per step
};

struct DiffMismatch {
  DiffProgram program;
  std::string detail;
};

inline AtomicFormula ground_event(int i) {
  return AtomicFormula{"alpha" + std::to_string(i), {}};
}

inline Term small_const(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return Term::atom("a");
    case 1: return Term::atom("b");
    default: return Term::num(rng.range(0, 3));
  }
}

inline AtomicFormula ground_fact(Rng& rng) {
  static const char* preds[5] = {"p", "q", "r", "s", "w"};
  std::string pred = preds[rng.below(5)];
  if (rng.chance(40)) return AtomicFormula{pred, {}};
  return AtomicFormula{pred, {small_const(rng)}};
}

inline DiffProgram random_diff_program(uint64_t seed) {
  Rng rng(seed);
  DiffProgram out;

  int fact_count = rng.range(0, 8);
  for (int i = 0; i < fact_count; ++i)
    out.initial.push_back(ConstrainedFormula{ground_fact(rng), {}});
  // chaining fuel for if-rules
  int chain_count = rng.range(0, 3);
  for (int i = 0; i < chain_count; ++i)
    out.initial.push_back(ConstrainedFormula{
        AtomicFormula{"c" + std::to_string(rng.range(1, 4)), {Term::num(rng.range(0, 3))}}, {}});

  out.trace.resize(3);
  for (auto& step : out.trace) {
    int n = rng.range(0, 4);
    for (int i = 0; i < n; ++i) {
      AtomicFormula e = ground_event(rng.range(1, 4));
      if (std::find(step.begin(), step.end(), e) == step.end()) step.push_back(e);
    }
  }

  int rule_count = rng.range(1, 6);
  int next_if_pred = 1;
  for (int i = 0; i < rule_count; ++i) {
    Rule rule;
    std::string id = "g" + std::to_string(i + 1);
    int kind = rng.below(100);
    if (kind < 40) {
      rule.kind = Rule::Kind::eca;
      rule.events.push_back(ground_event(rng.range(1, 4)));
      if (rng.chance(30)) {
        AtomicFormula extra = ground_event(rng.range(1, 4));
        if (!(extra == rule.events[0])) rule.events.push_back(extra);
      }
      bool with_var = rng.chance(40);
      if (with_var) {
        // c<k>(X) [& X > c] with X flowing into the actions
        std::string pred = "c" + std::to_string(rng.range(1, 3));
        Condition fact = Condition::fact_of(
            ConstrainedFormula{AtomicFormula{pred, {Term::var("X")}}, {}});
        if (rng.chance(40)) {
          Constraint guard{Term::var("X"), static_cast<RelOp>(rng.range(2, 5)),
                           Term::num(rng.range(0, 2))};
          rule.condition = Condition::conj(std::move(fact), Condition::sat_of({guard}));
        } else {
          rule.condition = std::move(fact);
        }
        rule.actions.push_back(Action::add_fact(ConstrainedFormula{
            AtomicFormula{"d" + std::to_string(rng.range(1, 3)), {Term::var("X")}}, {}}));
      } else {
        rule.condition = rng.chance(60)
                             ? Condition::truth_value()
                             : Condition::fact_of(ConstrainedFormula{ground_fact(rng), {}});
        int acts = rng.range(1, 2);
        for (int k = 0; k < acts; ++k) {
          ConstrainedFormula cf{ground_fact(rng), {}};
          rule.actions.push_back(rng.chance(75) ? Action::add_fact(cf) : Action::del_fact(cf));
        }
      }
    } else if (kind < 65) {
      rule.kind = Rule::Kind::if_then;
      std::string pred = "c" + std::to_string(next_if_pred++);
      Condition fact =
          Condition::fact_of(ConstrainedFormula{AtomicFormula{pred, {Term::var("X")}}, {}});
      if (rng.chance(30)) {
        Constraint guard{Term::var("X"), static_cast<RelOp>(rng.range(2, 5)),
                         Term::num(rng.range(0, 2))};
        rule.condition = Condition::conj(std::move(fact), Condition::sat_of({guard}));
      } else {
        rule.condition = std::move(fact);
      }
      rule.actions.push_back(Action::add_fact(ConstrainedFormula{
          AtomicFormula{"d" + std::to_string(rng.range(1, 3)), {Term::var("X")}}, {}}));
      if (rng.chance(40))
        rule.actions.push_back(Action::del_fact(
            ConstrainedFormula{AtomicFormula{pred, {Term::var("X")}}, {}}));
      if (rng.chance(30))
        rule.actions.push_back(Action::add_fact(ConstrainedFormula{
            AtomicFormula{"c" + std::to_string(rng.range(1, 4)), {Term::var("X")}}, {}}));
    } else if (kind < 75) {
      rule.kind = Rule::Kind::ignore;
      rule.events.push_back(ground_event(rng.range(1, 4)));
      if (rng.chance(40)) {
        AtomicFormula extra = ground_event(rng.range(1, 4));
        if (!(extra == rule.events[0])) rule.events.push_back(extra);
      }
      rule.condition = rng.chance(70)
                           ? Condition::truth_value()
                           : Condition::fact_of(ConstrainedFormula{ground_fact(rng), {}});
    } else if (kind < 85) {
      rule.kind = Rule::Kind::prevent;
      rule.target = Condition::fact_of(ConstrainedFormula{ground_fact(rng), {}});
      rule.condition = Condition::truth_value();
    } else {
      rule.kind = Rule::Kind::force;
      rule.forced_events.push_back(ground_event(rng.range(1, 4)));
      rule.events.push_back(ground_event(rng.range(1, 4)));
      rule.condition = rng.chance(70)
                           ? Condition::truth_value()
                           : Condition::fact_of(ConstrainedFormula{ground_fact(rng), {}});
      if (rng.chance(50)) {
        ConstrainedFormula cf{ground_fact(rng), {}};
        rule.actions.push_back(rng.chance(75) ? Action::add_fact(cf) : Action::del_fact(cf));
      }
    }
    out.rules.rules.push_back(RuleEntry{AtomicFormula{id, {}}, std::move(rule)});
  }
  return out;
}

inline std::string render_diff_program(const DiffProgram& p) {
  std::ostringstream os;
  os << serialize(p.rules);
  os << "% initial:";
  for (const auto& cf : p.initial) os << ' ' << cf.str();
  os << "\n";
  for (size_t t = 0; t < p.trace.size(); ++t) {
    os << "% step " << t << ":";
    for (const auto& e : p.trace[t]) os << ' ' << e.str();
    os << "\n";
  }
  return os.str();
}

/// Empty when engine and naive interpreter agree on every step.
inline std::optional<std::string> diff_disagreement(const DiffProgram& p) {
  Engine engine(EngineConfig{}, nullptr);
  std::vector<EventSet> trace;
  for (const auto& step : p.trace) {
    EventSet xi;
    for (const auto& e : step) xi.insert(e, "ag");
    trace.push_back(std::move(xi));
  }
  RunResult engine_run = engine.run(StateOfAffairs{p.initial}, trace, p.rules);
  auto naive = reference::naive_run(p.initial, p.trace, p.rules);

  if (engine_run.error || naive.error) {
    bool both = engine_run.error.has_value() && naive.error.has_value();
    if (both) return std::nullopt;  // both gave up (budget); nothing to compare
    return std::string("only one side errored: ") +
           (engine_run.error ? engine_run.error->what() : naive.error->c_str());
  }
  if (engine_run.records.size() != naive.steps.size())
    return std::string("step count differs");

  for (size_t t = 0; t < naive.steps.size(); ++t) {
    const auto& rec = engine_run.records[t];
    const auto& ns = naive.steps[t];
    if (!(rec.state_after == StateOfAffairs{ns.state_after})) {
      std::ostringstream os;
      os << "state mismatch at step " << t << "\n engine:";
      for (const auto& cf : rec.state_after.entries()) os << ' ' << cf.str();
      os << "\n naive: ";
      for (const auto& cf : ns.state_after) os << ' ' << cf.str();
      return os.str();
    }
    std::vector<AtomicFormula> engine_events;
    for (const auto& e : rec.events) engine_events.push_back(e.formula);
    for (const auto& e : rec.forced_events) engine_events.push_back(e.formula);
    if (engine_events != ns.events_seen) {
      return "event set mismatch at step " + std::to_string(t);
    }
  }
  return std::nullopt;
}

inline std::optional<DiffMismatch> shrink_mismatch(DiffProgram program, std::string detail) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < program.rules.rules.size(); ++i) {
      DiffProgram candidate = program;
      candidate.rules.rules.erase(candidate.rules.rules.begin() + i);
      if (auto d = diff_disagreement(candidate)) {
        program = std::move(candidate);
        detail = *d;
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (size_t i = 0; i < program.initial.size(); ++i) {
      DiffProgram candidate = program;
      candidate.initial.erase(candidate.initial.begin() + i);
      if (auto d = diff_disagreement(candidate)) {
        program = std::move(candidate);
        detail = *d;
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (size_t t = 0; t < program.trace.size() && !progress; ++t) {
      for (size_t i = 0; i < program.trace[t].size(); ++i) {
        DiffProgram candidate = program;
        candidate.trace[t].erase(candidate.trace[t].begin() + i);
        if (auto d = diff_disagreement(candidate)) {
          program = std::move(candidate);
          detail = *d;
          progress = true;
          break;
        }
      }
    }
  }
  return DiffMismatch{std::move(program), std::move(detail)};
}

/// Runs `count` random programs; returns the first (shrunk) disagreement.
inline std::optional<DiffMismatch> run_differential(int count, uint64_t seed_base) {
  for (int i = 0; i < count; ++i) {
    DiffProgram program = random_diff_program(seed_base + static_cast<uint64_t>(i));
    if (auto detail = diff_disagreement(program))
      return shrink_mismatch(std::move(program), std::move(*detail));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scenario corpus.
// ---------------------------------------------------------------------------

struct CorpusScenario {
  std::string name;
  std::string program;
  std::string init;   // may be empty
  std::string trace;  // may be empty
  int steps = -1;
  bool istar = false;
  std::string mlp_spec;  // may be empty
};

inline std::vector<CorpusScenario> corpus(const std::string& dir) {
  auto at = [&](const std::string& f) { return f.empty() ? f : dir + "/" + f; };
  std::vector<CorpusScenario> out;
  out.push_back({"prevent", at("prevent.inst"), "", at("prevent.evt"), 1, false, ""});
  out.push_back({"ignore_one", at("ignore_one.inst"), "", at("ignore_table.evt"), 3, false, ""});
  out.push_back({"ignore_pair", at("ignore_pair.inst"), "", at("ignore_table.evt"), 3, false, ""});
  out.push_back({"auction_violation", at("auction.inst"), at("auction.state"),
                 at("auction_violation.evt"), 4, false, ""});
  out.push_back({"auction_fulfilled", at("auction.inst"), at("auction.state"),
                 at("auction_fulfilled.evt"), 4, false, ""});
  out.push_back({"rule_management", at("rule_management.inst"), "", at("rule_management.evt"),
                 4, true, ""});
  out.push_back({"xor_net", at("xor_net.inst"), "", at("xor_net.evt"), 1, false,
                 at("xor_net.json")});
  out.push_back({"features", at("features.inst"), at("features.state"), at("features.evt"),
                 3, false, ""});
  return out;
}

inline Scenario to_scenario(const CorpusScenario& c) {
  Scenario s;
  s.program_path = c.program;
  s.init_path = c.init;
  s.trace_path = c.trace;
  s.steps = c.steps;
  s.config.istar_enabled = c.istar;
  return s;
}

inline BuiltinRegistry corpus_registry(const CorpusScenario& c) {
  BuiltinRegistry registry = standard_builtins();
  if (!c.mlp_spec.empty())
    register_calculate(registry, MlpSpec::from_json_text(read_file(c.mlp_spec)));
  return registry;
}

inline std::string scenario_record_bytes(const CorpusScenario& c) {
  BuiltinRegistry registry = corpus_registry(c);
  ScenarioResult result = run_scenario(to_scenario(c), registry);
  return render_record_file(result.records);
}

}  // namespace instar::testing
