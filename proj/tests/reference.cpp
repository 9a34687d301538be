#include "reference.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace instar::reference {

namespace {

using State = std::vector<ConstrainedFormula>;
using Events = std::vector<AtomicFormula>;
using Binding = std::map<std::string, Term>;

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Term subst(const Term& t, const Binding& b) {
  switch (t.kind()) {
    case Term::Kind::variable: {
      auto it = b.find(t.name());
      return it == b.end() ? t : it->second;
    }
    case Term::Kind::compound: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(subst(a, b));
      return Term::fn(t.name(), std::move(args));
    }
    default: return t;
  }
}

AtomicFormula subst(const AtomicFormula& f, const Binding& b) {
  AtomicFormula out{f.predicate, {}};
  for (const auto& a : f.args) out.args.push_back(subst(a, b));
  return out;
}

Constraint subst(const Constraint& c, const Binding& b) {
  return Constraint{subst(c.lhs, b), c.op, subst(c.rhs, b)};
}

ConstrainedFormula subst(const ConstrainedFormula& cf, const Binding& b) {
  ConstrainedFormula out{subst(cf.atom, b), {}};
  for (const auto& c : cf.constraints) out.constraints.push_back(subst(c, b));
  return out;
}

bool match_term(const Term& pattern, const Term& value, Binding& b) {
  switch (pattern.kind()) {
    case Term::Kind::variable: {
      auto it = b.find(pattern.name());
      if (it != b.end()) return it->second == value;
      b.emplace(pattern.name(), value);
      return true;
    }
    case Term::Kind::constant:
      return value.is_atom() && value.name() == pattern.name();
    case Term::Kind::number:
      return value.is_num() && value.value() == pattern.value();
    case Term::Kind::compound: {
      if (!value.is_fn() || value.name() != pattern.name() ||
          value.args().size() != pattern.args().size())
        return false;
      for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_term(pattern.args()[i], value.args()[i], b)) return false;
      return true;
    }
  }
  return false;
}

bool match_formula(const AtomicFormula& pattern, const AtomicFormula& value, Binding& b) {
  if (pattern.predicate != value.predicate || pattern.args.size() != value.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], value.args[i], b)) return false;
  return true;
}

bool constraints_equal(const std::vector<Constraint>& a, const std::vector<Constraint>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ca : a) {
    bool hit = false;
    for (size_t i = 0; i < b.size(); ++i)
      if (!used[i] && b[i] == ca) {
        used[i] = hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

Rational eval(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::number: return t.value();
    case Term::Kind::compound: break;
    default: throw Unsupported("cannot evaluate " + t.str());
  }
  if (t.args().size() == 1 && t.name() == "-") return -eval(t.args()[0]);
  if (t.args().size() != 2) throw Unsupported("cannot evaluate " + t.str());
  Rational a = eval(t.args()[0]);
  Rational c = eval(t.args()[1]);
  if (t.name() == "+") return a + c;
  if (t.name() == "-") return a - c;
  if (t.name() == "*") return a * c;
  if (t.name() == "/") {
    if (c == 0) throw Unsupported("division by zero");
    return a / c;
  }
  throw Unsupported("cannot evaluate " + t.str());
}

bool eval_constraint(const Constraint& c) {
  Rational a = eval(c.lhs);
  Rational b = eval(c.rhs);
  switch (c.op) {
    case RelOp::eq: return a == b;
    case RelOp::ne: return a != b;
    case RelOp::lt: return a < b;
    case RelOp::le: return a <= b;
    case RelOp::gt: return a > b;
    case RelOp::ge: return a >= b;
  }
  return false;
}

struct Interp {
  const RuleBase& rules;
  int max_fires;
  int fires_left;
  long now = 0;
  std::set<std::string> fired_conditions;

  std::vector<const Rule*> eca, ifs, ignores, prevents, forces;
  std::vector<const RuleEntry*> entries;

  explicit Interp(const RuleBase& rb, int fire_cap)
      : rules(rb), max_fires(fire_cap), fires_left(fire_cap) {
    for (const auto& entry : rb.rules) {
      switch (entry.rule.kind) {
        case Rule::Kind::eca: eca.push_back(&entry.rule); break;
        case Rule::Kind::if_then: ifs.push_back(&entry.rule); break;
        case Rule::Kind::ignore: ignores.push_back(&entry.rule); break;
        case Rule::Kind::prevent: prevents.push_back(&entry.rule); break;
        case Rule::Kind::force: forces.push_back(&entry.rule); break;
        case Rule::Kind::expectation:
          throw Unsupported("expectation rules must be desugared");
      }
    }
  }

  // s_l
  std::vector<Binding> holds(const State& s, const Condition& c, const Binding& b) {
    switch (c.kind) {
      case Condition::Kind::truth: return {b};
      case Condition::Kind::conjunction: {
        std::vector<Binding> out;
        for (const auto& left : holds(s, *c.lhs, b))
          for (const auto& both : holds(s, *c.rhs, left)) out.push_back(both);
        return out;
      }
      case Condition::Kind::negation:
        if (holds(s, *c.lhs, b).empty()) return {b};
        return {};
      case Condition::Kind::fact: {
        std::vector<Binding> out;
        for (const auto& entry : s) {
          Binding attempt = b;
          if (!match_formula(c.formula.atom, entry.atom, attempt)) continue;
          std::vector<Constraint> rewritten;
          for (const auto& cn : c.formula.constraints)
            rewritten.push_back(subst(cn, attempt));
          if (!constraints_equal(rewritten, entry.constraints)) continue;
          out.push_back(attempt);
        }
        return out;
      }
      case Condition::Kind::sat: {
        for (const auto& cn : c.constraints)
          if (!eval_constraint(subst(cn, b))) return {};
        return {b};
      }
      case Condition::Kind::time_is: {
        Term arg = subst(c.time_arg, b);
        if (arg.is_var()) {
          Binding out = b;
          out.emplace(arg.name(), Term::num(Rational(now)));
          return {out};
        }
        if (eval(arg) == Rational(now)) return {b};
        return {};
      }
      default:
        throw Unsupported("condition outside the naive interpreter's scope");
    }
  }

  // s_r over one action list
  State apply(State s, const std::vector<Action>& actions, const Binding& b) {
    for (const auto& a : actions) {
      if (a.kind == Action::Kind::builtin || a.is_rule)
        throw Unsupported("action outside the naive interpreter's scope");
      ConstrainedFormula cf = subst(a.fact, b);
      auto pos = std::find(s.begin(), s.end(), cf);
      if (a.kind == Action::Kind::add) {
        if (pos == s.end()) s.push_back(cf);
      } else if (pos != s.end()) {
        s.erase(pos);
      }
    }
    return s;
  }

  // check_prv: both sides on the candidate state
  bool prevent_ok(const State& candidate) {
    for (const Rule* p : prevents) {
      if (holds(candidate, p->target, {}).empty()) continue;
      if (holds(candidate, p->condition, {}).empty()) continue;
      return false;
    }
    return true;
  }

  // subset2: all bindings mapping each pattern onto some event
  void match_events_rec(const Events& xi, const std::vector<AtomicFormula>& patterns,
                        size_t index, const Binding& b, std::vector<Binding>& out) {
    if (index == patterns.size()) {
      out.push_back(b);
      return;
    }
    for (const auto& event : xi) {
      Binding attempt = b;
      if (!match_formula(patterns[index], event, attempt)) continue;
      match_events_rec(xi, patterns, index + 1, attempt, out);
    }
  }

  std::vector<Binding> match_events(const Events& xi,
                                    const std::vector<AtomicFormula>& patterns) {
    std::vector<Binding> out;
    match_events_rec(xi, patterns, 0, {}, out);
    return out;
  }

  // intersects, including the degenerate lists-identical clause
  static bool intersects(const Events& a, const Events& b) {
    if (a == b) return true;
    for (const auto& x : a)
      for (const auto& y : b)
        if (x == y) return true;
    return false;
  }

  bool is_ignored(const State& s, const Events& xi, const Events& trigger) {
    for (const Rule* ign : ignores) {
      for (const auto& b : match_events(xi, ign->events)) {
        Events instance;
        for (const auto& e : ign->events) instance.push_back(subst(e, b));
        if (!intersects(trigger, instance)) continue;
        if (!holds(s, ign->condition, b).empty()) return true;
      }
    }
    return false;
  }

  // can_fire + resolve: first rule, first binding whose instantiated
  // condition has not fired yet (the registry ignores the actions)
  struct Picked {
    const Rule* rule;
    Binding binding;
  };
  std::optional<Picked> select_rule(const State& s) {
    for (const Rule* r : ifs) {
      for (const auto& b : holds(s, r->condition, {})) {
        std::string key = condition_key(r->condition, b);
        if (!fired_conditions.count(key)) return Picked{r, b};
      }
    }
    return std::nullopt;
  }

  std::string condition_key(const Condition& c, const Binding& b) {
    Condition inst = c;
    Substitution sigma;
    for (const auto& [name, term] : b) sigma.bind(name, term);
    return apply_subst(c, sigma).str();
  }

  // s_if
  State s_if(State s) {
    for (;;) {
      auto picked = select_rule(s);
      if (!picked) return s;
      if (--fires_left < 0) throw Unsupported("fire budget exhausted");
      fired_conditions.insert(condition_key(picked->rule->condition, picked->binding));
      State candidate = apply(s, picked->rule->actions, picked->binding);
      if (prevent_ok(candidate)) s = std::move(candidate);
    }
  }

  // s_prime_r
  State s_prime_r(State s, const std::vector<std::pair<const Rule*, Binding>>& pending) {
    for (const auto& [rule, b] : pending) {
      State candidate = apply(s, rule->actions, b);
      if (!prevent_ok(candidate)) continue;
      s = s_if(std::move(candidate));
    }
    return s;
  }

  // s_f
  State s_force(State s, Events& xi) {
    std::vector<std::pair<const Rule*, Binding>> pending;
    Events forced;
    for (const Rule* f : forces) {
      for (const auto& bm : match_events(xi, f->events)) {
        Events trigger;
        for (const auto& e : f->events) trigger.push_back(subst(e, bm));
        for (const auto& b : holds(s, f->condition, bm)) {
          if (is_ignored(s, xi, trigger)) continue;
          for (const auto& fe : f->forced_events) forced.push_back(subst(fe, b));
          pending.emplace_back(f, b);
        }
      }
    }
    for (const auto& fe : forced)
      if (std::find(xi.begin(), xi.end(), fe) == xi.end()) xi.push_back(fe);
    return s_prime_r(std::move(s), pending);
  }

  // s_on
  State s_eca(State s, const Events& xi) {
    std::vector<std::pair<const Rule*, Binding>> pending;
    for (const Rule* r : eca) {
      for (const auto& bm : match_events(xi, r->events)) {
        Events trigger;
        for (const auto& e : r->events) trigger.push_back(subst(e, bm));
        if (is_ignored(s, xi, trigger)) continue;
        for (const auto& b : holds(s, r->condition, bm)) pending.emplace_back(r, b);
      }
    }
    return s_prime_r(std::move(s), pending);
  }

  // s_star
  State step(State s, Events& xi) {
    fired_conditions.clear();
    s = s_if(std::move(s));
    s = s_force(std::move(s), xi);
    return s_eca(std::move(s), xi);
  }
};

}  // namespace

NaiveResult naive_run(const std::vector<ConstrainedFormula>& initial,
                      const std::vector<std::vector<AtomicFormula>>& trace,
                      const RuleBase& rules, int max_fires) {
  NaiveResult result;
  try {
    Interp interp(rules, max_fires);
    State state;
    for (const auto& cf : initial)
      if (std::find(state.begin(), state.end(), cf) == state.end()) state.push_back(cf);
    for (size_t t = 0; t < trace.size(); ++t) {
      interp.now = static_cast<long>(t);
      interp.fires_left = max_fires;
      Events xi = trace[t];
      state = interp.step(std::move(state), xi);
      result.steps.push_back(NaiveStep{state, xi});
    }
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

}  // namespace instar::reference
