#include "instar/rule.hpp"

#include <sstream>

namespace instar {

Condition Condition::conj(Condition a, Condition b) {
  Condition c;
  c.kind = Kind::conjunction;
  c.lhs = std::make_shared<const Condition>(std::move(a));
  c.rhs = std::make_shared<const Condition>(std::move(b));
  return c;
}

Condition Condition::negation_of(Condition inner) {
  Condition c;
  c.kind = Kind::negation;
  c.lhs = std::make_shared<const Condition>(std::move(inner));
  return c;
}

Condition Condition::sat_of(std::vector<Constraint> cs) {
  Condition c;
  c.kind = Kind::sat;
  c.constraints = std::move(cs);
  return c;
}

Condition Condition::set_eq_of(std::vector<SetElem> l, std::vector<SetElem> r) {
  Condition c;
  c.kind = Kind::set_eq;
  c.left_set = std::move(l);
  c.right_set = std::move(r);
  return c;
}

Condition Condition::member_of(Constraint e, std::vector<Constraint> set) {
  Condition c;
  c.kind = Kind::member;
  c.element = std::move(e);
  c.constraints = std::move(set);
  return c;
}

Condition Condition::time_of(Term arg) {
  Condition c;
  c.kind = Kind::time_is;
  c.time_arg = std::move(arg);
  return c;
}

Condition Condition::truth_value() { return Condition{}; }

Condition Condition::fact_of(ConstrainedFormula cf) {
  Condition c;
  c.kind = Kind::fact;
  c.formula = std::move(cf);
  return c;
}

Condition Condition::builtin_of(std::string name, std::vector<Term> args) {
  Condition c;
  c.kind = Kind::builtin;
  c.builtin_name = std::move(name);
  c.builtin_args = std::move(args);
  return c;
}

namespace {

bool set_elems_eq(const std::vector<SetElem>& a, const std::vector<SetElem>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!set_elem_eq(a[i], b[i])) return false;
  return true;
}

std::string set_text(const std::vector<SetElem>& elems) {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < elems.size(); ++i) {
    if (i) os << ',';
    os << set_elem_text(elems[i]);
  }
  os << '}';
  return os.str();
}

std::string constraint_set_text(const std::vector<Constraint>& cs) {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < cs.size(); ++i) {
    if (i) os << ',';
    os << cs[i].str();
  }
  os << '}';
  return os.str();
}

std::vector<SetElem> subst_set(const std::vector<SetElem>& elems, const Substitution& s) {
  std::vector<SetElem> out;
  out.reserve(elems.size());
  for (const auto& e : elems) out.push_back(apply_subst(e, s));
  return out;
}

}  // namespace

bool Condition::operator==(const Condition& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::conjunction: return *lhs == *other.lhs && *rhs == *other.rhs;
    case Kind::negation: return *lhs == *other.lhs;
    case Kind::sat: return constraints == other.constraints;
    case Kind::set_eq:
      return set_elems_eq(left_set, other.left_set) &&
             set_elems_eq(right_set, other.right_set);
    case Kind::member:
      return element == other.element && constraints == other.constraints;
    case Kind::time_is: return time_arg == other.time_arg;
    case Kind::truth: return true;
    case Kind::fact: return formula == other.formula;
    case Kind::builtin:
      return builtin_name == other.builtin_name && builtin_args == other.builtin_args;
  }
  return false;
}

std::string Condition::str() const {
  switch (kind) {
    case Kind::conjunction: return lhs->str() + " & " + rhs->str();
    case Kind::negation: return "not(" + lhs->str() + ")";
    case Kind::sat: return "sat(" + constraint_set_text(constraints) + ")";
    case Kind::set_eq:
      return "seteq(" + set_text(left_set) + "," + set_text(right_set) + ")";
    case Kind::member:
      return element.str() + " in " + constraint_set_text(constraints);
    case Kind::time_is: return "time(" + time_arg.str() + ")";
    case Kind::truth: return "true";
    case Kind::fact: return formula.str();
    case Kind::builtin: {
      std::ostringstream os;
      os << "builtin(" << builtin_name;
      for (const auto& a : builtin_args) os << ',' << a.str();
      os << ')';
      return os.str();
    }
  }
  return "true";
}

Condition apply_subst(const Condition& c, const Substitution& sigma) {
  switch (c.kind) {
    case Condition::Kind::conjunction:
      return Condition::conj(apply_subst(*c.lhs, sigma), apply_subst(*c.rhs, sigma));
    case Condition::Kind::negation:
      return Condition::negation_of(apply_subst(*c.lhs, sigma));
    case Condition::Kind::sat:
      return Condition::sat_of(apply_subst(c.constraints, sigma));
    case Condition::Kind::set_eq:
      return Condition::set_eq_of(subst_set(c.left_set, sigma),
                                  subst_set(c.right_set, sigma));
    case Condition::Kind::member:
      return Condition::member_of(apply_subst(c.element, sigma),
                                  apply_subst(c.constraints, sigma));
    case Condition::Kind::time_is:
      return Condition::time_of(apply_subst(c.time_arg, sigma));
    case Condition::Kind::truth: return c;
    case Condition::Kind::fact:
      return Condition::fact_of(apply_subst(c.formula, sigma));
    case Condition::Kind::builtin:
      return Condition::builtin_of(c.builtin_name, apply_subst(c.builtin_args, sigma));
  }
  return c;
}

Action Action::add_fact(ConstrainedFormula cf) {
  Action a;
  a.kind = Kind::add;
  a.fact = std::move(cf);
  return a;
}

Action Action::del_fact(ConstrainedFormula cf) {
  Action a;
  a.kind = Kind::del;
  a.fact = std::move(cf);
  return a;
}

Action Action::add_rule(Term id, Rule body) {
  Action a;
  a.kind = Kind::add;
  a.is_rule = true;
  a.rule_id = std::move(id);
  a.rule_body = std::make_shared<const Rule>(std::move(body));
  return a;
}

Action Action::del_rule(Term id, std::shared_ptr<const Rule> body) {
  Action a;
  a.kind = Kind::del;
  a.is_rule = true;
  a.rule_id = std::move(id);
  a.rule_body = std::move(body);
  return a;
}

Action Action::builtin_of(std::string name, std::vector<Term> args) {
  Action a;
  a.kind = Kind::builtin;
  a.builtin_name = std::move(name);
  a.builtin_args = std::move(args);
  return a;
}

bool Action::operator==(const Action& other) const {
  if (kind != other.kind || is_rule != other.is_rule) return false;
  if (kind == Kind::builtin)
    return builtin_name == other.builtin_name && builtin_args == other.builtin_args;
  if (!is_rule) return fact == other.fact;
  if (rule_id != other.rule_id) return false;
  if (!rule_body || !other.rule_body) return !rule_body && !other.rule_body;
  return *rule_body == *other.rule_body;
}

std::string Action::str() const {
  if (kind == Kind::builtin) {
    std::ostringstream os;
    os << "builtin(" << builtin_name;
    for (const auto& a : builtin_args) os << ',' << a.str();
    os << ')';
    return os.str();
  }
  std::string head = kind == Kind::add ? "add(" : "del(";
  if (!is_rule) return head + fact.str() + ")";
  std::string body = rule_body ? rule_body->str() : "_";
  return head + "rule(" + rule_id.str() + ", " + body + "))";
}

Action apply_subst(const Action& a, const Substitution& sigma) {
  Action out = a;
  if (a.kind == Action::Kind::builtin) {
    out.builtin_args = apply_subst(a.builtin_args, sigma);
    return out;
  }
  if (!a.is_rule) {
    out.fact = apply_subst(a.fact, sigma);
    return out;
  }
  out.rule_id = apply_subst(a.rule_id, sigma);
  if (a.rule_body)
    out.rule_body = std::make_shared<const Rule>(apply_subst(*a.rule_body, sigma));
  return out;
}

std::string actions_text(const std::vector<Action>& actions) {
  if (actions.empty()) return "[]";
  std::ostringstream os;
  for (size_t i = 0; i < actions.size(); ++i) {
    if (i) os << ", ";
    os << actions[i].str();
  }
  return os.str();
}

namespace {

std::string events_text(const std::vector<AtomicFormula>& events) {
  if (events.empty()) return "[]";
  std::ostringstream os;
  for (size_t i = 0; i < events.size(); ++i) {
    if (i) os << ", ";
    os << events[i].str();
  }
  return os.str();
}

}  // namespace

bool Rule::operator==(const Rule& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::eca:
      return events == other.events && condition == other.condition &&
             actions == other.actions;
    case Kind::if_then:
      return condition == other.condition && actions == other.actions;
    case Kind::ignore:
      return events == other.events && condition == other.condition;
    case Kind::prevent:
      return target == other.target && condition == other.condition;
    case Kind::force:
      return forced_events == other.forced_events && events == other.events &&
             condition == other.condition && actions == other.actions;
    case Kind::expectation:
      return expected_event == other.expected_event && events == other.events &&
             condition == other.condition && fulfilled_cond == other.fulfilled_cond &&
             violated_cond == other.violated_cond &&
             sanction_actions == other.sanction_actions;
  }
  return false;
}

std::string Rule::str() const {
  switch (kind) {
    case Kind::eca:
      return "on " + events_text(events) + " if " + condition.str() + " do " +
             actions_text(actions);
    case Kind::if_then:
      return "if " + condition.str() + " do " + actions_text(actions);
    case Kind::ignore:
      return "ignore " + events_text(events) + " if " + condition.str();
    case Kind::prevent:
      return "prevent " + target.str() + " if " + condition.str();
    case Kind::force:
      return "force " + events_text(forced_events) + " on " + events_text(events) +
             " if " + condition.str() + " do " + actions_text(actions);
    case Kind::expectation:
      return "expected " + expected_event.str() + " on " + events_text(events) +
             " if " + condition.str() + " fulfilled-if " + fulfilled_cond.str() +
             " violated-if " + violated_cond.str() + " sanction-do " +
             actions_text(sanction_actions);
  }
  return "";
}

Rule apply_subst(const Rule& r, const Substitution& sigma) {
  Rule out = r;
  out.events = apply_subst(r.events, sigma);
  out.forced_events = apply_subst(r.forced_events, sigma);
  out.condition = apply_subst(r.condition, sigma);
  out.target = apply_subst(r.target, sigma);
  out.actions = apply_subst(r.actions, sigma);
  out.expected_event = apply_subst(r.expected_event, sigma);
  out.fulfilled_cond = apply_subst(r.fulfilled_cond, sigma);
  out.violated_cond = apply_subst(r.violated_cond, sigma);
  out.sanction_actions = apply_subst(r.sanction_actions, sigma);
  return out;
}

std::string RuleEntry::str() const {
  return "rule(" + id.str() + ", " + rule.str() + ")";
}

const RuleEntry* RuleBase::find(const AtomicFormula& id) const {
  for (const auto& entry : rules)
    if (entry.id == id) return &entry;
  return nullptr;
}

}  // namespace instar
