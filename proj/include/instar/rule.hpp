#pragma once

#include <memory>
#include <string>
#include <vector>

#include "instar/term.hpp"

namespace instar {

struct Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

/// Condition tree of a rule body. Trees are immutable and share subtrees.
struct Condition {
  enum class Kind {
    conjunction,  // lhs & rhs
    negation,     // not(lhs)
    sat,          // sat({constraints})
    set_eq,       // seteq(left_set, right_set)
    member,       // element in {constraints}
    time_is,      // time(time_arg)
    truth,        // true
    fact,         // constrained formula looked up in the state
    builtin,      // builtin(name, args...)
  };

  Kind kind = Kind::truth;
  ConditionPtr lhs, rhs;                // conjunction; negation uses lhs only
  std::vector<Constraint> constraints;  // sat / member set
  Constraint element;                   // member
  std::vector<SetElem> left_set, right_set;  // set_eq
  Term time_arg;                        // time_is
  ConstrainedFormula formula;           // fact
  std::string builtin_name;             // builtin
  std::vector<Term> builtin_args;       // builtin

  static Condition conj(Condition a, Condition b);
  static Condition negation_of(Condition inner);
  static Condition sat_of(std::vector<Constraint> cs);
  static Condition set_eq_of(std::vector<SetElem> l, std::vector<SetElem> r);
  static Condition member_of(Constraint c, std::vector<Constraint> set);
  static Condition time_of(Term arg);
  static Condition truth_value();
  static Condition fact_of(ConstrainedFormula cf);
  static Condition builtin_of(std::string name, std::vector<Term> args);

  bool operator==(const Condition& other) const;
  bool operator!=(const Condition& other) const { return !(*this == other); }
  std::string str() const;
};

Condition apply_subst(const Condition& c, const Substitution& sigma);

struct Rule;

/// Action of a rule: add/del of a fact, add/del of a rule (runtime
/// rule management), or a builtin call.
struct Action {
  enum class Kind { add, del, builtin };

  Kind kind = Kind::add;
  bool is_rule = false;
  ConstrainedFormula fact;                // add/del of a fact
  Term rule_id;                           // add/del of a rule (id pattern)
  std::shared_ptr<const Rule> rule_body;  // null = wildcard body (del)
  std::string builtin_name;
  std::vector<Term> builtin_args;

  static Action add_fact(ConstrainedFormula cf);
  static Action del_fact(ConstrainedFormula cf);
  static Action add_rule(Term id, Rule body);
  static Action del_rule(Term id, std::shared_ptr<const Rule> body);
  static Action builtin_of(std::string name, std::vector<Term> args);

  bool operator==(const Action& other) const;
  bool operator!=(const Action& other) const { return !(*this == other); }
  std::string str() const;
};

Action apply_subst(const Action& a, const Substitution& sigma);

std::string actions_text(const std::vector<Action>& actions);

/// One of the six rule shapes. Expectation rules never reach the engine;
/// they are rewritten into three plain rules first.
struct Rule {
  enum class Kind { eca, if_then, ignore, prevent, force, expectation };

  Kind kind = Kind::if_then;
  std::vector<AtomicFormula> events;         // eca trigger / ignore set / force+expectation "on"
  std::vector<AtomicFormula> forced_events;  // force
  Condition condition;                       // the "if" part of every kind
  Condition target;                          // prevent: conditions to keep from holding
  std::vector<Action> actions;               // eca / if / force
  AtomicFormula expected_event;              // expectation
  Condition fulfilled_cond;                  // expectation
  Condition violated_cond;                   // expectation
  std::vector<Action> sanction_actions;      // expectation

  bool operator==(const Rule& other) const;
  bool operator!=(const Rule& other) const { return !(*this == other); }
  std::string str() const;
};

Rule apply_subst(const Rule& r, const Substitution& sigma);

struct RuleEntry {
  AtomicFormula id;
  Rule rule;

  bool operator==(const RuleEntry& other) const {
    return id == other.id && rule == other.rule;
  }
  std::string str() const;  // rule(id, body)
};

/// Ordered rule collection; declaration order is firing priority.
struct RuleBase {
  std::vector<RuleEntry> rules;

  const RuleEntry* find(const AtomicFormula& id) const;
  bool operator==(const RuleBase& other) const { return rules == other.rules; }
  bool operator!=(const RuleBase& other) const { return !(*this == other); }
};

}  // namespace instar
