#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "instar/rational.hpp"

namespace instar {

/// Immutable first-order term. Variables start with an uppercase letter or
/// '_', constants with a lowercase letter; numbers are exact rationals;
/// compounds carry a functor and at least one argument. Arithmetic operators
/// (+, -, *, /) are ordinary compounds with infix surface syntax. Terms share
/// structure freely: a Term is a cheap handle onto an immutable node, safe to
/// copy across threads.
class Term {
 public:
  enum class Kind { variable, constant, number, compound };

  /// Default-constructs the empty constant; placeholder only.
  Term();

  static Term var(std::string name);
  static Term atom(std::string name);
  static Term num(Rational value);
  static Term num(long long value);
  static Term fn(std::string functor, std::vector<Term> args);

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::variable; }
  bool is_atom() const { return node_->kind == Kind::constant; }
  bool is_num() const { return node_->kind == Kind::number; }
  bool is_fn() const { return node_->kind == Kind::compound; }

  /// Variable name, constant name, or functor.
  const std::string& name() const { return node_->name; }
  const Rational& value() const { return node_->value; }
  const std::vector<Term>& args() const { return node_->args; }

  bool ground() const { return node_->ground; }
  void collect_vars(std::set<std::string>& out) const;

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }

  /// Canonical text (reparseable): infix arithmetic with conventional
  /// precedence, rationals as p/q.
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::string name;
    Rational value;
    std::vector<Term> args;
    bool ground;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// True for the four arithmetic functors at their infix arities
/// (binary + - * /, unary -).
bool is_arith_functor(const std::string& functor, size_t arity);

/// Predicate applied to terms. A zero-argument formula is a proposition.
struct AtomicFormula {
  std::string predicate;
  std::vector<Term> args;

  bool ground() const;
  void collect_vars(std::set<std::string>& out) const;
  bool operator==(const AtomicFormula& other) const;
  bool operator!=(const AtomicFormula& other) const { return !(*this == other); }
  std::string str() const;

  /// Reifies the formula as a term (predicate becomes constant/functor).
  Term to_term() const;
  /// Inverse of to_term for constant/compound terms with a non-arithmetic
  /// head; nullopt otherwise.
  static std::optional<AtomicFormula> from_term(const Term& t);
};

enum class RelOp { eq, ne, lt, le, gt, ge };

const char* relop_text(RelOp op);

/// Binary arithmetic relation between two terms.
struct Constraint {
  Term lhs;
  RelOp op = RelOp::eq;
  Term rhs;

  bool ground() const { return lhs.ground() && rhs.ground(); }
  void collect_vars(std::set<std::string>& out) const;
  bool operator==(const Constraint& other) const;
  bool operator!=(const Constraint& other) const { return !(*this == other); }
  std::string str() const;
};

/// Atomic formula with an attached (possibly empty) constraint set. Equality
/// treats the constraints as a multiset; a bare atom is the same thing as an
/// empty constraint set.
struct ConstrainedFormula {
  AtomicFormula atom;
  std::vector<Constraint> constraints;

  bool ground() const;
  void collect_vars(std::set<std::string>& out) const;
  bool operator==(const ConstrainedFormula& other) const;
  bool operator!=(const ConstrainedFormula& other) const { return !(*this == other); }
  std::string str() const;
};

/// Finite map from variable names to terms. Application chases bindings
/// (X -> Y, Y -> 3 resolves X to 3) and is total.
class Substitution {
 public:
  bool empty() const { return bindings_.empty(); }
  size_t size() const { return bindings_.size(); }

  /// Records var -> term; a self-binding is dropped.
  void bind(const std::string& var, Term term);
  const Term* lookup(const std::string& var) const;

  /// Union; bindings already present win on collision.
  Substitution merged(const Substitution& extra) const;

  const std::map<std::string, Term>& bindings() const { return bindings_; }
  bool operator==(const Substitution& other) const;
  std::string str() const;  // {X/1,Y/f(a)} in name order

 private:
  std::map<std::string, Term> bindings_;
};

Term apply_subst(const Term& t, const Substitution& sigma);
AtomicFormula apply_subst(const AtomicFormula& f, const Substitution& sigma);
Constraint apply_subst(const Constraint& c, const Substitution& sigma);
ConstrainedFormula apply_subst(const ConstrainedFormula& cf, const Substitution& sigma);

template <typename T>
std::vector<T> apply_subst(const std::vector<T>& items, const Substitution& sigma) {
  std::vector<T> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(apply_subst(item, sigma));
  return out;
}

/// Most general unifier with occurs check; nullopt on clash.
std::optional<Substitution> unify(const Term& a, const Term& b);
std::optional<Substitution> unify(const AtomicFormula& a, const AtomicFormula& b);

/// Element of a set literal in seteq/membership conditions.
using SetElem = std::variant<Term, Constraint>;

bool set_elem_eq(const SetElem& a, const SetElem& b);
std::string set_elem_text(const SetElem& e);
SetElem apply_subst(const SetElem& e, const Substitution& sigma);

/// Insertion-ordered duplicate-free set of constrained formulae: the
/// institution's current facts. Values are immutable; mutation returns a new
/// state.
class StateOfAffairs {
 public:
  StateOfAffairs() = default;
  explicit StateOfAffairs(std::vector<ConstrainedFormula> entries);

  const std::vector<ConstrainedFormula>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  bool contains(const ConstrainedFormula& cf) const;

  /// Appends cf if absent; throws Error(non_ground_fact) when cf has free
  /// variables. No-op (same state) when already present.
  [[nodiscard]] StateOfAffairs added(const ConstrainedFormula& cf) const;
  /// Removes the syntactically matching entry if present, else no-op.
  [[nodiscard]] StateOfAffairs removed(const ConstrainedFormula& cf) const;

  bool operator==(const StateOfAffairs& other) const;
  bool operator!=(const StateOfAffairs& other) const { return !(*this == other); }

 private:
  std::vector<ConstrainedFormula> entries_;
};

/// One substitution per state entry the pattern matches: atoms unify, the
/// pattern's constraint set rewritten by the unifier must equal the entry's
/// as a multiset, and bindings flow from pattern to entry only. Results are
/// in entry insertion order.
std::vector<Substitution> match_in_state(const StateOfAffairs& state,
                                         const ConstrainedFormula& pattern);

/// Ground speech act with the emitting agent attached. The agent is metadata:
/// matching looks at the formula only.
struct Event {
  AtomicFormula formula;
  std::string agent;

  bool operator==(const Event& other) const {
    return agent == other.agent && formula == other.formula;
  }
};

/// The events emitted in one step, duplicate-free by formula, insertion
/// ordered.
class EventSet {
 public:
  EventSet() = default;

  /// Adds the event unless an equal formula is already present; throws
  /// Error(non_ground_event) on a non-ground formula.
  void insert(AtomicFormula formula, std::string agent);
  bool contains(const AtomicFormula& formula) const;
  bool empty() const { return events_.empty(); }
  size_t size() const { return events_.size(); }
  const std::vector<Event>& events() const { return events_; }

  bool operator==(const EventSet& other) const;

 private:
  std::vector<Event> events_;
};

}  // namespace instar
