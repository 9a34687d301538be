#include "instar/term.hpp"

#include <algorithm>
#include <sstream>

#include "instar/error.hpp"

namespace instar {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::non_ground_fact: return "NonGroundFact";
    case ErrorKind::non_ground_event: return "NonGroundEvent";
    case ErrorKind::division_by_zero: return "DivisionByZero";
    case ErrorKind::non_ground: return "NonGround";
    case ErrorKind::unknown_functor: return "UnknownFunctor";
    case ErrorKind::type_mismatch: return "TypeMismatch";
    case ErrorKind::unsupported_constraint: return "UnsupportedConstraint";
    case ErrorKind::unknown_builtin: return "UnknownBuiltin";
    case ErrorKind::non_ground_builtin_input: return "NonGroundBuiltinInput";
    case ErrorKind::istar_disabled: return "IstarDisabled";
    case ErrorKind::chain_limit_exceeded: return "ChainLimitExceeded";
    case ErrorKind::unknown_neuron: return "UnknownNeuron";
    case ErrorKind::arity_mismatch: return "ArityMismatch";
    case ErrorKind::spec_invariant: return "SpecInvariantViolation";
    case ErrorKind::io: return "IoError";
    case ErrorKind::bad_record: return "BadRecord";
  }
  return "Error";
}

Term::Term() {
  static const auto empty =
      std::make_shared<const Node>(Node{Kind::constant, "", Rational(0), {}, true});
  node_ = empty;
}

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::variable, std::move(name), Rational(0), {}, false}));
}

Term Term::atom(std::string name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::constant, std::move(name), Rational(0), {}, true}));
}

Term Term::num(Rational value) {
  return Term(std::make_shared<const Node>(
      Node{Kind::number, "", std::move(value), {}, true}));
}

Term Term::num(long long value) { return num(Rational(value)); }

Term Term::fn(std::string functor, std::vector<Term> args) {
  bool ground = true;
  for (const auto& a : args) ground = ground && a.ground();
  return Term(std::make_shared<const Node>(
      Node{Kind::compound, std::move(functor), Rational(0), std::move(args), ground}));
}

void Term::collect_vars(std::set<std::string>& out) const {
  switch (kind()) {
    case Kind::variable: out.insert(name()); break;
    case Kind::compound:
      for (const auto& a : args()) a.collect_vars(out);
      break;
    default: break;
  }
}

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::variable:
    case Kind::constant: return name() == other.name();
    case Kind::number: return value() == other.value();
    case Kind::compound:
      if (name() != other.name() || args().size() != other.args().size()) return false;
      for (size_t i = 0; i < args().size(); ++i)
        if (args()[i] != other.args()[i]) return false;
      return true;
  }
  return false;
}

bool is_arith_functor(const std::string& functor, size_t arity) {
  if (arity == 2)
    return functor == "+" || functor == "-" || functor == "*" || functor == "/";
  if (arity == 1) return functor == "-";
  return false;
}

namespace {

int arith_prec(const std::string& f) { return (f == "*" || f == "/") ? 2 : 1; }

void render_term(const Term& t, std::ostream& os, int parent_prec, bool right_side) {
  switch (t.kind()) {
    case Term::Kind::variable:
    case Term::Kind::constant: os << t.name(); return;
    case Term::Kind::number: {
      // Negative literals get parentheses in infix positions.
      bool paren = parent_prec > 0 && t.value() < 0;
      if (paren) os << '(';
      os << rational_text(t.value());
      if (paren) os << ')';
      return;
    }
    case Term::Kind::compound: break;
  }
  const auto& f = t.name();
  if (is_arith_functor(f, t.args().size())) {
    if (t.args().size() == 1) {
      os << '-';
      const Term& a = t.args()[0];
      bool paren = a.is_fn() && is_arith_functor(a.name(), a.args().size());
      if (paren) os << '(';
      render_term(a, os, 3, false);
      if (paren) os << ')';
      return;
    }
    int prec = arith_prec(f);
    bool paren = prec < parent_prec || (prec == parent_prec && right_side);
    if (paren) os << '(';
    render_term(t.args()[0], os, prec, false);
    os << f;
    render_term(t.args()[1], os, prec, true);
    if (paren) os << ')';
    return;
  }
  os << f << '(';
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ',';
    render_term(t.args()[i], os, 0, false);
  }
  os << ')';
}

}  // namespace

std::string Term::str() const {
  std::ostringstream os;
  render_term(*this, os, 0, false);
  return os.str();
}

bool AtomicFormula::ground() const {
  for (const auto& a : args)
    if (!a.ground()) return false;
  return true;
}

void AtomicFormula::collect_vars(std::set<std::string>& out) const {
  for (const auto& a : args) a.collect_vars(out);
}

bool AtomicFormula::operator==(const AtomicFormula& other) const {
  if (predicate != other.predicate || args.size() != other.args.size()) return false;
  for (size_t i = 0; i < args.size(); ++i)
    if (args[i] != other.args[i]) return false;
  return true;
}

std::string AtomicFormula::str() const {
  if (args.empty()) return predicate;
  std::ostringstream os;
  os << predicate << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ',';
    os << args[i].str();
  }
  os << ')';
  return os.str();
}

Term AtomicFormula::to_term() const {
  if (args.empty()) return Term::atom(predicate);
  return Term::fn(predicate, args);
}

std::optional<AtomicFormula> AtomicFormula::from_term(const Term& t) {
  if (t.is_atom()) return AtomicFormula{t.name(), {}};
  if (t.is_fn() && !is_arith_functor(t.name(), t.args().size()))
    return AtomicFormula{t.name(), t.args()};
  return std::nullopt;
}

const char* relop_text(RelOp op) {
  switch (op) {
    case RelOp::eq: return "=";
    case RelOp::ne: return "!=";
    case RelOp::lt: return "<";
    case RelOp::le: return "<=";
    case RelOp::gt: return ">";
    case RelOp::ge: return ">=";
  }
  return "?";
}

void Constraint::collect_vars(std::set<std::string>& out) const {
  lhs.collect_vars(out);
  rhs.collect_vars(out);
}

bool Constraint::operator==(const Constraint& other) const {
  return op == other.op && lhs == other.lhs && rhs == other.rhs;
}

std::string Constraint::str() const {
  return lhs.str() + relop_text(op) + rhs.str();
}

bool ConstrainedFormula::ground() const {
  if (!atom.ground()) return false;
  for (const auto& c : constraints)
    if (!c.ground()) return false;
  return true;
}

void ConstrainedFormula::collect_vars(std::set<std::string>& out) const {
  atom.collect_vars(out);
  for (const auto& c : constraints) c.collect_vars(out);
}

namespace {

/// Multiset comparison by pairing off equal elements.
bool constraints_multiset_eq(const std::vector<Constraint>& a,
                             const std::vector<Constraint>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ca : a) {
    bool found = false;
    for (size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && ca == b[i]) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool ConstrainedFormula::operator==(const ConstrainedFormula& other) const {
  return atom == other.atom && constraints_multiset_eq(constraints, other.constraints);
}

std::string ConstrainedFormula::str() const {
  if (constraints.empty()) return atom.str();
  std::ostringstream os;
  os << atom.str() << ":{";
  for (size_t i = 0; i < constraints.size(); ++i) {
    if (i) os << ',';
    os << constraints[i].str();
  }
  os << '}';
  return os.str();
}

void Substitution::bind(const std::string& var, Term term) {
  if (term.is_var() && term.name() == var) return;
  bindings_.insert_or_assign(var, std::move(term));
}

const Term* Substitution::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Substitution Substitution::merged(const Substitution& extra) const {
  Substitution out = *this;
  for (const auto& [name, term] : extra.bindings_) out.bindings_.emplace(name, term);
  return out;
}

bool Substitution::operator==(const Substitution& other) const {
  return bindings_ == other.bindings_;
}

std::string Substitution::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [name, term] : bindings_) {
    if (!first) os << ',';
    first = false;
    os << name << '/' << term.str();
  }
  os << '}';
  return os.str();
}

namespace {

Term apply_term(const Term& t, const Substitution& sigma, std::set<std::string>& visiting) {
  switch (t.kind()) {
    case Term::Kind::constant:
    case Term::Kind::number: return t;
    case Term::Kind::variable: {
      const Term* bound = sigma.lookup(t.name());
      if (!bound) return t;
      if (!visiting.insert(t.name()).second) return t;  // cycle guard
      Term out = apply_term(*bound, sigma, visiting);
      visiting.erase(t.name());
      return out;
    }
    case Term::Kind::compound: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(apply_term(a, sigma, visiting));
        changed = changed || args.back() != a;
      }
      if (!changed) return t;
      return Term::fn(t.name(), std::move(args));
    }
  }
  return t;
}

}  // namespace

Term apply_subst(const Term& t, const Substitution& sigma) {
  if (t.ground() || sigma.empty()) return t;
  std::set<std::string> visiting;
  return apply_term(t, sigma, visiting);
}

AtomicFormula apply_subst(const AtomicFormula& f, const Substitution& sigma) {
  return AtomicFormula{f.predicate, apply_subst(f.args, sigma)};
}

Constraint apply_subst(const Constraint& c, const Substitution& sigma) {
  return Constraint{apply_subst(c.lhs, sigma), c.op, apply_subst(c.rhs, sigma)};
}

ConstrainedFormula apply_subst(const ConstrainedFormula& cf, const Substitution& sigma) {
  return ConstrainedFormula{apply_subst(cf.atom, sigma), apply_subst(cf.constraints, sigma)};
}

SetElem apply_subst(const SetElem& e, const Substitution& sigma) {
  if (std::holds_alternative<Term>(e)) return apply_subst(std::get<Term>(e), sigma);
  return apply_subst(std::get<Constraint>(e), sigma);
}

bool set_elem_eq(const SetElem& a, const SetElem& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<Term>(a)) return std::get<Term>(a) == std::get<Term>(b);
  return std::get<Constraint>(a) == std::get<Constraint>(b);
}

std::string set_elem_text(const SetElem& e) {
  if (std::holds_alternative<Term>(e)) return std::get<Term>(e).str();
  return std::get<Constraint>(e).str();
}

namespace {

bool occurs(const std::string& var, const Term& t, const Substitution& sigma) {
  switch (t.kind()) {
    case Term::Kind::constant:
    case Term::Kind::number: return false;
    case Term::Kind::variable: {
      if (t.name() == var) return true;
      const Term* bound = sigma.lookup(t.name());
      return bound && occurs(var, *bound, sigma);
    }
    case Term::Kind::compound:
      for (const auto& a : t.args())
        if (occurs(var, a, sigma)) return true;
      return false;
  }
  return false;
}

Term walk(Term t, const Substitution& sigma) {
  while (t.is_var()) {
    const Term* bound = sigma.lookup(t.name());
    if (!bound) break;
    t = *bound;
  }
  return t;
}

bool unify_terms(const Term& a, const Term& b, Substitution& sigma) {
  Term x = walk(a, sigma);
  Term y = walk(b, sigma);
  if (x.is_var()) {
    if (y.is_var() && y.name() == x.name()) return true;
    if (occurs(x.name(), y, sigma)) return false;
    sigma.bind(x.name(), y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.name(), x, sigma)) return false;
    sigma.bind(y.name(), x);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::constant: return x.name() == y.name();
    case Term::Kind::number: return x.value() == y.value();
    case Term::Kind::compound: {
      if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
      for (size_t i = 0; i < x.args().size(); ++i)
        if (!unify_terms(x.args()[i], y.args()[i], sigma)) return false;
      return true;
    }
    default: return false;
  }
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution sigma;
  if (!unify_terms(a, b, sigma)) return std::nullopt;
  return sigma;
}

std::optional<Substitution> unify(const AtomicFormula& a, const AtomicFormula& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution sigma;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify_terms(a.args[i], b.args[i], sigma)) return std::nullopt;
  return sigma;
}

StateOfAffairs::StateOfAffairs(std::vector<ConstrainedFormula> entries) {
  for (auto& cf : entries) {
    if (!contains(cf)) entries_.push_back(std::move(cf));
  }
}

bool StateOfAffairs::contains(const ConstrainedFormula& cf) const {
  return std::find(entries_.begin(), entries_.end(), cf) != entries_.end();
}

StateOfAffairs StateOfAffairs::added(const ConstrainedFormula& cf) const {
  if (!cf.ground())
    throw Error(ErrorKind::non_ground_fact, "cannot add " + cf.str());
  if (contains(cf)) return *this;
  StateOfAffairs out = *this;
  out.entries_.push_back(cf);
  return out;
}

StateOfAffairs StateOfAffairs::removed(const ConstrainedFormula& cf) const {
  auto it = std::find(entries_.begin(), entries_.end(), cf);
  if (it == entries_.end()) return *this;
  StateOfAffairs out = *this;
  out.entries_.erase(out.entries_.begin() + (it - entries_.begin()));
  return out;
}

bool StateOfAffairs::operator==(const StateOfAffairs& other) const {
  return entries_ == other.entries_;
}

std::vector<Substitution> match_in_state(const StateOfAffairs& state,
                                         const ConstrainedFormula& pattern) {
  std::vector<Substitution> out;
  for (const auto& entry : state.entries()) {
    auto sigma = unify(pattern.atom, entry.atom);
    if (!sigma) continue;
    // Bindings must flow pattern -> entry: the rewritten pattern has to
    // coincide with the entry as stored.
    if (apply_subst(pattern.atom, *sigma) != entry.atom) continue;
    auto rewritten = apply_subst(pattern.constraints, *sigma);
    if (!constraints_multiset_eq(rewritten, entry.constraints)) continue;
    out.push_back(*sigma);
  }
  return out;
}

void EventSet::insert(AtomicFormula formula, std::string agent) {
  if (!formula.ground())
    throw Error(ErrorKind::non_ground_event, formula.str());
  if (contains(formula)) return;
  events_.push_back(Event{std::move(formula), std::move(agent)});
}

bool EventSet::contains(const AtomicFormula& formula) const {
  for (const auto& e : events_)
    if (e.formula == formula) return true;
  return false;
}

bool EventSet::operator==(const EventSet& other) const {
  return events_ == other.events_;
}

}  // namespace instar
