#include "instar/constraints.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "instar/error.hpp"

namespace instar {

Rational eval_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::number: return t.value();
    case Term::Kind::variable:
      throw Error(ErrorKind::non_ground, "free variable " + t.name());
    case Term::Kind::constant:
      throw Error(ErrorKind::unknown_functor, "non-numeric constant " + t.name());
    case Term::Kind::compound: break;
  }
  const auto& f = t.name();
  if (t.args().size() == 1 && f == "-") return -eval_term(t.args()[0]);
  if (t.args().size() == 2 && is_arith_functor(f, 2)) {
    Rational a = eval_term(t.args()[0]);
    Rational b = eval_term(t.args()[1]);
    if (f == "+") return a + b;
    if (f == "-") return a - b;
    if (f == "*") return a * b;
    if (b == 0) throw Error(ErrorKind::division_by_zero, t.str());
    return a / b;
  }
  throw Error(ErrorKind::unknown_functor, t.str());
}

namespace {

bool compare(RelOp op, const Rational& a, const Rational& b) {
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

/// Numeric value of a ground term, or nullopt when it is symbolic.
std::optional<Rational> try_eval(const Term& t) {
  try {
    return eval_term(t);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::unknown_functor) return std::nullopt;
    throw;
  }
}

}  // namespace

bool holds_constraint(const Constraint& c) {
  if (!c.ground())
    throw Error(ErrorKind::non_ground, c.str());
  auto lhs = try_eval(c.lhs);
  auto rhs = try_eval(c.rhs);
  if (lhs && rhs) return compare(c.op, *lhs, *rhs);
  if (c.op == RelOp::eq) return !lhs && !rhs && c.lhs == c.rhs;
  if (c.op == RelOp::ne) return !(!lhs && !rhs && c.lhs == c.rhs);
  throw Error(ErrorKind::type_mismatch,
              "ordered comparison of non-numbers: " + c.str());
}

namespace {

/// One side of a fragment constraint: optional variable plus rational offset.
struct LinSide {
  std::optional<std::string> var;
  Rational offset;
};

LinSide lin_side(const Term& t) {
  if (t.ground()) {
    try {
      return LinSide{std::nullopt, eval_term(t)};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::unknown_functor)
        throw Error(ErrorKind::unsupported_constraint, "non-numeric side: " + t.str());
      throw;
    }
  }
  switch (t.kind()) {
    case Term::Kind::variable: return LinSide{t.name(), Rational(0)};
    case Term::Kind::compound: break;
    default:
      throw Error(ErrorKind::unsupported_constraint, t.str());
  }
  const auto& f = t.name();
  if (t.args().size() == 2 && (f == "+" || f == "-")) {
    LinSide a = lin_side(t.args()[0]);
    LinSide b = lin_side(t.args()[1]);
    if (f == "+") {
      if (a.var && b.var)
        throw Error(ErrorKind::unsupported_constraint, "two variables summed: " + t.str());
      return LinSide{a.var ? a.var : b.var, a.offset + b.offset};
    }
    if (b.var)
      throw Error(ErrorKind::unsupported_constraint, "subtracted variable: " + t.str());
    return LinSide{a.var, a.offset - b.offset};
  }
  throw Error(ErrorKind::unsupported_constraint, t.str());
}

RelOp flip(RelOp op) {
  switch (op) {
    case RelOp::lt: return RelOp::gt;
    case RelOp::le: return RelOp::ge;
    case RelOp::gt: return RelOp::lt;
    case RelOp::ge: return RelOp::le;
    default: return op;
  }
}

/// x_to - x_from <= weight (strict when open). Node 0 is the zero reference.
struct Edge {
  int from, to;
  Rational weight;
  bool open;
};

/// Feasibility of a strict/weak difference system: infeasible iff some cycle
/// has negative total weight, or zero weight with a strict edge. Distances
/// are lexicographic (numeric weight, then strict-edge count), so a
/// zero-weight strict cycle keeps relaxing and is caught like any negative
/// cycle.
bool feasible(int nodes, const std::vector<Edge>& edges) {
  std::vector<Rational> dist(nodes, Rational(0));
  std::vector<long> stricts(nodes, 0);
  auto tighter = [&](const Rational& w, long k, int node) {
    return w < dist[node] || (w == dist[node] && k > stricts[node]);
  };
  for (int pass = 0; pass < nodes; ++pass) {
    bool changed = false;
    for (const auto& e : edges) {
      Rational w = dist[e.from] + e.weight;
      long k = stricts[e.from] + (e.open ? 1 : 0);
      if (tighter(w, k, e.to)) {
        dist[e.to] = w;
        stricts[e.to] = k;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  for (const auto& e : edges) {
    Rational w = dist[e.from] + e.weight;
    long k = stricts[e.from] + (e.open ? 1 : 0);
    if (tighter(w, k, e.to)) return false;
  }
  return true;
}

/// Difference constraint var(a) - var(b) <= c, with node -1 meaning the zero
/// reference; ne constraints are branched.
struct Diff {
  int a, b;
  Rational c;
  bool open;
};

struct Branch {
  Diff less, greater;  // the two alternatives of a disequality
};

bool search(std::vector<Edge>& edges, int nodes, const std::vector<Branch>& branches,
            size_t next) {
  if (!feasible(nodes, edges)) return false;
  if (next == branches.size()) return true;
  for (const Diff* d : {&branches[next].less, &branches[next].greater}) {
    edges.push_back(Edge{d->b + 1, d->a + 1, d->c, d->open});
    if (search(edges, nodes, branches, next + 1)) {
      edges.pop_back();
      return true;
    }
    edges.pop_back();
  }
  return false;
}

}  // namespace

bool sat(const std::vector<Constraint>& constraints) {
  std::map<std::string, int> var_ids;
  auto var_id = [&](const std::string& name) {
    auto it = var_ids.find(name);
    if (it != var_ids.end()) return it->second;
    int id = static_cast<int>(var_ids.size());
    var_ids.emplace(name, id);
    return id;
  };

  std::vector<Edge> edges;
  std::vector<Branch> branches;

  // Emit x_a - x_b <= c as an edge (node index shifted by 1 for the zero node).
  auto emit_le = [&](int a, int b, const Rational& c, bool open) {
    edges.push_back(Edge{b + 1, a + 1, c, open});
  };

  for (const auto& cn : constraints) {
    if (cn.ground()) {
      if (!holds_constraint(cn)) return false;
      continue;
    }
    LinSide l = lin_side(cn.lhs);
    LinSide r = lin_side(cn.rhs);
    RelOp op = cn.op;
    if (!l.var && r.var) {
      std::swap(l, r);
      op = flip(op);
    }
    if (!l.var) {
      if (!compare(op, l.offset, r.offset)) return false;
      continue;
    }
    int a = var_id(*l.var);
    // l.var + l.offset  op  [r.var +] r.offset
    Rational c = r.offset - l.offset;
    int b = r.var ? var_id(*r.var) : -1;
    if (r.var && *r.var == *l.var) {
      if (!compare(op, Rational(0), c)) return false;
      continue;
    }
    switch (op) {
      case RelOp::le: emit_le(a, b, c, false); break;
      case RelOp::lt: emit_le(a, b, c, true); break;
      case RelOp::ge: emit_le(b, a, -c, false); break;
      case RelOp::gt: emit_le(b, a, -c, true); break;
      case RelOp::eq:
        emit_le(a, b, c, false);
        emit_le(b, a, -c, false);
        break;
      case RelOp::ne:
        branches.push_back(Branch{Diff{a, b, c, true}, Diff{b, a, -c, true}});
        break;
    }
  }

  int nodes = static_cast<int>(var_ids.size()) + 1;
  return search(edges, nodes, branches, 0);
}

bool seteq(const std::vector<SetElem>& l, const std::vector<SetElem>& r) {
  if (l.size() != r.size()) return false;
  auto subset = [](const std::vector<SetElem>& a, const std::vector<SetElem>& b) {
    for (const auto& ea : a) {
      bool found = false;
      for (const auto& eb : b)
        if (set_elem_eq(ea, eb)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  };
  return subset(l, r) && subset(r, l);
}

bool constraint_member(const Constraint& element, const std::vector<Constraint>& set,
                       const Substitution& sigma) {
  Constraint needle = apply_subst(element, sigma);
  for (const auto& c : set)
    if (apply_subst(c, sigma) == needle) return true;
  return false;
}

}  // namespace instar
