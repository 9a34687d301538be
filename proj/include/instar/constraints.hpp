#pragma once

#include <vector>

#include "instar/term.hpp"

namespace instar {

/// Evaluates a ground arithmetic term to an exact rational.
/// Throws Error: non_ground on free variables, division_by_zero,
/// unknown_functor on symbolic constants or non-arithmetic compounds.
Rational eval_term(const Term& t);

/// Decides a single ground constraint. Non-numeric sides support = and != by
/// structural equality; ordered comparison of non-numbers throws
/// type_mismatch.
bool holds_constraint(const Constraint& c);

/// Joint satisfiability over the rationals of a constraint set drawn from the
/// decidable fragment: ground constraints, single-variable bounds (X < 3),
/// variable-variable comparisons (X <= Y) and difference forms (X > Y + 2).
/// Disequalities are split into the two strict alternatives; infeasibility is
/// detected as a negative (or zero-with-strict-edge) cycle in the difference
/// graph. Anything outside the fragment throws unsupported_constraint.
bool sat(const std::vector<Constraint>& constraints);

/// Mutual inclusion plus equal cardinality.
bool seteq(const std::vector<SetElem>& l, const std::vector<SetElem>& r);

/// Syntactic membership of element*sigma in set*sigma.
bool constraint_member(const Constraint& element, const std::vector<Constraint>& set,
                       const Substitution& sigma);

}  // namespace instar
