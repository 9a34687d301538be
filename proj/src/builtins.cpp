#include "instar/builtins.hpp"

#include "instar/constraints.hpp"
#include "instar/error.hpp"

namespace instar {

namespace {

std::optional<Substitution> eval_builtin(const std::vector<Term>& args) {
  if (args.size() != 2)
    throw Error(ErrorKind::arity_mismatch, "eval expects (Expr, Out)");
  if (!args[0].ground())
    throw Error(ErrorKind::non_ground_builtin_input, args[0].str());
  Rational value = eval_term(args[0]);
  const Term& out = args[1];
  if (out.is_var()) {
    Substitution sigma;
    sigma.bind(out.name(), Term::num(value));
    return sigma;
  }
  if (out.is_num() && out.value() == value) return Substitution{};
  return std::nullopt;
}

}  // namespace

BuiltinRegistry standard_builtins() {
  BuiltinRegistry registry;
  registry.add("eval", eval_builtin);
  return registry;
}

}  // namespace instar
