#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "instar/term.hpp"

namespace instar {

/// Host computation invoked from builtin(...) conditions and actions. Receives
/// the substituted argument terms; returns bindings for its output variables,
/// or nullopt when the call does not hold. Builtins must be pure and
/// deterministic and cannot touch the state or the rule base.
using BuiltinFn =
    std::function<std::optional<Substitution>(const std::vector<Term>& args)>;

class BuiltinRegistry {
 public:
  void add(std::string name, BuiltinFn fn) { fns_[std::move(name)] = std::move(fn); }
  const BuiltinFn* find(const std::string& name) const {
    auto it = fns_.find(name);
    return it == fns_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, BuiltinFn> fns_;
};

/// Registry with the stock builtins:
///   eval(Expr, Out) — binds Out to the exact rational value of the ground
///   arithmetic term Expr.
BuiltinRegistry standard_builtins();

}  // namespace instar
