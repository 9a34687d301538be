#pragma once

#include <stdexcept>
#include <string>

namespace instar {

/// Runtime failure categories shared across the library. Parsing has its own
/// diagnostic channel; Error is for evaluation and execution.
enum class ErrorKind {
  non_ground_fact,
  non_ground_event,
  division_by_zero,
  non_ground,
  unknown_functor,
  type_mismatch,
  unsupported_constraint,
  unknown_builtin,
  non_ground_builtin_input,
  istar_disabled,
  chain_limit_exceeded,
  unknown_neuron,
  arity_mismatch,
  spec_invariant,
  io,
  bad_record,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace instar
