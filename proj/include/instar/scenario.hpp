#pragma once

#include <string>
#include <vector>

#include "instar/engine.hpp"
#include "instar/parser.hpp"

namespace instar {

/// A runnable setup: program plus optional initial state and event trace.
struct Scenario {
  std::string program_path;
  std::string init_path;   // empty = start from the empty state
  std::string trace_path;  // empty = no events
  int steps = -1;          // -1 = as many steps as the trace has
  EngineConfig config;
};

struct ScenarioResult {
  bool parse_ok = false;
  std::vector<Diagnostic> diagnostics;
  std::vector<TransitionRecord> records;
  StateOfAffairs final_state;
  RuleBase final_rules;
  std::optional<Error> error;

  bool ok() const { return parse_ok && !error; }
};

/// Parses and desugars the program, loads state and trace, then folds the
/// engine over the steps. Parse problems land in diagnostics, load and engine
/// failures in error; records hold everything that completed.
ScenarioResult run_scenario(const Scenario& scenario, const BuiltinRegistry& builtins);

/// In-memory variant used by tests and the replay path.
ScenarioResult run_program(const std::string& program_text, StateOfAffairs initial,
                           std::vector<EventSet> trace, const EngineConfig& config,
                           const BuiltinRegistry& builtins);

}  // namespace instar
