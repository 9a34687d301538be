#include "instar/scenario.hpp"

#include "instar/trace.hpp"

namespace instar {

ScenarioResult run_program(const std::string& program_text, StateOfAffairs initial,
                           std::vector<EventSet> trace, const EngineConfig& config,
                           const BuiltinRegistry& builtins) {
  ScenarioResult result;
  ParseResult parsed = parse_program(program_text);
  result.diagnostics = parsed.diagnostics;
  if (!parsed.ok()) return result;
  result.parse_ok = true;

  RuleBase rules = desugar_expectations(*parsed.program);
  Engine engine(config, &builtins);
  RunResult run = engine.run(std::move(initial), trace, std::move(rules));
  result.records = std::move(run.records);
  result.final_state = std::move(run.final_state);
  result.final_rules = std::move(run.final_rules);
  result.error = std::move(run.error);
  return result;
}

ScenarioResult run_scenario(const Scenario& scenario, const BuiltinRegistry& builtins) {
  ScenarioResult result;
  std::string program_text;
  StateOfAffairs initial;
  std::vector<EventSet> trace;
  try {
    program_text = read_file(scenario.program_path);
    if (!scenario.init_path.empty()) initial = load_state(scenario.init_path);
    if (!scenario.trace_path.empty()) trace = load_trace(scenario.trace_path);
  } catch (const Error& e) {
    result.error = e;
    return result;
  }

  size_t steps = scenario.steps < 0 ? trace.size() : static_cast<size_t>(scenario.steps);
  trace.resize(steps);

  return run_program(program_text, std::move(initial), std::move(trace), scenario.config,
                     builtins);
}

}  // namespace instar
