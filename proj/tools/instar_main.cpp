#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "instar/mlp.hpp"
#include "instar/scenario.hpp"
#include "instar/trace.hpp"

namespace {

using namespace instar;

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitEngineError = 2;

BuiltinRegistry make_registry(const std::string& mlp_spec_path) {
  BuiltinRegistry registry = standard_builtins();
  if (!mlp_spec_path.empty()) {
    MlpSpec spec = MlpSpec::from_json_text(read_file(mlp_spec_path));
    register_calculate(registry, std::move(spec));
  }
  return registry;
}

int cmd_parse(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDiagnostics;
  }
  ParseResult result = parse_program(text);
  for (const auto& d : result.diagnostics) std::cerr << d.text(path) << "\n";
  if (!result.ok()) return kExitDiagnostics;
  std::cout << serialize(*result.program);
  return kExitOk;
}

int cmd_run(const Scenario& scenario, const std::string& mlp_spec_path,
            const std::string& out_path) {
  ScenarioResult result;
  try {
    result = run_scenario(scenario, make_registry(mlp_spec_path));
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDiagnostics;
  }
  for (const auto& d : result.diagnostics)
    std::cerr << d.text(scenario.program_path) << "\n";
  if (!result.parse_ok && result.error) {
    std::cerr << result.error->what() << "\n";
    return kExitDiagnostics;
  }
  if (!result.parse_ok) return kExitDiagnostics;

  std::string rendered = render_record_file(result.records);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    try {
      write_file(out_path, rendered);
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return kExitDiagnostics;
    }
  }
  if (result.error) {
    std::cerr << result.error->what() << "\n";
    return kExitEngineError;
  }
  return kExitOk;
}

int cmd_step(const std::string& program_path, const std::string& mlp_spec_path,
             const EngineConfig& config) {
  try {
    std::string input((std::istreambuf_iterator<char>(std::cin)),
                      std::istreambuf_iterator<char>());
    StepRequest request = parse_step_request(input);

    ParseResult parsed = parse_program(read_file(program_path));
    for (const auto& d : parsed.diagnostics) std::cerr << d.text(program_path) << "\n";
    if (!parsed.ok()) return kExitDiagnostics;

    BuiltinRegistry registry = make_registry(mlp_spec_path);
    Engine engine(config, &registry);
    RuleBase rules = desugar_expectations(*parsed.program);
    try {
      StepOutcome outcome =
          engine.macro_step(request.state, request.events, rules, request.step);
      std::cout << record_json_line(outcome.record) << "\n";
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return kExitEngineError;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDiagnostics;
  }
}

int cmd_gen_mlp(const std::string& spec_path, const std::string& out_path) {
  try {
    MlpSpec spec = MlpSpec::from_json_text(read_file(spec_path));
    std::string program = serialize(gen_mlp_program(spec));
    if (out_path.empty()) {
      std::cout << program;
    } else {
      write_file(out_path, program);
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDiagnostics;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instar: rule-based institution engine"};
  app.require_subcommand(1);

  std::string parse_path;
  auto* parse_cmd = app.add_subcommand("parse", "check a program and print it canonically");
  parse_cmd->add_option("file", parse_path, "program file (.inst)")->required();

  Scenario scenario;
  std::string run_out, run_mlp_spec;
  long run_max_chain = 10000;
  bool run_istar = false;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write its records");
  run_cmd->add_option("--program", scenario.program_path, "program file")->required();
  run_cmd->add_option("--init", scenario.init_path, "initial state file");
  run_cmd->add_option("--trace", scenario.trace_path, "event trace file");
  run_cmd->add_option("--steps", scenario.steps, "number of macro steps");
  run_cmd->add_option("--out", run_out, "record output file (default stdout)");
  run_cmd->add_option("--mlp-spec", run_mlp_spec, "network spec backing calculate");
  run_cmd->add_option("--max-chain", run_max_chain, "if-rule chaining budget per step");
  run_cmd->add_flag("--istar", run_istar, "allow rule add/del actions");

  std::string step_program, step_mlp_spec;
  long step_max_chain = 10000;
  bool step_istar = false;
  auto* step_cmd =
      app.add_subcommand("step", "run one macro step from a JSON request on stdin");
  step_cmd->add_option("--program", step_program, "program file")->required();
  step_cmd->add_option("--mlp-spec", step_mlp_spec, "network spec backing calculate");
  step_cmd->add_option("--max-chain", step_max_chain, "if-rule chaining budget");
  step_cmd->add_flag("--istar", step_istar, "allow rule add/del actions");

  std::string gen_spec, gen_out;
  auto* gen_cmd = app.add_subcommand("gen-mlp", "compile a network spec into rules");
  gen_cmd->add_option("--spec", gen_spec, "network spec (JSON)")->required();
  gen_cmd->add_option("--out", gen_out, "program output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (parse_cmd->parsed()) return cmd_parse(parse_path);
  if (run_cmd->parsed()) {
    scenario.config.istar_enabled = run_istar;
    scenario.config.max_chain_iterations = static_cast<int>(run_max_chain);
    return cmd_run(scenario, run_mlp_spec, run_out);
  }
  if (step_cmd->parsed()) {
    EngineConfig config;
    config.istar_enabled = step_istar;
    config.max_chain_iterations = static_cast<int>(step_max_chain);
    return cmd_step(step_program, step_mlp_spec, config);
  }
  if (gen_cmd->parsed()) return cmd_gen_mlp(gen_spec, gen_out);
  return kExitDiagnostics;
}
