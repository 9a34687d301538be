#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instar/rule.hpp"

namespace instar {

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
  bool warning = false;

  std::string text(std::string_view file = "") const;
};

struct ParseResult {
  std::optional<RuleBase> program;  // present iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

/// Parses a rule program: one `rule(Id, Body).` clause per rule, `%` line
/// comments. Never throws; malformed input comes back as diagnostics.
ParseResult parse_program(std::string_view text);

/// Canonical text; parse_program(serialize(rb)) reproduces rb structurally.
std::string serialize(const RuleBase& rb);

/// Rewrites every expectation rule into its add/fulfil/sanction triple,
/// in place in declaration order. Idempotent.
RuleBase desugar_expectations(const RuleBase& rb);

/// Single-item helpers for trace/state files and record replay.
std::optional<Term> parse_term_text(std::string_view text, std::string* error = nullptr);
std::optional<AtomicFormula> parse_formula_text(std::string_view text,
                                                std::string* error = nullptr);
std::optional<ConstrainedFormula> parse_constrained_formula_text(
    std::string_view text, std::string* error = nullptr);

}  // namespace instar
