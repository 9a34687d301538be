#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "instar/builtins.hpp"
#include "instar/error.hpp"
#include "instar/rule.hpp"

namespace instar {

struct EngineConfig {
  int max_chain_iterations = 10000;
  bool istar_enabled = false;
  /// Per-step time values; when absent the clock is the 0-based step index.
  std::optional<std::vector<Rational>> injected_clock;
};

/// Per-step memory of instantiated (condition, actions) pairs that already
/// fired, keyed by canonical text. Reset at the start of every macro step,
/// then seeded with the (false, false) sentinel.
class FiredRegistry {
 public:
  FiredRegistry() { reset(); }
  void reset();
  bool contains(const std::string& condition_key, const std::string& actions_key) const;
  void insert(std::string condition_key, std::string actions_key);

 private:
  std::set<std::pair<std::string, std::string>> fired_;
};

struct Firing {
  AtomicFormula rule_id;
  Substitution sigma;

  bool operator==(const Firing& other) const {
    return rule_id == other.rule_id && sigma == other.sigma;
  }
};

/// One transition of the labelled transition system: everything that happened
/// between two consecutive states.
struct TransitionRecord {
  int step = 0;
  StateOfAffairs state_before;
  std::vector<Event> events;         // input events
  std::vector<Event> forced_events;  // injected by force-rules this step
  std::vector<Firing> fired;
  std::vector<AtomicFormula> ignored;
  std::vector<AtomicFormula> prevented;
  StateOfAffairs state_after;
};

struct StepLog {
  std::vector<Firing> fired;
  std::vector<Event> forced;
  std::vector<AtomicFormula> ignored;
  std::vector<AtomicFormula> prevented;

  void note_ignored(const AtomicFormula& id);
  void note_prevented(const AtomicFormula& id);
};

/// Rule-base snapshot split by kind; entries keep declaration order.
/// Expectation rules are not executable and never appear here.
struct RuleView {
  std::vector<const RuleEntry*> eca, ifs, ignores, prevents, forces;

  static RuleView of(const RuleBase& rb);
};

struct StepOutcome {
  StateOfAffairs state;
  RuleBase rules;
  TransitionRecord record;
};

struct RunResult {
  std::vector<TransitionRecord> records;
  StateOfAffairs final_state;
  RuleBase final_rules;
  std::optional<Error> error;  // first step error; earlier records are kept
};

/// The operational semantics. An engine instance is stateless apart from its
/// configuration; one macro step is a strictly ordered fold, so a single
/// instance must not be driven from two threads at once, while distinct
/// instances run in parallel freely.
class Engine {
 public:
  explicit Engine(EngineConfig config, const BuiltinRegistry* builtins = nullptr)
      : config_(std::move(config)), builtins_(builtins) {}

  /// All substitutions (extending seed) under which the condition holds
  /// against the state, in deterministic order.
  std::vector<Substitution> holds(const StateOfAffairs& delta, const Condition& c,
                                  const Substitution& seed, const Rational& now) const;

  /// Applies one action under sigma. Fact add/del touch the state; rule
  /// add/del touch the rule base (rejected unless istar is enabled); builtin
  /// actions leave both unchanged.
  std::pair<StateOfAffairs, RuleBase> apply_action(StateOfAffairs delta, RuleBase rules,
                                                   const Action& action,
                                                   const Substitution& sigma) const;

  /// True iff no prevent-rule is violated: never both "condition held before"
  /// and "target holds after".
  bool check_prv(const StateOfAffairs& before, const StateOfAffairs& after,
                 const std::vector<const RuleEntry*>& prevents,
                 const Rational& now) const;

  /// True iff some ignore-rule instance is contained in the occurred events
  /// and overlaps the trigger instance while its condition holds.
  bool ignored(const StateOfAffairs& delta, const EventSet& xi,
               const std::vector<AtomicFormula>& trigger_instance,
               const std::vector<const RuleEntry*>& ignores, const Rational& now) const;

  struct Selected {
    const RuleEntry* rule;
    Substitution sigma;
  };
  /// First if-rule (declaration order) with a substitution whose instantiated
  /// (condition, actions) pair has not fired yet; its first such substitution.
  std::optional<Selected> select_rule(const StateOfAffairs& delta,
                                      const std::vector<const RuleEntry*>& ifs,
                                      const FiredRegistry& registry,
                                      const Rational& now) const;

  /// Forward chaining to fixpoint. A selected rule is always consumed
  /// (recorded in the registry); its effects are kept only if the prevent
  /// check passes.
  std::pair<StateOfAffairs, RuleBase> chain_if(StateOfAffairs delta, RuleBase rules,
                                               const RuleView& view,
                                               FiredRegistry& registry, StepLog& log,
                                               const Rational& now, int& budget) const;

  struct Pending {
    const RuleEntry* rule;
    std::vector<Action> actions;
    Substitution sigma;
    bool log_fire = true;
  };
  /// Applies each pending action sequence atomically: a sequence whose result
  /// violates a prevent-rule is dropped whole; after each kept sequence the
  /// if-rules chain before the next one.
  std::pair<StateOfAffairs, RuleBase> apply_rule_action_sets(
      StateOfAffairs delta, RuleBase rules, const std::vector<Pending>& pending,
      const RuleView& view, FiredRegistry& registry, StepLog& log, const Rational& now,
      int& budget) const;

  struct ForceOutcome {
    StateOfAffairs state;
    RuleBase rules;
    EventSet xi_prime;
  };
  /// Collects every force-rule instance triggered by xi, injects the forced
  /// events (tagged agent "institution") and applies the rules' actions.
  ForceOutcome step_force(StateOfAffairs delta, RuleBase rules, const EventSet& xi,
                          const RuleView& view, FiredRegistry& registry, StepLog& log,
                          const Rational& now, int& budget) const;

  /// Collects every non-ignored ECA match against xi_prime, then applies the
  /// matched action sequences.
  std::pair<StateOfAffairs, RuleBase> step_eca(StateOfAffairs delta, RuleBase rules,
                                               const EventSet& xi_prime,
                                               const RuleView& view,
                                               FiredRegistry& registry, StepLog& log,
                                               const Rational& now, int& budget) const;

  /// One full pipeline: registry reset, if-chaining, force, ECA. Rule changes
  /// made by actions land in the returned rule base but the running step keeps
  /// its snapshot. Throws Error; the caller's inputs are untouched on throw.
  StepOutcome macro_step(const StateOfAffairs& delta, const EventSet& xi,
                         const RuleBase& rules, int step_index) const;

  /// Folds macro_step over the event trace, stopping at the first error.
  RunResult run(StateOfAffairs initial, const std::vector<EventSet>& trace,
                RuleBase rules) const;

  /// Every substitution mapping each pattern onto some occurred event
  /// (duplicate-free, deterministic order).
  static std::vector<Substitution> match_events(
      const std::vector<AtomicFormula>& patterns, const EventSet& xi,
      const Substitution& seed);

  const EngineConfig& config() const { return config_; }

 private:
  Rational now_for_step(int step) const;

  EngineConfig config_;
  const BuiltinRegistry* builtins_;
};

}  // namespace instar
