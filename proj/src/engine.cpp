#include "instar/engine.hpp"

#include <algorithm>

#include "instar/constraints.hpp"

namespace instar {

void FiredRegistry::reset() {
  fired_.clear();
  fired_.emplace("false", "false");  // sentinel
}

bool FiredRegistry::contains(const std::string& condition_key,
                             const std::string& actions_key) const {
  return fired_.count({condition_key, actions_key}) > 0;
}

void FiredRegistry::insert(std::string condition_key, std::string actions_key) {
  fired_.emplace(std::move(condition_key), std::move(actions_key));
}

void StepLog::note_ignored(const AtomicFormula& id) {
  for (const auto& seen : ignored)
    if (seen == id) return;
  ignored.push_back(id);
}

void StepLog::note_prevented(const AtomicFormula& id) {
  for (const auto& seen : prevented)
    if (seen == id) return;
  prevented.push_back(id);
}

RuleView RuleView::of(const RuleBase& rb) {
  RuleView view;
  for (const auto& entry : rb.rules) {
    switch (entry.rule.kind) {
      case Rule::Kind::eca: view.eca.push_back(&entry); break;
      case Rule::Kind::if_then: view.ifs.push_back(&entry); break;
      case Rule::Kind::ignore: view.ignores.push_back(&entry); break;
      case Rule::Kind::prevent: view.prevents.push_back(&entry); break;
      case Rule::Kind::force: view.forces.push_back(&entry); break;
      case Rule::Kind::expectation: break;  // desugared before execution
    }
  }
  return view;
}

std::vector<Substitution> Engine::holds(const StateOfAffairs& delta, const Condition& c,
                                        const Substitution& seed,
                                        const Rational& now) const {
  switch (c.kind) {
    case Condition::Kind::conjunction: {
      std::vector<Substitution> out;
      for (const auto& left : holds(delta, *c.lhs, seed, now)) {
        for (auto& full : holds(delta, *c.rhs, left, now)) out.push_back(std::move(full));
      }
      return out;
    }
    case Condition::Kind::negation: {
      if (holds(delta, *c.lhs, seed, now).empty()) return {seed};
      return {};
    }
    case Condition::Kind::sat: {
      if (sat(apply_subst(c.constraints, seed))) return {seed};
      return {};
    }
    case Condition::Kind::set_eq: {
      std::vector<SetElem> l, r;
      for (const auto& e : c.left_set) l.push_back(apply_subst(e, seed));
      for (const auto& e : c.right_set) r.push_back(apply_subst(e, seed));
      if (seteq(l, r)) return {seed};
      return {};
    }
    case Condition::Kind::member: {
      if (constraint_member(c.element, c.constraints, seed)) return {seed};
      return {};
    }
    case Condition::Kind::time_is: {
      Term arg = apply_subst(c.time_arg, seed);
      if (arg.is_var()) {
        Substitution out = seed;
        out.bind(arg.name(), Term::num(now));
        return {out};
      }
      if (eval_term(arg) == now) return {seed};
      return {};
    }
    case Condition::Kind::truth: return {seed};
    case Condition::Kind::fact: {
      ConstrainedFormula pattern = apply_subst(c.formula, seed);
      std::vector<Substitution> out;
      for (const auto& m : match_in_state(delta, pattern)) out.push_back(seed.merged(m));
      return out;
    }
    case Condition::Kind::builtin: {
      const BuiltinFn* fn = builtins_ ? builtins_->find(c.builtin_name) : nullptr;
      if (!fn) throw Error(ErrorKind::unknown_builtin, c.builtin_name);
      auto extra = (*fn)(apply_subst(c.builtin_args, seed));
      if (!extra) return {};
      return {seed.merged(*extra)};
    }
  }
  return {};
}

namespace {

void match_events_rec(const std::vector<AtomicFormula>& patterns, size_t index,
                      const EventSet& xi, const Substitution& sigma,
                      std::vector<Substitution>& out) {
  if (index == patterns.size()) {
    for (const auto& seen : out)
      if (seen == sigma) return;
    out.push_back(sigma);
    return;
  }
  AtomicFormula pattern = apply_subst(patterns[index], sigma);
  for (const auto& event : xi.events()) {
    auto m = unify(pattern, event.formula);
    if (!m) continue;
    match_events_rec(patterns, index + 1, xi, sigma.merged(*m), out);
  }
}

}  // namespace

std::vector<Substitution> Engine::match_events(const std::vector<AtomicFormula>& patterns,
                                               const EventSet& xi,
                                               const Substitution& seed) {
  std::vector<Substitution> out;
  match_events_rec(patterns, 0, xi, seed, out);
  return out;
}

std::pair<StateOfAffairs, RuleBase> Engine::apply_action(StateOfAffairs delta,
                                                         RuleBase rules,
                                                         const Action& action,
                                                         const Substitution& sigma) const {
  if (action.kind == Action::Kind::builtin) {
    const BuiltinFn* fn = builtins_ ? builtins_->find(action.builtin_name) : nullptr;
    if (!fn) throw Error(ErrorKind::unknown_builtin, action.builtin_name);
    (*fn)(apply_subst(action.builtin_args, sigma));
    return {std::move(delta), std::move(rules)};
  }

  if (!action.is_rule) {
    ConstrainedFormula cf = apply_subst(action.fact, sigma);
    if (action.kind == Action::Kind::add) return {delta.added(cf), std::move(rules)};
    return {delta.removed(cf), std::move(rules)};
  }

  if (!config_.istar_enabled)
    throw Error(ErrorKind::istar_disabled, "rule actions need istar mode: " + action.str());

  Term id_pattern = apply_subst(action.rule_id, sigma);
  if (action.kind == Action::Kind::add) {
    if (!action.rule_body)
      throw Error(ErrorKind::spec_invariant, "add of a rule without a body");
    auto id = AtomicFormula::from_term(id_pattern);
    if (!id || !id->ground())
      throw Error(ErrorKind::non_ground_fact, "rule id " + id_pattern.str());
    if (!rules.find(*id)) {
      Rule body = apply_subst(*action.rule_body, sigma);
      rules.rules.push_back(RuleEntry{std::move(*id), std::move(body)});
    }
    return {std::move(delta), std::move(rules)};
  }

  // del(rule(Id, Body)): remove the first entry whose id the pattern maps
  // onto; a variable body matches any rule, a concrete body must coincide.
  for (size_t i = 0; i < rules.rules.size(); ++i) {
    const RuleEntry& entry = rules.rules[i];
    Term entry_id = entry.id.to_term();
    auto m = unify(id_pattern, entry_id);
    if (!m || apply_subst(id_pattern, *m) != entry_id) continue;
    if (action.rule_body) {
      Rule body = apply_subst(apply_subst(*action.rule_body, sigma), *m);
      if (!(body == entry.rule)) continue;
    }
    rules.rules.erase(rules.rules.begin() + i);
    break;
  }
  return {std::move(delta), std::move(rules)};
}

bool Engine::check_prv(const StateOfAffairs& before, const StateOfAffairs& after,
                       const std::vector<const RuleEntry*>& prevents,
                       const Rational& now) const {
  for (const RuleEntry* entry : prevents) {
    if (holds(before, entry->rule.condition, {}, now).empty()) continue;
    if (!holds(after, entry->rule.target, {}, now).empty()) return false;
  }
  return true;
}

bool Engine::ignored(const StateOfAffairs& delta, const EventSet& xi,
                     const std::vector<AtomicFormula>& trigger_instance,
                     const std::vector<const RuleEntry*>& ignores,
                     const Rational& now) const {
  for (const RuleEntry* entry : ignores) {
    for (const auto& sm : match_events(entry->rule.events, xi, {})) {
      auto ignored_set = apply_subst(entry->rule.events, sm);
      bool intersects = false;
      for (const auto& e : ignored_set) {
        for (const auto& t : trigger_instance)
          if (e == t) {
            intersects = true;
            break;
          }
        if (intersects) break;
      }
      if (!intersects) continue;
      if (!holds(delta, entry->rule.condition, sm, now).empty()) return true;
    }
  }
  return false;
}

std::optional<Engine::Selected> Engine::select_rule(
    const StateOfAffairs& delta, const std::vector<const RuleEntry*>& ifs,
    const FiredRegistry& registry, const Rational& now) const {
  for (const RuleEntry* entry : ifs) {
    for (auto& sigma : holds(delta, entry->rule.condition, {}, now)) {
      std::string cond_key = apply_subst(entry->rule.condition, sigma).str();
      std::string act_key = actions_text(apply_subst(entry->rule.actions, sigma));
      if (!registry.contains(cond_key, act_key)) return Selected{entry, std::move(sigma)};
    }
  }
  return std::nullopt;
}

std::pair<StateOfAffairs, RuleBase> Engine::chain_if(StateOfAffairs delta, RuleBase rules,
                                                     const RuleView& view,
                                                     FiredRegistry& registry, StepLog& log,
                                                     const Rational& now,
                                                     int& budget) const {
  for (;;) {
    auto selected = select_rule(delta, view.ifs, registry, now);
    if (!selected) return {std::move(delta), std::move(rules)};
    if (--budget < 0)
      throw Error(ErrorKind::chain_limit_exceeded,
                  "if-rule chaining exceeded the configured budget");

    const Rule& rule = selected->rule->rule;
    registry.insert(apply_subst(rule.condition, selected->sigma).str(),
                    actions_text(apply_subst(rule.actions, selected->sigma)));

    StateOfAffairs candidate = delta;
    RuleBase candidate_rules = rules;
    for (const auto& action : rule.actions)
      std::tie(candidate, candidate_rules) = apply_action(
          std::move(candidate), std::move(candidate_rules), action, selected->sigma);

    if (check_prv(delta, candidate, view.prevents, now)) {
      delta = std::move(candidate);
      rules = std::move(candidate_rules);
      log.fired.push_back(Firing{selected->rule->id, selected->sigma});
    } else {
      // Consumed: the registry entry stays, the effects are dropped.
      log.note_prevented(selected->rule->id);
    }
  }
}

std::pair<StateOfAffairs, RuleBase> Engine::apply_rule_action_sets(
    StateOfAffairs delta, RuleBase rules, const std::vector<Pending>& pending,
    const RuleView& view, FiredRegistry& registry, StepLog& log, const Rational& now,
    int& budget) const {
  for (const auto& p : pending) {
    if (--budget < 0)
      throw Error(ErrorKind::chain_limit_exceeded,
                  "action application exceeded the configured budget");
    StateOfAffairs candidate = delta;
    RuleBase candidate_rules = rules;
    for (const auto& action : p.actions)
      std::tie(candidate, candidate_rules) =
          apply_action(std::move(candidate), std::move(candidate_rules), action, p.sigma);

    if (!check_prv(delta, candidate, view.prevents, now)) {
      log.note_prevented(p.rule->id);
      continue;
    }
    delta = std::move(candidate);
    rules = std::move(candidate_rules);
    if (p.log_fire) log.fired.push_back(Firing{p.rule->id, p.sigma});
    std::tie(delta, rules) =
        chain_if(std::move(delta), std::move(rules), view, registry, log, now, budget);
  }
  return {std::move(delta), std::move(rules)};
}

Engine::ForceOutcome Engine::step_force(StateOfAffairs delta, RuleBase rules,
                                        const EventSet& xi, const RuleView& view,
                                        FiredRegistry& registry, StepLog& log,
                                        const Rational& now, int& budget) const {
  std::vector<Pending> pending;
  std::set<std::string> seen;
  EventSet xi_prime = xi;

  for (const RuleEntry* entry : view.forces) {
    for (const auto& sm : match_events(entry->rule.events, xi, {})) {
      auto trigger = apply_subst(entry->rule.events, sm);
      if (ignored(delta, xi, trigger, view.ignores, now)) {
        log.note_ignored(entry->id);
        continue;
      }
      for (auto& sigma : holds(delta, entry->rule.condition, sm, now)) {
        auto forced = apply_subst(entry->rule.forced_events, sigma);
        std::string key = entry->id.str() + "|";
        for (const auto& f : forced) key += f.str() + ",";
        key += "|" + actions_text(apply_subst(entry->rule.actions, sigma));
        if (!seen.insert(key).second) continue;

        log.fired.push_back(Firing{entry->id, sigma});
        for (const auto& f : forced) {
          if (!f.ground()) throw Error(ErrorKind::non_ground_event, f.str());
          if (!xi_prime.contains(f)) {
            xi_prime.insert(f, "institution");
            log.forced.push_back(Event{f, "institution"});
          }
        }
        pending.push_back(Pending{entry, entry->rule.actions, std::move(sigma), false});
      }
    }
  }

  auto [state, new_rules] = apply_rule_action_sets(
      std::move(delta), std::move(rules), pending, view, registry, log, now, budget);
  return ForceOutcome{std::move(state), std::move(new_rules), std::move(xi_prime)};
}

std::pair<StateOfAffairs, RuleBase> Engine::step_eca(StateOfAffairs delta, RuleBase rules,
                                                     const EventSet& xi_prime,
                                                     const RuleView& view,
                                                     FiredRegistry& registry, StepLog& log,
                                                     const Rational& now,
                                                     int& budget) const {
  std::vector<Pending> pending;
  std::set<std::string> seen;

  for (const RuleEntry* entry : view.eca) {
    for (const auto& sm : match_events(entry->rule.events, xi_prime, {})) {
      auto trigger = apply_subst(entry->rule.events, sm);
      if (ignored(delta, xi_prime, trigger, view.ignores, now)) {
        log.note_ignored(entry->id);
        continue;
      }
      for (auto& sigma : holds(delta, entry->rule.condition, sm, now)) {
        std::string key =
            entry->id.str() + "|" + actions_text(apply_subst(entry->rule.actions, sigma));
        if (!seen.insert(key).second) continue;
        pending.push_back(Pending{entry, entry->rule.actions, std::move(sigma), true});
      }
    }
  }

  return apply_rule_action_sets(std::move(delta), std::move(rules), pending, view,
                                registry, log, now, budget);
}

Rational Engine::now_for_step(int step) const {
  if (config_.injected_clock && step >= 0 &&
      static_cast<size_t>(step) < config_.injected_clock->size())
    return (*config_.injected_clock)[static_cast<size_t>(step)];
  return Rational(step);
}

StepOutcome Engine::macro_step(const StateOfAffairs& delta, const EventSet& xi,
                               const RuleBase& rules, int step_index) const {
  const Rational now = now_for_step(step_index);
  const RuleBase snapshot = rules;  // this step runs on the rules as of entry
  const RuleView view = RuleView::of(snapshot);

  FiredRegistry registry;
  StepLog log;
  int budget = config_.max_chain_iterations;

  StateOfAffairs state = delta;
  RuleBase working = rules;

  std::tie(state, working) =
      chain_if(std::move(state), std::move(working), view, registry, log, now, budget);
  auto forced = step_force(std::move(state), std::move(working), xi, view, registry, log,
                           now, budget);
  std::tie(state, working) = step_eca(std::move(forced.state), std::move(forced.rules),
                                      forced.xi_prime, view, registry, log, now, budget);

  TransitionRecord record;
  record.step = step_index;
  record.state_before = delta;
  record.events = xi.events();
  record.forced_events = std::move(log.forced);
  record.fired = std::move(log.fired);
  record.ignored = std::move(log.ignored);
  record.prevented = std::move(log.prevented);
  record.state_after = state;

  return StepOutcome{std::move(state), std::move(working), std::move(record)};
}

RunResult Engine::run(StateOfAffairs initial, const std::vector<EventSet>& trace,
                      RuleBase rules) const {
  RunResult result;
  result.final_state = std::move(initial);
  result.final_rules = std::move(rules);
  for (size_t t = 0; t < trace.size(); ++t) {
    try {
      StepOutcome outcome = macro_step(result.final_state, trace[t], result.final_rules,
                                       static_cast<int>(t));
      result.records.push_back(std::move(outcome.record));
      result.final_state = std::move(outcome.state);
      result.final_rules = std::move(outcome.rules);
    } catch (const Error& e) {
      result.error = e;
      break;
    }
  }
  return result;
}

}  // namespace instar
