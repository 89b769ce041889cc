#include "bq/semantics.hpp"

#include <algorithm>
#include <exception>
#include <set>

#include "bq/error.hpp"

namespace bq {

LiteralSet closure(const CompiledTheory& theory, LiteralSet literals) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& law : theory.static_laws)
      if (literals.contains_all(law.condition) && literals.insert(law.head)) changed = true;
  }
  return literals;
}

bool is_closed(const CompiledTheory& theory, const WorldState& s) {
  return std::all_of(theory.static_laws.begin(), theory.static_laws.end(),
                     [&](const CompiledStaticLaw& law) {
                       return !s.holds_all(law.condition) || s.holds(law.head);
                     });
}

namespace {

WorldState state_from_mask(std::size_t fluents, std::uint64_t mask) {
  std::vector<bool> truth(fluents);
  for (std::size_t i = 0; i < fluents; ++i) truth[i] = (mask >> i) & 1;
  return WorldState(std::move(truth));
}

void check_state_cap(const CompiledTheory& theory, std::size_t open, const Limits& limits) {
  if (open > limits.max_state_atoms || open >= 63)
    throw CapExceeded("state enumeration over " + std::to_string(open) + " open fluents exceeds cap " +
                      std::to_string(limits.max_state_atoms));
  (void)theory;
}

}  // namespace

std::vector<WorldState> enumerate_states(const CompiledTheory& theory, const Limits& limits) {
  const std::size_t m = theory.fluent_count();
  check_state_cap(theory, m, limits);
  const std::uint64_t total = std::uint64_t{1} << m;
  const std::int64_t chunks = static_cast<std::int64_t>(std::min<std::uint64_t>(total, 256));
  std::vector<std::vector<WorldState>> found(chunks);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      WorldState s = state_from_mask(m, mask);
      if (is_closed(theory, s)) found[c].push_back(std::move(s));
    }
  }

  std::vector<WorldState> out;
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_executable(const CompiledTheory& theory, const WorldState& s, ActionId a) {
  for (std::size_t idx : theory.executability_by_action[a])
    if (s.holds_all(theory.executability_laws[idx].condition)) return true;
  return false;
}

std::vector<ActionId> executable_actions(const CompiledTheory& theory, const WorldState& s) {
  std::vector<ActionId> out;
  for (ActionId a = 0; a < theory.action_count(); ++a)
    if (is_executable(theory, s, a)) out.push_back(a);
  return out;
}

Transition transition(const CompiledTheory& theory, const WorldState& s, ActionId a) {
  if (!is_executable(theory, s, a))
    throw TransitionError(TransitionFault::not_executable,
                          "action " + theory.actions[a] + " is not executable in " + theory.state_text(s));

  LiteralSet effects(theory.fluent_count());
  std::optional<Reward> reward;
  for (std::size_t idx : theory.causal_by_action[a]) {
    const auto& law = theory.causal_laws[idx];
    if (!s.holds_all(law.condition)) continue;
    for (Lit l : law.effects) effects.insert(l);
    if (reward && *reward != law.reward)
      throw TransitionError(TransitionFault::multiple_rewards,
                            "action " + theory.actions[a] + " fires laws with rewards " +
                                reward->to_string() + " and " + law.reward.to_string() + " in " +
                                theory.state_text(s));
    reward = law.reward;
  }
  if (!effects.is_consistent())
    throw TransitionError(TransitionFault::conflicting_effects,
                          "action " + theory.actions[a] + " has conflicting effects in " + theory.state_text(s));

  // Fired effects replace their fluent's value; everything else is inertial.
  WorldState next = s;
  for (Lit l : effects.literals()) next.set(l);

  LiteralSet closed = closure(theory, next.to_set());
  if (!closed.is_consistent())
    throw TransitionError(TransitionFault::inconsistent_successor,
                          "closure of the successor of " + theory.actions[a] + " in " +
                              theory.state_text(s) + " is inconsistent");
  return {s, a, WorldState::from_literals(closed), reward.value_or(Reward{})};
}

std::vector<WorldState> initial_world_states(const CompiledTheory& theory, const Limits& limits) {
  const std::size_t m = theory.fluent_count();
  std::set<WorldState> out;
  for (const auto& psi : theory.initial_states) {
    LiteralSet base = closure(theory, LiteralSet(m, psi));
    std::vector<FluentId> open;
    if (base.is_consistent()) {
      for (FluentId f = 0; f < m; ++f)
        if (!base.contains(Lit(f, true)) && !base.contains(Lit(f, false))) open.push_back(f);
      check_state_cap(theory, open.size(), limits);
    }
    std::size_t completions = 0;
    if (base.is_consistent()) {
      WorldState seed(std::vector<bool>(m, false));
      for (FluentId f = 0; f < m; ++f)
        if (base.contains(Lit(f, true))) seed.set(Lit(f, true));
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << open.size()); ++mask) {
        WorldState s = seed;
        for (std::size_t j = 0; j < open.size(); ++j) s.set(Lit(open[j], (mask >> j) & 1));
        if (is_closed(theory, s)) {
          out.insert(std::move(s));
          ++completions;
        }
      }
    }
    if (completions == 0) {
      std::string text = "{";
      for (std::size_t i = 0; i < psi.size(); ++i) text += (i ? ", " : "") + theory.literal_text(psi[i]);
      throw Error(ErrorKind::validation, "initial description " + text + "} admits no consistent completion");
    }
  }
  return {out.begin(), out.end()};
}

std::vector<double> Episode::reward_values() const {
  std::vector<double> out;
  out.reserve(rewards.size());
  for (const auto& r : rewards) out.push_back(r.to_double());
  return out;
}

bool episode_less(const Episode& a, const Episode& b) {
  if (a.states.front() != b.states.front()) return a.states.front() < b.states.front();
  if (a.actions != b.actions) return a.actions < b.actions;
  if (a.states != b.states) return a.states < b.states;
  return a.rewards < b.rewards;
}

void verify_episode(const CompiledTheory& theory, const Episode& e) {
  const std::size_t n = static_cast<std::size_t>(theory.horizon);
  if (e.actions.size() != n || e.states.size() != n + 1 || e.rewards.size() != n)
    throw Error(ErrorKind::trace, "episode does not have horizon " + std::to_string(n));
  for (std::size_t t = 0; t < n; ++t) {
    Transition tr;
    try {
      tr = transition(theory, e.states[t], e.actions[t]);
    } catch (const TransitionError& err) {
      throw Error(ErrorKind::trace, "step " + std::to_string(t) + ": " + err.what());
    }
    if (tr.to != e.states[t + 1])
      throw Error(ErrorKind::trace, "step " + std::to_string(t) + ": successor of " + theory.actions[e.actions[t]] +
                                        " is " + theory.state_text(tr.to) + ", trace has " +
                                        theory.state_text(e.states[t + 1]));
    if (tr.reward != e.rewards[t])
      throw Error(ErrorKind::trace, "step " + std::to_string(t) + ": reward of " + theory.actions[e.actions[t]] +
                                        " is " + tr.reward.to_string() + ", trace has " + e.rewards[t].to_string());
  }
}

}  // namespace bq
