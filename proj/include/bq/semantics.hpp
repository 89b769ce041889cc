#pragma once

#include <vector>

#include "bq/compiled.hpp"
#include "bq/limits.hpp"

namespace bq {

/// Least superset of `literals` closed under the static laws. The fixpoint is
/// returned even when it is inconsistent; callers check is_consistent().
LiteralSet closure(const CompiledTheory& theory, LiteralSet literals);

/// Every static law whose condition holds in `s` has its head in `s`.
bool is_closed(const CompiledTheory& theory, const WorldState& s);

/// All complete, consistent, closed states, in canonical order. Throws
/// CapExceeded when the theory has more than `limits.max_state_atoms` fluents.
std::vector<WorldState> enumerate_states(const CompiledTheory& theory, const Limits& limits = {});

/// Actions with at least one executability law whose condition holds in `s`,
/// in canonical (id) order.
std::vector<ActionId> executable_actions(const CompiledTheory& theory, const WorldState& s);
bool is_executable(const CompiledTheory& theory, const WorldState& s, ActionId a);

struct Transition {
  WorldState from;
  ActionId action = 0;
  WorldState to;
  Reward reward;

  bool operator==(const Transition&) const = default;
};

/// Successor of executing `a` in `s`: fired effects override, every other
/// literal persists, then closure. The reward is that of the fired causal
/// laws, or zero when none fires. Throws TransitionError when `a` is not
/// executable, two fired laws demand complementary literals, fired laws
/// disagree on the reward, or closure is inconsistent.
Transition transition(const CompiledTheory& theory, const WorldState& s, ActionId a);

/// Each initial description completed to every closed state containing it,
/// unioned and sorted. Throws Error(validation) when a description has no
/// completion, CapExceeded when too many fluents are left open.
std::vector<WorldState> initial_world_states(const CompiledTheory& theory, const Limits& limits = {});

struct Episode {
  std::vector<WorldState> states;  // horizon + 1 entries
  std::vector<ActionId> actions;   // horizon entries
  std::vector<Reward> rewards;     // r_1 .. r_n

  std::size_t length() const { return actions.size(); }
  std::vector<double> reward_values() const;
  bool operator==(const Episode&) const = default;
};

/// Canonical episode order: initial state, then action sequence.
bool episode_less(const Episode& a, const Episode& b);

struct EpisodeOptions {
  bool require_goal = false;  // keep only episodes whose final state satisfies the goal
  Limits limits;
};

/// Every episode of exactly `theory.horizon` steps from every initial state.
/// Prefixes that reach a state with no executable action are not episodes.
/// Root branches (initial state, first action) run as parallel tasks; the
/// result is in canonical order and identical to serial::enumerate_episodes.
std::vector<Episode> enumerate_episodes(const CompiledTheory& theory, const EpisodeOptions& options = {});

/// Throws Error(trace) unless `e` satisfies the episode invariants: right
/// length, every action executable, every successor and reward as given by
/// transition().
void verify_episode(const CompiledTheory& theory, const Episode& e);

namespace serial {

/// Reference implementations, single-threaded, kept for cross-checking the
/// parallel kernels.
std::vector<WorldState> enumerate_states(const CompiledTheory& theory, const Limits& limits = {});
std::vector<Episode> enumerate_episodes(const CompiledTheory& theory, const EpisodeOptions& options = {});

}  // namespace serial

}  // namespace bq
