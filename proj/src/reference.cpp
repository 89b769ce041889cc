#include <algorithm>

#include "bq/error.hpp"
#include "bq/q_estimator.hpp"
#include "bq/semantics.hpp"
#include "q_internal.hpp"

namespace bq::serial {

std::vector<WorldState> enumerate_states(const CompiledTheory& theory, const Limits& limits) {
  const std::size_t m = theory.fluent_count();
  if (m > limits.max_state_atoms || m >= 63)
    throw CapExceeded("state enumeration over " + std::to_string(m) + " open fluents exceeds cap " +
                      std::to_string(limits.max_state_atoms));
  std::vector<WorldState> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<bool> truth(m);
    for (std::size_t i = 0; i < m; ++i) truth[i] = (mask >> i) & 1;
    WorldState s(std::move(truth));
    if (is_closed(theory, s)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void walk(const CompiledTheory& theory, const EpisodeOptions& options, Episode& path, std::size_t& nodes,
          std::vector<Episode>& out) {
  if (path.actions.size() == static_cast<std::size_t>(theory.horizon)) {
    if (!options.require_goal || path.states.back().holds_all(theory.goal)) out.push_back(path);
    return;
  }
  for (ActionId a : executable_actions(theory, path.states.back())) {
    if (++nodes > options.limits.max_episode_nodes)
      throw CapExceeded("episode enumeration exceeds " + std::to_string(options.limits.max_episode_nodes) +
                        " search nodes");
    Transition tr = transition(theory, path.states.back(), a);
    path.states.push_back(tr.to);
    path.actions.push_back(a);
    path.rewards.push_back(tr.reward);
    walk(theory, options, path, nodes, out);
    path.states.pop_back();
    path.actions.pop_back();
    path.rewards.pop_back();
  }
}

}  // namespace

std::vector<Episode> enumerate_episodes(const CompiledTheory& theory, const EpisodeOptions& options) {
  std::vector<Episode> out;
  std::size_t nodes = 0;
  for (const auto& s : initial_world_states(theory, options.limits)) {
    Episode path{{s}, {}, {}};
    walk(theory, options, path, nodes, out);
  }
  return out;
}

QEstimate q_direct(const std::vector<Episode>& episodes, double gamma, QMode mode, Anchoring anchoring) {
  detail::check_episode_set(episodes);
  std::vector<std::vector<double>> tails;
  tails.reserve(episodes.size());
  for (const auto& e : episodes) tails.push_back(detail::episode_tails(e, gamma, anchoring));
  QTable table = detail::merge_tails(episodes, tails, gamma, mode);
  return {std::move(table), std::move(tails)};
}

}  // namespace bq::serial
