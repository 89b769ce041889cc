#include "bq/q_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bq/error.hpp"
#include "q_internal.hpp"

namespace bq {

const char* to_string(QMode mode) { return mode == QMode::qlearning ? "qlearning" : "sarsa"; }

DiscountSchedule::DiscountSchedule(double gamma, int horizon) : gamma_(gamma) {
  powers_.reserve(static_cast<std::size_t>(std::max(horizon, 0)) + 1);
  powers_.push_back(1.0);
  for (int i = 0; i < horizon; ++i) powers_.push_back(powers_.back() * gamma);
}

bool QKey::operator<(const QKey& o) const {
  if (depth != o.depth) return depth < o.depth;
  if (state != o.state) return state < o.state;
  return action < o.action;
}

std::optional<double> QTable::find(const WorldState& s, ActionId a, int depth) const {
  auto it = entries.find(QKey{s, a, depth});
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

double discounted_tail(std::span<const double> rewards, double gamma, std::size_t t, Anchoring anchoring) {
  double weight = 1.0;
  if (anchoring == Anchoring::episode_start)
    for (std::size_t i = 0; i < t; ++i) weight *= gamma;
  double sum = 0.0;
  for (std::size_t i = t; i < rewards.size(); ++i) {
    sum += weight * rewards[i];
    weight *= gamma;
  }
  return sum;
}

namespace detail {

void check_episode_set(const std::vector<Episode>& episodes) {
  if (episodes.empty()) throw Error(ErrorKind::validation, "episode set is empty");
  const std::size_t n = episodes.front().length();
  for (const auto& e : episodes)
    if (e.length() != n) throw Error(ErrorKind::validation, "episodes have mixed horizons");
}

std::vector<double> episode_tails(const Episode& e, double gamma, Anchoring anchoring) {
  const auto rewards = e.reward_values();
  std::vector<double> out(e.length());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = discounted_tail(rewards, gamma, t, anchoring);
  return out;
}

QTable merge_tails(const std::vector<Episode>& episodes, const std::vector<std::vector<double>>& tails,
                   double gamma, QMode mode) {
  QTable table;
  table.gamma = gamma;
  table.horizon = static_cast<int>(episodes.front().length());
  table.mode = mode;
  for (std::size_t e = 0; e < episodes.size(); ++e)
    for (std::size_t t = 0; t < tails[e].size(); ++t) {
      QKey key{episodes[e].states[t], episodes[e].actions[t], static_cast<int>(t)};
      auto [it, fresh] = table.entries.try_emplace(std::move(key), tails[e][t]);
      if (!fresh) it->second = std::max(it->second, tails[e][t]);
    }
  return table;
}

}  // namespace detail

QEstimate q_direct(const std::vector<Episode>& episodes, double gamma, QMode mode, Anchoring anchoring) {
  detail::check_episode_set(episodes);
  const auto count = static_cast<std::int64_t>(episodes.size());
  std::vector<std::vector<double>> tails(episodes.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t e = 0; e < count; ++e) tails[e] = detail::episode_tails(episodes[e], gamma, anchoring);
  QTable table = detail::merge_tails(episodes, tails, gamma, mode);
  return {std::move(table), std::move(tails)};
}

void OnlineQFold::consume(double reward) {
  if (consumed_ >= horizon_)
    throw Error(ErrorKind::trace, "reward after the end of a " + std::to_string(horizon_) + "-step episode");
  value_ += weight_ * reward;
  weight_ *= gamma_;
  ++consumed_;
}

double q_reconstruct(double initial_value, std::span<const double> rewards, double gamma, std::size_t t) {
  if (t == 0) throw Error(ErrorKind::validation, "reconstruction needs t >= 1");
  if (t > rewards.size())
    throw Error(ErrorKind::validation,
                "t = " + std::to_string(t) + " exceeds episode length " + std::to_string(rewards.size()));
  double prefix = 0.0;
  double weight = 1.0;
  for (std::size_t i = 0; i < t; ++i) {
    prefix += weight * rewards[i];
    weight *= gamma;
  }
  return (initial_value - prefix) / weight;
}

bool DepthTransition::operator<(const DepthTransition& o) const {
  if (depth != o.depth) return depth < o.depth;
  if (from != o.from) return from < o.from;
  if (action != o.action) return action < o.action;
  if (to != o.to) return to < o.to;
  return reward < o.reward;
}

std::vector<DepthTransition> episode_transitions(const std::vector<Episode>& episodes) {
  std::set<DepthTransition> out;
  for (const auto& e : episodes)
    for (std::size_t t = 0; t < e.length(); ++t)
      out.insert({e.states[t], e.actions[t], static_cast<int>(t), e.states[t + 1], e.rewards[t].to_double()});
  return {out.begin(), out.end()};
}

namespace {

std::map<std::pair<WorldState, int>, double> state_maxima(const QTable& table) {
  std::map<std::pair<WorldState, int>, double> out;
  for (const auto& [key, value] : table.entries) {
    auto [it, fresh] = out.try_emplace({key.state, key.depth}, value);
    if (!fresh) it->second = std::max(it->second, value);
  }
  return out;
}

}  // namespace

QUpdate q_update_once(const QTable& table, const std::vector<DepthTransition>& transitions) {
  const auto maxima = state_maxima(table);
  QUpdate result{table, 0.0};
  for (const auto& tr : transitions) {
    if (tr.depth < 1) continue;
    double next = 0.0;
    if (tr.depth + 1 < table.horizon) {
      auto it = maxima.find({tr.to, tr.depth + 1});
      if (it == maxima.end())
        throw Error(ErrorKind::validation, "no entries for successor at depth " + std::to_string(tr.depth + 1));
      next = it->second;
    }
    const double updated = tr.reward + table.gamma * next;
    auto& slot = result.table.entries[QKey{tr.from, tr.action, tr.depth}];
    result.max_change = std::max(result.max_change, std::abs(updated - slot));
    slot = updated;
  }
  return result;
}

QTable classic_oracle(const CompiledTheory& theory, const EpisodeOptions& options) {
  const int n = theory.horizon;
  struct Edge {
    WorldState from;
    ActionId action;
    WorldState to;
    double reward;
  };
  // Depth-layered reachable states and the transitions leaving them.
  std::vector<std::set<WorldState>> layers(static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(n));
  for (auto& s : initial_world_states(theory, options.limits)) layers[0].insert(std::move(s));
  std::size_t nodes = 0;
  for (int t = 0; t < n; ++t)
    for (const auto& s : layers[t])
      for (ActionId a : executable_actions(theory, s)) {
        if (++nodes > options.limits.max_episode_nodes)
          throw CapExceeded("oracle exceeds " + std::to_string(options.limits.max_episode_nodes) + " transitions");
        Transition tr = transition(theory, s, a);
        layers[t + 1].insert(tr.to);
        edges[t].push_back({s, a, std::move(tr.to), tr.reward.to_double()});
      }

  // Q(s,a,t) <- r + gamma * max_a' Q(s',a',t+1), learning rate 1, all keys
  // updated from the previous sweep until a sweep changes nothing. A key
  // with no completable future stays absent.
  std::map<QKey, double> q;
  auto best = [&](const std::map<QKey, double>& from, const WorldState& s, int depth) -> std::optional<double> {
    if (depth == n) {
      if (options.require_goal && !s.holds_all(theory.goal)) return std::nullopt;
      return 0.0;
    }
    std::optional<double> out;
    for (auto it = from.lower_bound(QKey{s, 0, depth}); it != from.end() && it->first.depth == depth &&
                                                         it->first.state == s;
         ++it)
      out = out ? std::max(*out, it->second) : it->second;
    return out;
  };
  for (int sweep = 0;; ++sweep) {
    std::map<QKey, double> next;
    for (int t = 0; t < n; ++t)
      for (const auto& e : edges[t])
        if (auto v = best(q, e.to, t + 1)) next[QKey{e.from, e.action, t}] = e.reward + theory.gamma * *v;
    if (next == q) break;
    q = std::move(next);
    if (sweep > n + 1) throw Error(ErrorKind::validation, "tabular sweeps did not settle");
  }

  QTable table;
  table.gamma = theory.gamma;
  table.horizon = n;
  table.mode = QMode::qlearning;
  table.entries = std::move(q);
  return table;
}

CollapsedTable collapse_depths(const QTable& table) {
  CollapsedTable out;
  for (const auto& [key, value] : table.entries) {
    auto [it, fresh] = out.try_emplace({key.state, key.action}, value);
    if (!fresh) it->second = std::max(it->second, value);
  }
  return out;
}

Policy extract_policy(const QTable& table) {
  std::map<WorldState, std::vector<std::pair<ActionId, double>>> by_state;
  for (const auto& [key, value] : collapse_depths(table)) by_state[key.first].emplace_back(key.second, value);

  Policy policy;
  for (auto& [state, options] : by_state) {
    double best = options.front().second;
    for (const auto& [a, v] : options) best = std::max(best, v);
    auto& tied = policy.argmax[state];
    for (const auto& [a, v] : options)
      if (v >= best - kTieTolerance) tied.push_back(a);
    policy.choice[state] = tied.front();
  }
  return policy;
}

}  // namespace bq
