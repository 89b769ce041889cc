#pragma once

#include <map>
#include <span>
#include <vector>

#include "bq/semantics.hpp"

namespace bq {

enum class QMode { qlearning, sarsa };

/// How a tail starting at depth t is discounted. `reanchored` weights
/// r_{i+1} by gamma^(i-t); `episode_start` keeps the gamma^i weights of the
/// whole episode and is reported only for comparison.
enum class Anchoring { reanchored, episode_start };

const char* to_string(QMode mode);

/// gamma^0 .. gamma^n, built by repeated multiplication.
class DiscountSchedule {
 public:
  DiscountSchedule(double gamma, int horizon);

  double gamma() const { return gamma_; }
  double power(std::size_t i) const { return powers_.at(i); }
  const std::vector<double>& powers() const { return powers_; }

 private:
  double gamma_;
  std::vector<double> powers_;
};

struct QKey {
  WorldState state;
  ActionId action = 0;
  int depth = 0;

  bool operator==(const QKey&) const = default;
  bool operator<(const QKey& o) const;
};

/// Depth-indexed table. Keys exist for depths 0..n-1 only; the value at
/// depth n is 0 by convention and never stored.
struct QTable {
  double gamma = 0.9;
  int horizon = 0;
  QMode mode = QMode::qlearning;
  std::map<QKey, double> entries;

  std::optional<double> find(const WorldState& s, ActionId a, int depth) const;
};

struct QEstimate {
  /// Q-learning: max over episodes. SARSA: max-aggregate of the per-episode
  /// values, kept so a policy can be read off.
  QTable table;
  /// tails[e][t] is episode e's discounted tail from depth t.
  std::vector<std::vector<double>> tails;
};

/// sum_{i=t}^{n-1} w_i * rewards[i], with w_i = gamma^(i-t) or gamma^i.
double discounted_tail(std::span<const double> rewards, double gamma, std::size_t t,
                       Anchoring anchoring = Anchoring::reanchored);

/// Throws Error(validation) for an empty episode set or mixed lengths.
QEstimate q_direct(const std::vector<Episode>& episodes, double gamma, QMode mode,
                   Anchoring anchoring = Anchoring::reanchored);

/// Running sum_{t<k} gamma^t r_{t+1} of an episode in progress.
class OnlineQFold {
 public:
  OnlineQFold(double gamma, int horizon) : gamma_(gamma), horizon_(horizon) {}

  /// Throws Error(trace) once `horizon` rewards have been consumed.
  void consume(double reward);
  double value() const { return value_; }
  int consumed() const { return consumed_; }

 private:
  double gamma_;
  int horizon_;
  int consumed_ = 0;
  double weight_ = 1.0;
  double value_ = 0.0;
};

/// (initial - sum_{i=1}^t gamma^(i-1) r_i) / gamma^t. `rewards` is the full
/// reward sequence of the episode; throws Error(validation) when t is 0 or
/// exceeds its length.
double q_reconstruct(double initial_value, std::span<const double> rewards, double gamma, std::size_t t);

struct DepthTransition {
  WorldState from;
  ActionId action = 0;
  int depth = 0;
  WorldState to;
  double reward = 0.0;

  bool operator==(const DepthTransition&) const = default;
  bool operator<(const DepthTransition& o) const;
};

/// Every step of every episode, deduplicated.
std::vector<DepthTransition> episode_transitions(const std::vector<Episode>& episodes);

struct QUpdate {
  QTable table;
  double max_change = 0.0;
};

/// One Bellman backup r + gamma * max_a' Q(s', a', t+1) on every key of
/// depth >= 1 named by a transition. Throws Error(validation) when a
/// successor below the horizon has no entries.
QUpdate q_update_once(const QTable& table, const std::vector<DepthTransition>& transitions);

/// Tabular Q-learning with learning rate 1 over the depth-layered reachable
/// states, swept until no value changes. Built from transition() alone, not
/// from the episode set. Honours require_goal and drops pairs that cannot
/// reach the horizon.
QTable classic_oracle(const CompiledTheory& theory, const EpisodeOptions& options = {});

using CollapsedTable = std::map<std::pair<WorldState, ActionId>, double>;

/// Max over depths for each (state, action).
CollapsedTable collapse_depths(const QTable& table);

/// Values closer than this count as tied when choosing an argmax.
inline constexpr double kTieTolerance = 1e-9;

struct Policy {
  std::map<WorldState, ActionId> choice;
  /// Every action within kTieTolerance of the best value, in id order.
  std::map<WorldState, std::vector<ActionId>> argmax;
};

/// Action ids are numbered in text order, so the lowest tied id is the
/// lexicographically least action.
Policy extract_policy(const QTable& table);

namespace serial {

QEstimate q_direct(const std::vector<Episode>& episodes, double gamma, QMode mode,
                   Anchoring anchoring = Anchoring::reanchored);

}  // namespace serial

}  // namespace bq
