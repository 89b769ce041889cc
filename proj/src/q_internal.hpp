#pragma once

#include "bq/q_estimator.hpp"

namespace bq::detail {

void check_episode_set(const std::vector<Episode>& episodes);

std::vector<double> episode_tails(const Episode& e, double gamma, Anchoring anchoring);

/// Max-combine per-episode tails into a depth-indexed table, in episode order.
QTable merge_tails(const std::vector<Episode>& episodes, const std::vector<std::vector<double>>& tails,
                   double gamma, QMode mode);

}  // namespace bq::detail
