#pragma once

#include <cstddef>

namespace bq {

/// Enumeration and search caps. Every exhaustive routine checks the relevant
/// field and throws CapExceeded instead of running away.
struct Limits {
  std::size_t max_state_atoms = 20;           // 2^n assignments in state enumeration
  std::size_t max_episode_nodes = 1'000'000;  // transitions expanded by episode search
  std::size_t naive_max_atoms = 22;           // atoms guessed along one naive search path
  std::size_t sat_max_models = 100'000;       // completion models visited by the SAT path
};

}  // namespace bq
