#include <algorithm>

#include "bq/solver.hpp"

namespace bq {

std::vector<ProgramRule> reduct(const NormalProgram& program, const Interpretation& candidate) {
  std::vector<ProgramRule> out;
  for (const auto& rule : program.rules) {
    const bool blocked = std::any_of(rule.negative.begin(), rule.negative.end(), [&](AtomId b) {
      return std::binary_search(candidate.begin(), candidate.end(), b);
    });
    if (!blocked) out.push_back({rule.head, rule.positive, {}});
  }
  return out;
}

Interpretation least_model(const std::vector<ProgramRule>& rules, std::size_t atom_count) {
  std::vector<std::vector<std::size_t>> watch(atom_count);
  std::vector<std::size_t> missing(rules.size());
  std::vector<char> derived(atom_count, 0);
  std::vector<AtomId> queue;

  auto fire = [&](const ProgramRule& r) {
    if (r.head && !derived[*r.head]) {
      derived[*r.head] = 1;
      queue.push_back(*r.head);
    }
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    missing[i] = rules[i].positive.size();
    for (AtomId p : rules[i].positive) watch[p].push_back(i);
    if (missing[i] == 0) fire(rules[i]);
  }
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (std::size_t i : watch[queue[q]])
      if (--missing[i] == 0) fire(rules[i]);

  Interpretation out;
  for (AtomId a = 0; a < atom_count; ++a)
    if (derived[a]) out.push_back(a);
  return out;
}

bool is_answer_set(const NormalProgram& program, const Interpretation& candidate) {
  const auto positive = reduct(program, candidate);
  for (const auto& rule : positive)
    if (rule.is_constraint() && std::all_of(rule.positive.begin(), rule.positive.end(), [&](AtomId p) {
          return std::binary_search(candidate.begin(), candidate.end(), p);
        }))
      return false;
  return least_model(positive, program.atom_count()) == candidate;
}

}  // namespace bq
