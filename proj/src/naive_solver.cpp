#include <algorithm>
#include <set>

#include "bq/error.hpp"
#include "bq/solver.hpp"

namespace bq {

namespace {

constexpr signed char kUnknown = -1;

class NaiveSearch {
 public:
  NaiveSearch(const NormalProgram& program, const Limits& limits, NaiveStats& stats)
      : program_(program), limits_(limits), stats_(stats), value_(program.atom_count(), kUnknown) {
    std::set<AtomId> naf;
    for (const auto& r : program.rules) naf.insert(r.negative.begin(), r.negative.end());
    naf_atoms_.assign(naf.begin(), naf.end());
  }

  std::vector<Interpretation> run() {
    search(0);
    return {found_.begin(), found_.end()};
  }

 private:
  // Least model of the rules admitted by `admit`.
  template <class Admit>
  std::vector<char> bound(Admit admit) const {
    std::vector<ProgramRule> rules;
    for (const auto& r : program_.rules)
      if (r.head && admit(r)) rules.push_back({r.head, r.positive, {}});
    std::vector<char> in(program_.atom_count(), 0);
    for (AtomId a : least_model(rules, program_.atom_count())) in[a] = 1;
    return in;
  }

  // Lower: rules whose negated atoms are all false. Upper: rules with no
  // negated atom true. Returns false on a conflict.
  bool propagate(std::vector<char>& lower) {
    for (;;) {
      lower = bound([&](const ProgramRule& r) {
        return std::all_of(r.negative.begin(), r.negative.end(), [&](AtomId b) { return value_[b] == 0; });
      });
      const auto upper = bound([&](const ProgramRule& r) {
        return std::none_of(r.negative.begin(), r.negative.end(), [&](AtomId b) { return value_[b] == 1; });
      });
      bool changed = false;
      for (AtomId a = 0; a < value_.size(); ++a) {
        if (lower[a]) {
          if (value_[a] == 0) return false;
          if (value_[a] == kUnknown) value_[a] = 1, changed = true;
        } else if (!upper[a]) {
          if (value_[a] == 1) return false;
          if (value_[a] == kUnknown) value_[a] = 0, changed = true;
        }
      }
      for (const auto& r : program_.rules)
        if (r.is_constraint() &&
            std::all_of(r.positive.begin(), r.positive.end(), [&](AtomId p) { return value_[p] == 1; }) &&
            std::all_of(r.negative.begin(), r.negative.end(), [&](AtomId b) { return value_[b] == 0; }))
          return false;
      if (!changed) return true;
    }
  }

  void search(std::size_t depth) {
    if (++stats_.nodes > limits_.max_episode_nodes)
      throw CapExceeded("naive search exceeds " + std::to_string(limits_.max_episode_nodes) + " nodes");
    if (depth > limits_.naive_max_atoms)
      throw CapExceeded("naive search needs more than " + std::to_string(limits_.naive_max_atoms) +
                        " branching atoms; use the SAT path");
    stats_.max_depth = std::max(stats_.max_depth, depth);

    const auto saved = value_;
    std::vector<char> lower;
    if (propagate(lower)) {
      auto pick = std::find_if(naf_atoms_.begin(), naf_atoms_.end(), [&](AtomId a) { return value_[a] == kUnknown; });
      if (pick == naf_atoms_.end()) {
        Interpretation candidate;
        for (AtomId a = 0; a < lower.size(); ++a)
          if (lower[a]) candidate.push_back(a);
        if (is_answer_set(program_, candidate)) found_.insert(std::move(candidate));
      } else {
        for (signed char v : {0, 1}) {
          const auto before = value_;
          value_[*pick] = v;
          search(depth + 1);
          value_ = before;
        }
      }
    }
    value_ = saved;
  }

  const NormalProgram& program_;
  const Limits& limits_;
  NaiveStats& stats_;
  std::vector<signed char> value_;
  std::vector<AtomId> naf_atoms_;
  std::set<Interpretation> found_;
};

}  // namespace

std::vector<Interpretation> naive_answer_sets(const NormalProgram& program, const Limits& limits, NaiveStats* stats) {
  NaiveStats local;
  NaiveSearch search(program, limits, stats ? *stats : local);
  return search.run();
}

}  // namespace bq
