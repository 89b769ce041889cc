#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bq/limits.hpp"
#include "bq/program.hpp"

namespace bq {

/// Sorted, duplicate-free set of true atoms.
using Interpretation = std::vector<AtomId>;

/// Rules whose negative body misses `candidate`, negative bodies stripped.
/// Constraints are kept (their head stays absent).
std::vector<ProgramRule> reduct(const NormalProgram& program, const Interpretation& candidate);

/// Least model of the negation-free rules among `rules` (negative bodies are
/// ignored; constraints are skipped).
Interpretation least_model(const std::vector<ProgramRule>& rules, std::size_t atom_count);

/// `candidate` is the least model of its reduct and violates no constraint.
bool is_answer_set(const NormalProgram& program, const Interpretation& candidate);

struct NaiveStats {
  std::size_t nodes = 0;
  std::size_t max_depth = 0;
};

/// Branch and bound over atoms that occur under negation, lowest id first,
/// false first, with well-founded style bounds at every node. Leaves are
/// confirmed with is_answer_set. Throws CapExceeded when the decision depth
/// exceeds `limits.naive_max_atoms` or the node count exceeds
/// `limits.max_episode_nodes`.
std::vector<Interpretation> naive_answer_sets(const NormalProgram& program, const Limits& limits = {},
                                              NaiveStats* stats = nullptr);

/// Clause over DIMACS literals (nonzero, sign is polarity).
using Clause = std::vector<int>;

struct CnfFormula {
  int variable_count = 0;
  std::vector<Clause> clauses;
  /// names[v - 1] is the name of variable v: an atom text or "body(...)".
  std::vector<std::string> names;
  /// Variables 1..atom_count stand for atoms 0..atom_count-1.
  std::size_t atom_count = 0;
  /// Literal equivalent to each rule body, 0 when the body is empty.
  std::vector<int> body_literal;

  static int atom_var(AtomId a) { return static_cast<int>(a) + 1; }
};

/// Clark completion with one definitional variable per distinct body of two
/// or more literals. Clauses are sorted, duplicate-free and tautology-free.
CnfFormula clark_completion(const NormalProgram& program);

struct Tightness {
  bool tight = true;
  std::vector<AtomId> cycle;  // a positive dependency cycle when not tight
};

Tightness tightness_check(const NormalProgram& program);

/// Clauses excluding `model` when it is not stable: the loop formulas of the
/// loops inside its unfounded part, or of the whole unfounded part when no
/// single loop is violated. Empty when `model` is an answer set.
std::vector<Clause> loop_formulas(const NormalProgram& program, const CnfFormula& cnf, const Interpretation& model);

/// DPLL with unit propagation over occurrence lists, branching on the lowest
/// unassigned variable with false first. Models are enumerated by adding a
/// clause that blocks the decisions leading to each one.
class ModelEnumerator {
 public:
  explicit ModelEnumerator(CnfFormula cnf);

  /// Next model as the set of true variables (sorted), or nullopt when none
  /// remain.
  std::optional<std::vector<int>> next();
  /// Adds clauses and restarts the search; already reported models stay
  /// blocked.
  void add_clauses(const std::vector<Clause>& clauses);

  const CnfFormula& formula() const { return cnf_; }

 private:
  bool propagate();
  void assign(int lit, bool decision);
  bool backtrack();
  void restart();
  void attach(std::size_t clause);

  CnfFormula cnf_;
  std::vector<std::vector<std::size_t>> occurs_;  // by literal index
  std::vector<signed char> value_;                // by variable: -1 unassigned
  struct TrailEntry {
    int lit;
    bool decision;
    bool flipped;
  };
  std::vector<TrailEntry> trail_;
  std::size_t queue_head_ = 0;
  bool exhausted_ = false;
  bool pending_block_ = false;
};

/// Every model of `cnf`, in enumeration order. Throws CapExceeded past
/// `max_models`.
std::vector<std::vector<int>> sat_solve(const CnfFormula& cnf, std::size_t max_models = Limits{}.sat_max_models);

/// "p cnf V C" header, one clause per line ending in 0, then "c map v name".
std::string emit_dimacs(const CnfFormula& cnf);

enum class SolverPath { naive, sat };

struct SolveStats {
  SolverPath path = SolverPath::sat;
  bool tight = true;
  std::size_t loop_formula_rounds = 0;
  std::size_t loop_clauses = 0;
  std::size_t models_seen = 0;
  std::size_t naive_nodes = 0;
};

/// Answer sets in ascending order, each checked with is_answer_set.
std::vector<Interpretation> enumerate_answer_sets(const NormalProgram& program, SolverPath path,
                                                  const Limits& limits = {}, SolveStats* stats = nullptr);

}  // namespace bq
