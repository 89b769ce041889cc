#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bq/compiled.hpp"
#include "bq/program.hpp"

namespace bq {

enum class Predicate {
  action, atom, literal, contrary, holds, exec, occ, abocc, reward, factor, goal, q, initial,
};

const char* to_string(Predicate p);
std::size_t arity(Predicate p);

struct GroundAtom {
  Predicate predicate;
  std::vector<std::string> args;

  /// Throws std::invalid_argument when the argument count does not match.
  GroundAtom(Predicate p, std::vector<std::string> a);
  std::string text() const;
};

struct TranslateOptions {
  /// Emit the rules as printed: reward rules without their condition, no
  /// static laws, goal rules at every step, only literals that differ among
  /// initial descriptions completed at time 0, and no executability
  /// enforcement unless `enforce_exec` is set explicitly.
  bool verbatim = false;
  std::optional<bool> enforce_exec;
  bool require_goal = false;
  bool strict_initial = false;

  bool enforcing() const { return enforce_exec.value_or(!verbatim); }
};

/// "on(1)" or "neg(on(1))".
std::string literal_term(const CompiledTheory& theory, Lit l);

/// Ground normal program whose answer sets encode the episodes of `theory`.
/// Rules come in canonical order and atoms are interned in that order, so
/// emitting and re-reading the program reproduces the same atom ids.
NormalProgram translate(const CompiledTheory& theory, const TranslateOptions& options = {});

struct TranslationReport {
  /// Rule count per category, keyed by to_string(RuleKind).
  std::map<std::string, std::size_t> counts;
  std::size_t q_layer_rules = 0;
  struct Entry {
    std::string rule;
    std::string kind;
    int step;
    std::string source;
  };
  std::vector<Entry> entries;

  std::size_t count(RuleKind kind) const;
};

TranslationReport translation_report(const NormalProgram& program);

}  // namespace bq
