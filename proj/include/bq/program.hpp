#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bq/reward.hpp"

namespace bq {

using AtomId = std::uint32_t;

/// Which translation rule produced a program rule. Numbered kinds follow the
/// rule numbering of the translation; the rest are additions.
enum class RuleKind {
  action_fact, literal_pos, literal_neg, contrary_pos, contrary_neg,
  initial_shared, initial_pos, initial_neg,
  executable, effect, reward, q_value, inertia, consistency, occurs, abnormal, goal,
  atom_fact,
  static_law,
  enforce_exec,
  strict_initial,
  require_goal,
  discount_fact,
  q_seed,
  user,
};

/// Short category name, e.g. "inertia" or "abocc".
std::string to_string(RuleKind kind);

struct RuleOrigin {
  RuleKind kind = RuleKind::user;
  int step = -1;       // time index the rule is grounded at, -1 if none
  std::string source;  // printed source law, if any
};

struct ProgramRule {
  std::optional<AtomId> head;  // absent for a constraint
  std::vector<AtomId> positive;
  std::vector<AtomId> negative;

  bool is_fact() const { return head && positive.empty() && negative.empty(); }
  bool is_constraint() const { return !head; }
  bool operator==(const ProgramRule&) const = default;
};

/// Schematic entry of the arithmetic Q layer: one per causal law and step.
/// Its value term ranges over the reals, so it is kept out of the ground
/// program and evaluated per answer set.
struct QLayerRule {
  std::string action;
  int time = 0;  // the rule derives q(.., action, time + 1)
  Reward reward;
  std::vector<std::string> condition;  // literal terms holding at `time`
  std::vector<std::string> effects;    // literal terms holding at `time + 1`

  bool operator==(const QLayerRule&) const = default;
};

/// Ground normal logic program over interned atom texts.
class NormalProgram {
 public:
  AtomId intern(std::string_view text);
  std::optional<AtomId> find(std::string_view text) const;
  const std::string& name(AtomId id) const { return names_[id]; }
  std::size_t atom_count() const { return names_.size(); }

  void add(ProgramRule rule, RuleOrigin origin = {});

  std::vector<ProgramRule> rules;
  std::vector<RuleOrigin> origins;
  std::optional<int> horizon;
  std::optional<double> gamma;
  std::vector<QLayerRule> q_layer;

  std::string rule_text(const ProgramRule& rule) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AtomId> index_;
};

/// "q(V+1.0*0.9^0,close,1) :- q(V,A,0), factor(0.9), reward(1.0,close,1), ..."
std::string q_layer_text(const QLayerRule& rule, double gamma);

/// Facts as "a.", rules as "h :- b1, not c.", constraints as ":- b.". The
/// horizon, discount and Q layer are written as "%!" directive comments.
std::string emit_program_text(const NormalProgram& program);

/// Reads the emitted format, or any plain ground normal program using the
/// same syntax. "%" comments are ignored unless they are "%!" directives.
/// Throws ParseError(syntax).
NormalProgram parse_program(std::string_view text);

/// Same rules as text in the same order, same Q layer, same directives.
bool structurally_equal(const NormalProgram& a, const NormalProgram& b);

/// Predicate name and top-level arguments of a ground atom text:
/// "holds(neg(on(1)),0)" -> {"holds", {"neg(on(1))", "0"}}.
struct AtomParts {
  std::string predicate;
  std::vector<std::string> args;
};
AtomParts split_atom(std::string_view text);

}  // namespace bq
