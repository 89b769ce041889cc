#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bq/reward.hpp"
#include "bq/theory.hpp"

namespace bq {

using FluentId = std::uint32_t;
using ActionId = std::uint32_t;

/// Ground fluent literal packed as `2 * fluent + (negative ? 1 : 0)`.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(FluentId fluent, bool positive) : code_(fluent * 2 + (positive ? 0 : 1)) {}

  constexpr FluentId fluent() const { return code_ >> 1; }
  constexpr bool positive() const { return (code_ & 1) == 0; }
  constexpr Lit complement() const { return from_code(code_ ^ 1); }
  constexpr std::uint32_t code() const { return code_; }
  static constexpr Lit from_code(std::uint32_t c) {
    Lit l;
    l.code_ = c;
    return l;
  }
  auto operator<=>(const Lit&) const = default;

 private:
  std::uint32_t code_ = 0;
};

/// Possibly partial, possibly inconsistent set of literals over a fixed
/// fluent universe.
class LiteralSet {
 public:
  LiteralSet() = default;
  explicit LiteralSet(std::size_t fluents) : marks_(fluents, 0) {}
  LiteralSet(std::size_t fluents, std::span<const Lit> lits);

  std::size_t universe() const { return marks_.size(); }
  bool contains(Lit l) const { return marks_[l.fluent()] & bit(l); }
  bool contains_all(std::span<const Lit> lits) const;
  /// Returns true when the literal was not present before.
  bool insert(Lit l);
  bool is_consistent() const;
  bool is_complete() const;
  bool subset_of(const LiteralSet& other) const;
  std::vector<Lit> literals() const;
  std::size_t size() const;

  bool operator==(const LiteralSet&) const = default;

 private:
  static std::uint8_t bit(Lit l) { return l.positive() ? 1 : 2; }
  std::vector<std::uint8_t> marks_;
};

/// Complete, consistent assignment to every ground fluent. Whether it is
/// closed under the static laws is a property of the theory (see
/// semantics.hpp).
class WorldState {
 public:
  WorldState() = default;
  explicit WorldState(std::vector<bool> truth) : truth_(std::move(truth)) {}
  /// Requires `set` to be complete and consistent.
  static WorldState from_literals(const LiteralSet& set);

  std::size_t size() const { return truth_.size(); }
  bool value(FluentId f) const { return truth_[f]; }
  bool holds(Lit l) const { return truth_[l.fluent()] == l.positive(); }
  bool holds_all(std::span<const Lit> lits) const;
  void set(Lit l) { truth_[l.fluent()] = l.positive(); }
  LiteralSet to_set() const;
  const std::vector<bool>& truth() const { return truth_; }

  bool operator==(const WorldState&) const = default;
  bool operator<(const WorldState& o) const { return truth_ < o.truth_; }

 private:
  std::vector<bool> truth_;
};

struct WorldStateHash {
  std::size_t operator()(const WorldState& s) const { return std::hash<std::vector<bool>>{}(s.truth()); }
};

struct CompiledCausalLaw {
  ActionId action = 0;
  std::vector<Lit> effects;
  Reward reward;
  std::vector<Lit> condition;
};

struct CompiledExecutabilityLaw {
  ActionId action = 0;
  std::vector<Lit> condition;
};

struct CompiledStaticLaw {
  Lit head;
  std::vector<Lit> condition;
};

/// Index form of a ground, validated theory. Fluents and actions are every
/// ground instance of their declarations, numbered in lexicographic order of
/// their printed form, so numeric order is canonical text order.
struct CompiledTheory {
  std::vector<std::string> fluents;
  std::vector<std::string> actions;
  std::vector<CompiledCausalLaw> causal_laws;
  std::vector<CompiledExecutabilityLaw> executability_laws;
  std::vector<CompiledStaticLaw> static_laws;
  std::vector<std::vector<Lit>> initial_states;
  std::vector<Lit> goal;
  int horizon = 0;
  double gamma = 0.9;

  std::vector<std::vector<std::size_t>> causal_by_action;
  std::vector<std::vector<std::size_t>> executability_by_action;

  std::size_t fluent_count() const { return fluents.size(); }
  std::size_t action_count() const { return actions.size(); }
  std::optional<FluentId> find_fluent(const std::string& text) const;
  std::optional<ActionId> find_action(const std::string& text) const;

  /// "on(1)" or "-on(1)".
  std::string literal_text(Lit l) const;
  /// Canonical literal array, ordered by fluent.
  std::vector<std::string> state_literals(const WorldState& s) const;
  /// "{current(1), -opened, ...}"
  std::string state_text(const WorldState& s) const;

 private:
  std::unordered_map<std::string, FluentId> fluent_index_;
  std::unordered_map<std::string, ActionId> action_index_;
  friend CompiledTheory compile_theory(const ActionTheory&);
};

/// Requires a ground theory that passed validation (horizon and discount
/// present). Throws Error(validation) for symbols outside the declared
/// Herbrand base.
CompiledTheory compile_theory(const ActionTheory& ground);

}  // namespace bq
