#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bq/error.hpp"
#include "bq/reward.hpp"

namespace bq {

/// Constant (`1`, `red`) or variable (`N`, `_X`) argument of an atom.
struct Term {
  bool variable = false;
  std::string text;

  static Term constant(std::string t) { return {false, std::move(t)}; }
  static Term var(std::string t) { return {true, std::move(t)}; }
  bool operator==(const Term&) const = default;
};

/// Fluent or action atom, e.g. `on(N)` or `close`.
struct Atom {
  std::string name;
  std::vector<Term> args;
  SourcePos pos;

  bool is_ground() const;
  std::string str() const;
  bool operator==(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  Literal complement() const { return {atom, !positive}; }
  std::string str() const { return (positive ? "" : "-") + atom.str(); }
  bool operator==(const Literal&) const = default;
};

/// Conjunction of fluent literals, treated as a set. Empty means true.
struct ConjunctiveFormula {
  std::vector<Literal> literals;

  bool empty() const { return literals.empty(); }
  bool is_consistent() const;
  /// Sorts by atom text (positive before negative) and drops duplicates.
  void canonicalize();
  std::string str() const;  // "a, -b" (no braces)
  bool operator==(const ConjunctiveFormula&) const = default;
};

enum class CompareOp { lt, le, gt, ge, eq, ne };

const char* to_string(CompareOp op);

/// Built-in comparison in a law condition, resolved during grounding.
struct Comparison {
  Term lhs;
  CompareOp op = CompareOp::eq;
  Term rhs;
  SourcePos pos;

  std::string str() const;
  bool operator==(const Comparison&) const = default;
};

/// `a causes phi : r if psi`
struct CausalLaw {
  Atom action;
  ConjunctiveFormula effects;
  Reward reward;
  ConjunctiveFormula condition;
  std::vector<Comparison> guards;
  SourcePos pos;

  std::string str() const;
  bool operator==(const CausalLaw&) const = default;
};

/// `executable a if psi`
struct ExecutabilityLaw {
  Atom action;
  ConjunctiveFormula condition;
  std::vector<Comparison> guards;
  SourcePos pos;

  std::string str() const;
  bool operator==(const ExecutabilityLaw&) const = default;
};

/// `l if psi` (indirect effect)
struct StaticLaw {
  Literal head;
  ConjunctiveFormula condition;
  std::vector<Comparison> guards;
  SourcePos pos;

  std::string str() const;
  bool operator==(const StaticLaw&) const = default;
};

struct Signature {
  std::string name;
  std::vector<std::string> arg_types;
  SourcePos pos;

  std::string str() const;
  bool operator==(const Signature&) const = default;
};

struct DomainDecl {
  std::string name;
  std::vector<std::string> constants;
  SourcePos pos;

  bool operator==(const DomainDecl&) const = default;
};

/// A theory <S0, D, gamma> plus the finite-horizon length. The same type
/// holds parsed (possibly non-ground) and grounded theories.
struct ActionTheory {
  std::vector<DomainDecl> domains;
  std::vector<Signature> fluents;
  std::vector<Signature> actions;

  std::vector<ConjunctiveFormula> initial_states;
  std::vector<CausalLaw> causal_laws;
  std::vector<ExecutabilityLaw> executability_laws;
  std::vector<StaticLaw> static_laws;
  ConjunctiveFormula goal;

  std::optional<int> horizon;
  std::optional<double> discount;

  const DomainDecl* find_domain(const std::string& name) const;
  const Signature* find_fluent(const std::string& name) const;
  const Signature* find_action(const std::string& name) const;

  bool is_ground() const;
  bool operator==(const ActionTheory&) const = default;
};

/// Canonical text: declarations, then laws ordered by kind and printed form,
/// then the initially/goal/horizon/discount directives. Reparses to an equal
/// theory.
std::string print_theory(const ActionTheory& theory);

}  // namespace bq
