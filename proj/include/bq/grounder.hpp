#pragma once

#include "bq/theory.hpp"

namespace bq {

/// Replaces every law by its instances under type-respecting substitutions.
///
/// Variable types come from the argument positions of declared fluent and
/// action signatures. Comparisons are evaluated per instance and dropped;
/// instances with a false comparison disappear. Integer constants compare
/// numerically, anything else lexicographically. Variables in `initially` and
/// `goal` formulas expand to the conjunction of all their instances.
///
/// The result is canonical: formulas sorted and deduplicated, laws deduplicated
/// and ordered by printed form, so grounding is idempotent.
///
/// Throws ParseError (kind grounding) for unbounded variables, empty domains,
/// undeclared predicates, arity and type clashes.
ActionTheory ground_theory(const ActionTheory& theory);

}  // namespace bq
