#pragma once

#include <string>
#include <vector>

#include "bq/theory.hpp"

namespace bq {

enum class Severity { error, warning };

struct Violation {
  Severity severity = Severity::error;
  std::string code;    // stable identifier, e.g. "discount out of range"
  std::string detail;  // human-readable context
  SourcePos pos;
};

struct ValidationReport {
  std::vector<Violation> violations;

  /// True when no error-severity violation is present (warnings allowed).
  bool ok() const;
  std::string str() const;
};

/// Structural checks on a theory. Works on parsed and on grounded theories:
/// variable-scoping rules are checked on whatever variables remain, so run it
/// before grounding for scoping and after grounding for everything else.
ValidationReport validate_theory(const ActionTheory& theory);

}  // namespace bq
