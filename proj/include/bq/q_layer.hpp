#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bq/compiled.hpp"
#include "bq/program.hpp"
#include "bq/semantics.hpp"
#include "bq/solver.hpp"

namespace bq {

inline constexpr double kDefaultScale = 1e-6;

struct QAtom {
  std::string action;
  int time = 0;
  std::int64_t scaled = 0;  // value / scale, exact
  double value = 0.0;       // scaled * scale
  std::string text;         // "q(2.0,close,2)"
};

struct QLayerResult {
  /// Seeds q(0, a, 0) found in the answer set, then one atom per step.
  std::vector<QAtom> atoms;
  std::int64_t final_scaled = 0;
  double final_value = 0.0;
  /// Same fold in double precision, for the fixed-point error bound.
  double float_value = 0.0;
  std::vector<std::string> notes;
};

/// Folds V_{T+1} = V_T + round(r_{T+1} * gamma^T / scale) over the occ and
/// reward atoms of `answer_set`. A step with no reward atom for its action
/// counts as 0 and leaves a note. Throws Error(trace) when a step has other
/// than one occ atom, or distinct rewards for the occurring action.
QLayerResult evaluate_q_layer(const NormalProgram& program, const Interpretation& answer_set, double gamma,
                              double scale = kDefaultScale);

struct TraceStep {
  std::string action;
  std::optional<Reward> reward;  // absent when no reward atom was derived
};

struct Trace {
  std::vector<TraceStep> steps;
  /// holds atoms per time index as literal terms, sorted.
  std::vector<std::vector<std::string>> holds;
};

/// occ/reward sequence and holds atoms per time. Throws Error(trace) when a
/// step has other than one occ atom.
Trace extract_trace(const NormalProgram& program, const Interpretation& answer_set);

/// Episode read off a trace without checking it against the semantics.
/// Throws Error(trace) when a time index does not give exactly one of f and
/// neg(f) for each fluent, or names an unknown fluent or action.
Episode reconstruct_episode(const CompiledTheory& theory, const Trace& trace);

/// reconstruct_episode followed by verify_episode.
Episode extract_episode(const CompiledTheory& theory, const NormalProgram& program, const Interpretation& answer_set);

}  // namespace bq
