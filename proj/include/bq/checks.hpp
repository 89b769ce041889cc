#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bq/q_estimator.hpp"
#include "bq/q_layer.hpp"
#include "bq/solver.hpp"
#include "bq/translator.hpp"
#include "json.hpp"

namespace bq {

struct PipelineOptions {
  TranslateOptions translate;
  SolverPath solver = SolverPath::sat;
  double scale = kDefaultScale;
  Limits limits;
};

struct AnswerSetRecord {
  Interpretation atoms;
  std::optional<Trace> trace;
  std::optional<QLayerResult> q;
  /// Read off the answer set without checking it against the semantics.
  std::optional<Episode> episode;
  /// Why the trace or the episode could not be read, if it could not.
  std::string error;
};

struct PipelineResult {
  NormalProgram program;
  std::vector<AnswerSetRecord> answer_sets;
  SolveStats stats;
};

/// Translate, solve, then read trace, Q layer and episode of every answer
/// set (in parallel, merged in answer-set order).
PipelineResult run_pipeline(const CompiledTheory& theory, const PipelineOptions& options = {});

/// Absolute tolerance between the floating Q fold and the direct value.
inline constexpr double kQTolerance = 1e-9;

struct CheckResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  std::vector<std::string> details;
  std::vector<std::string> counterexamples;
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string text() const;
  nlohmann::json json() const;
};

struct CheckOptions {
  PipelineOptions pipeline;
  /// The naive path is only compared on theories with at most this many
  /// fluents.
  std::size_t naive_max_fluents = 18;
};

/// Episodes against answer sets, direct Q against the Q layer, and naive
/// against SAT answer sets. The report holds no timings, so equal inputs
/// give byte-identical text.
CheckReport run_checks(const CompiledTheory& theory, const CheckOptions& options = {});

}  // namespace bq
