#pragma once

#include <string>

#include "bq/q_estimator.hpp"
#include "bq/q_layer.hpp"
#include "bq/translator.hpp"
#include "json.hpp"

namespace bq {

/// "{a, -b} close:1.0 {..} ..."
std::string episode_text(const CompiledTheory& theory, const Episode& e);

/// {"states": [[...]], "actions": [...], "rewards": [...], "q_initial": v}
nlohmann::json episode_json(const CompiledTheory& theory, const Episode& e, double q_initial);

/// Entries and (when given) the policy, both ordered by canonical state text.
nlohmann::json qtable_json(const CompiledTheory& theory, const QTable& table, const Policy* policy = nullptr);
nlohmann::json policy_json(const CompiledTheory& theory, const Policy& policy);

/// {"atoms": [...sorted], "trace": [...], "q_values": [...]}
nlohmann::json answer_set_json(const NormalProgram& program, const Interpretation& atoms, const Trace* trace,
                               const QLayerResult* q);

nlohmann::json report_json(const TranslationReport& report);

}  // namespace bq
