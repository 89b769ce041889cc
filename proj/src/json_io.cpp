#include "bq/json_io.hpp"

#include <algorithm>
#include <tuple>

namespace bq {

using nlohmann::json;

std::string episode_text(const CompiledTheory& theory, const Episode& e) {
  std::string out = theory.state_text(e.states.front());
  for (std::size_t t = 0; t < e.length(); ++t)
    out += " " + theory.actions[e.actions[t]] + ":" + e.rewards[t].to_string() + " " +
           theory.state_text(e.states[t + 1]);
  return out;
}

json episode_json(const CompiledTheory& theory, const Episode& e, double q_initial) {
  json states = json::array();
  for (const auto& s : e.states) states.push_back(theory.state_literals(s));
  json actions = json::array();
  for (ActionId a : e.actions) actions.push_back(theory.actions[a]);
  json rewards = json::array();
  for (const auto& r : e.rewards) rewards.push_back(r.to_double());
  return {{"states", states}, {"actions", actions}, {"rewards", rewards}, {"q_initial", q_initial}};
}

json qtable_json(const CompiledTheory& theory, const QTable& table, const Policy* policy) {
  std::vector<std::tuple<std::string, std::string, int, const QKey*, double>> rows;
  for (const auto& [key, value] : table.entries)
    rows.emplace_back(theory.state_text(key.state), theory.actions[key.action], key.depth, &key, value);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });
  json entries = json::array();
  for (const auto& [text, action, depth, key, value] : rows)
    entries.push_back({{"state", theory.state_literals(key->state)},
                       {"action", action},
                       {"depth", depth},
                       {"value", value}});
  json out = {{"mode", to_string(table.mode)},
              {"gamma", table.gamma},
              {"horizon", table.horizon},
              {"entries", entries}};
  if (policy) out["policy"] = policy_json(theory, *policy);
  return out;
}

json policy_json(const CompiledTheory& theory, const Policy& policy) {
  std::vector<std::pair<std::string, const WorldState*>> states;
  for (const auto& [s, a] : policy.choice) states.emplace_back(theory.state_text(s), &s);
  std::sort(states.begin(), states.end());
  json out = json::array();
  for (const auto& [text, s] : states) {
    json tied = json::array();
    for (ActionId a : policy.argmax.at(*s)) tied.push_back(theory.actions[a]);
    out.push_back({{"state", theory.state_literals(*s)},
                   {"action", theory.actions[policy.choice.at(*s)]},
                   {"argmax", tied}});
  }
  return out;
}

json answer_set_json(const NormalProgram& program, const Interpretation& atoms, const Trace* trace,
                     const QLayerResult* q) {
  std::vector<std::string> names;
  for (AtomId a : atoms) names.push_back(program.name(a));
  std::sort(names.begin(), names.end());
  json out = {{"atoms", names}};
  if (trace) {
    json steps = json::array();
    for (std::size_t t = 0; t < trace->steps.size(); ++t) {
      const auto& s = trace->steps[t];
      steps.push_back({{"time", t},
                       {"action", s.action},
                       {"reward", s.reward ? json(s.reward->to_double()) : json(nullptr)}});
    }
    out["trace"] = steps;
  }
  if (q) {
    json values = json::array();
    for (const auto& a : q->atoms)
      values.push_back({{"action", a.action}, {"time", a.time}, {"scaled", a.scaled}, {"value", a.value}, {"atom", a.text}});
    out["q_values"] = values;
    if (!q->notes.empty()) out["notes"] = q->notes;
  }
  return out;
}

json report_json(const TranslationReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json row = {{"rule", e.rule}, {"kind", e.kind}};
    if (e.step >= 0) row["step"] = e.step;
    if (!e.source.empty()) row["source"] = e.source;
    entries.push_back(std::move(row));
  }
  return {{"counts", report.counts}, {"q_layer_rules", report.q_layer_rules}, {"rules", entries}};
}

}  // namespace bq
