#include "bq/q_layer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bq/error.hpp"

namespace bq {

namespace {

int parse_time(const std::string& s) {
  try {
    std::size_t used = 0;
    const int t = std::stoi(s, &used);
    if (used == s.size() && t >= 0) return t;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::trace, "malformed time index '" + s + "'");
}

int horizon_of(const NormalProgram& program, const std::vector<AtomParts>& atoms) {
  if (program.horizon) return *program.horizon;
  int n = 0;
  for (const auto& a : atoms)
    if (a.predicate == "occ" && a.args.size() == 2) n = std::max(n, parse_time(a.args[1]) + 1);
  return n;
}

std::vector<AtomParts> parts_of(const NormalProgram& program, const Interpretation& answer_set) {
  std::vector<AtomParts> out;
  out.reserve(answer_set.size());
  for (AtomId a : answer_set) out.push_back(split_atom(program.name(a)));
  return out;
}

}  // namespace

Trace extract_trace(const NormalProgram& program, const Interpretation& answer_set) {
  const auto atoms = parts_of(program, answer_set);
  const int n = horizon_of(program, atoms);
  Trace trace;
  trace.holds.resize(static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<std::string>> occ(static_cast<std::size_t>(n));
  std::map<std::pair<std::string, int>, std::vector<Reward>> rewards;

  for (const auto& a : atoms) {
    if (a.predicate == "holds" && a.args.size() == 2) {
      const int t = parse_time(a.args[1]);
      if (t > n) throw Error(ErrorKind::trace, "holds atom beyond the horizon at time " + a.args[1]);
      trace.holds[t].push_back(a.args[0]);
    } else if (a.predicate == "occ" && a.args.size() == 2) {
      const int t = parse_time(a.args[1]);
      if (t >= n) throw Error(ErrorKind::trace, "occ atom at time " + a.args[1] + " is past the last step");
      occ[t].push_back(a.args[0]);
    } else if (a.predicate == "reward" && a.args.size() == 3) {
      auto r = Reward::parse(a.args[0]);
      if (!r) throw Error(ErrorKind::trace, "malformed reward '" + a.args[0] + "'");
      rewards[{a.args[1], parse_time(a.args[2])}].push_back(*r);
    }
  }
  for (auto& h : trace.holds) std::sort(h.begin(), h.end());

  for (int t = 0; t < n; ++t) {
    if (occ[t].size() != 1)
      throw Error(ErrorKind::trace, std::to_string(occ[t].size()) + " occ atoms at step " + std::to_string(t));
    TraceStep step{occ[t].front(), std::nullopt};
    auto it = rewards.find({step.action, t + 1});
    if (it != rewards.end()) {
      auto values = it->second;
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      if (values.size() > 1)
        throw Error(ErrorKind::trace, "distinct rewards for " + step.action + " at time " + std::to_string(t + 1));
      step.reward = values.front();
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

QLayerResult evaluate_q_layer(const NormalProgram& program, const Interpretation& answer_set, double gamma,
                              double scale) {
  const Trace trace = extract_trace(program, answer_set);
  const double inverse = 1.0 / scale;
  const bool integral = std::abs(inverse - std::round(inverse)) < 1e-9 * inverse;
  auto to_value = [&](std::int64_t scaled) {
    return integral ? static_cast<double>(scaled) / std::round(inverse) : static_cast<double>(scaled) * scale;
  };
  auto atom_text = [&](double value, const std::string& action, int t) {
    return "q(" + format_real(value) + "," + action + "," + std::to_string(t) + ")";
  };

  QLayerResult result;
  for (const auto& a : parts_of(program, answer_set))
    if (a.predicate == "q" && a.args.size() == 3 && a.args[0] == "0" && a.args[2] == "0")
      result.atoms.push_back({a.args[1], 0, 0, 0.0, atom_text(0.0, a.args[1], 0)});

  std::int64_t scaled = 0;
  double exact = 0.0, weight = 1.0;
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& step = trace.steps[t];
    double r = 0.0;
    if (step.reward) {
      r = step.reward->to_double();
    } else {
      result.notes.push_back("no reward atom for " + step.action + " at time " + std::to_string(t + 1) +
                             "; counted as 0");
    }
    scaled += std::llround(r * weight * inverse);
    exact += r * weight;
    weight *= gamma;
    const double value = to_value(scaled);
    result.atoms.push_back({step.action, static_cast<int>(t) + 1, scaled, value,
                            atom_text(value, step.action, static_cast<int>(t) + 1)});
  }
  result.final_scaled = scaled;
  result.final_value = to_value(scaled);
  result.float_value = exact;
  return result;
}

Episode reconstruct_episode(const CompiledTheory& theory, const Trace& trace) {
  Episode e;
  for (std::size_t t = 0; t < trace.holds.size(); ++t) {
    std::vector<signed char> value(theory.fluent_count(), -1);
    for (const auto& term : trace.holds[t]) {
      const bool negative = term.rfind("neg(", 0) == 0 && term.back() == ')';
      const std::string name = negative ? term.substr(4, term.size() - 5) : term;
      auto f = theory.find_fluent(name);
      if (!f) throw Error(ErrorKind::trace, "unknown fluent '" + name + "' at time " + std::to_string(t));
      const signed char v = negative ? 0 : 1;
      if (value[*f] != -1 && value[*f] != v)
        throw Error(ErrorKind::trace, "both " + name + " and its negation hold at time " + std::to_string(t));
      value[*f] = v;
    }
    std::vector<bool> truth(theory.fluent_count());
    for (FluentId f = 0; f < theory.fluent_count(); ++f) {
      if (value[f] == -1)
        throw Error(ErrorKind::trace,
                    "neither " + theory.fluents[f] + " nor its negation holds at time " + std::to_string(t));
      truth[f] = value[f] == 1;
    }
    e.states.emplace_back(std::move(truth));
  }
  for (const auto& step : trace.steps) {
    auto a = theory.find_action(step.action);
    if (!a) throw Error(ErrorKind::trace, "unknown action '" + step.action + "'");
    e.actions.push_back(*a);
    e.rewards.push_back(step.reward.value_or(Reward{}));
  }
  return e;
}

Episode extract_episode(const CompiledTheory& theory, const NormalProgram& program, const Interpretation& answer_set) {
  Episode e = reconstruct_episode(theory, extract_trace(program, answer_set));
  verify_episode(theory, e);
  return e;
}

}  // namespace bq
