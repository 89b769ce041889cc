#include "bq/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "bq/error.hpp"
#include "bq/json_io.hpp"

namespace bq {

PipelineResult run_pipeline(const CompiledTheory& theory, const PipelineOptions& options) {
  PipelineResult result;
  result.program = translate(theory, options.translate);
  const auto sets = enumerate_answer_sets(result.program, options.solver, options.limits, &result.stats);

  result.answer_sets.resize(sets.size());
  const auto count = static_cast<std::int64_t>(sets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    auto& rec = result.answer_sets[i];
    rec.atoms = sets[i];
    try {
      rec.trace = extract_trace(result.program, rec.atoms);
      rec.q = evaluate_q_layer(result.program, rec.atoms, theory.gamma, options.scale);
      rec.episode = reconstruct_episode(theory, *rec.trace);
    } catch (const Error& e) {
      rec.error = e.what();
    }
  }
  return result;
}

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string CheckReport::text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << c.name << ": " << (c.skipped ? "skipped" : c.passed ? "pass" : "FAIL") << "\n";
    for (const auto& d : c.details) out << "  " << d << "\n";
    for (const auto& x : c.counterexamples) out << "  counterexample: " << x << "\n";
  }
  out << "result: " << (passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

nlohmann::json CheckReport::json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name},
                   {"status", c.skipped ? "skipped" : c.passed ? "pass" : "fail"},
                   {"details", c.details},
                   {"counterexamples", c.counterexamples}});
  return {{"checks", out}, {"passed", passed()}};
}

namespace {

constexpr std::size_t kMaxCounterexamples = 20;

void add_counterexample(CheckResult& c, std::string text) {
  c.passed = false;
  if (c.counterexamples.size() < kMaxCounterexamples) c.counterexamples.push_back(std::move(text));
}

std::string fmt(double v) { return format_real(v); }

CheckResult episodes_vs_answer_sets(const CompiledTheory& theory, const std::vector<Episode>& episodes,
                                    const PipelineResult& pipeline) {
  CheckResult c{"answer sets match episodes", true, false, {}, {}};
  std::vector<Episode> from_sets;
  for (const auto& rec : pipeline.answer_sets) {
    if (rec.episode) {
      from_sets.push_back(*rec.episode);
    } else {
      add_counterexample(c, "answer set without a well-formed trace: " + rec.error);
    }
  }
  std::sort(from_sets.begin(), from_sets.end(), episode_less);
  c.details.push_back("episodes: " + std::to_string(episodes.size()) +
                      ", answer sets: " + std::to_string(pipeline.answer_sets.size()));

  // Multiset difference both ways.
  std::size_t i = 0, j = 0;
  while (i < episodes.size() || j < from_sets.size()) {
    if (j == from_sets.size() || (i < episodes.size() && episode_less(episodes[i], from_sets[j]))) {
      add_counterexample(c, "episode with no answer set: " + episode_text(theory, episodes[i++]));
    } else if (i == episodes.size() || episode_less(from_sets[j], episodes[i])) {
      add_counterexample(c, "answer set with no episode: " + episode_text(theory, from_sets[j++]));
    } else {
      ++i, ++j;
    }
  }
  return c;
}

CheckResult q_agreement(const CompiledTheory& theory, const std::vector<Episode>& episodes,
                        const PipelineResult& pipeline, double scale) {
  CheckResult c{"Q layer matches direct Q", true, false, {}, {}};
  const int n = theory.horizon;
  if (n == 0 || episodes.empty()) {
    c.details.push_back("no steps to estimate");
    return c;
  }
  const double fixed_bound = n * scale;
  const auto direct_q = q_direct(episodes, theory.gamma, QMode::qlearning);
  const auto direct_s = q_direct(episodes, theory.gamma, QMode::sarsa);

  // Q-learning: max over answer sets sharing the initial pair.
  std::map<std::pair<WorldState, ActionId>, std::pair<double, double>> best;
  for (const auto& rec : pipeline.answer_sets) {
    if (!rec.episode || !rec.q) continue;
    const auto key = std::make_pair(rec.episode->states.front(), rec.episode->actions.front());
    auto [it, fresh] = best.try_emplace(key, rec.q->float_value, rec.q->final_value);
    if (!fresh) {
      it->second.first = std::max(it->second.first, rec.q->float_value);
      it->second.second = std::max(it->second.second, rec.q->final_value);
    }
  }
  double worst_float = 0.0, worst_fixed = 0.0;
  std::size_t pairs = 0;
  for (const auto& [key, direct] : direct_q.table.entries) {
    if (key.depth != 0) continue;
    ++pairs;
    const std::string label = theory.state_text(key.state) + " " + theory.actions[key.action];
    auto it = best.find({key.state, key.action});
    if (it == best.end()) {
      add_counterexample(c, "qlearning: no answer set for initial pair " + label);
      continue;
    }
    const double df = std::abs(it->second.first - direct), dx = std::abs(it->second.second - direct);
    worst_float = std::max(worst_float, df);
    worst_fixed = std::max(worst_fixed, dx);
    if (df > kQTolerance || dx > fixed_bound)
      add_counterexample(c, "qlearning " + label + ": answer sets give " + fmt(it->second.first) + " (fixed " +
                                fmt(it->second.second) + "), direct gives " + fmt(direct));
  }
  if (best.size() != pairs) add_counterexample(c, "qlearning: answer sets cover initial pairs with no episode");

  // SARSA: each answer set against the episode it encodes.
  std::size_t matched = 0;
  for (const auto& rec : pipeline.answer_sets) {
    if (!rec.episode || !rec.q) continue;
    auto it = std::lower_bound(episodes.begin(), episodes.end(), *rec.episode, episode_less);
    if (it == episodes.end() || !(*it == *rec.episode)) continue;
    const double direct = direct_s.tails[static_cast<std::size_t>(it - episodes.begin())].front();
    ++matched;
    const double df = std::abs(rec.q->float_value - direct), dx = std::abs(rec.q->final_value - direct);
    worst_float = std::max(worst_float, df);
    worst_fixed = std::max(worst_fixed, dx);
    if (df > kQTolerance || dx > fixed_bound)
      add_counterexample(c, "sarsa " + episode_text(theory, *rec.episode) + ": answer set gives " +
                                fmt(rec.q->float_value) + ", direct gives " + fmt(direct));
  }
  if (matched != episodes.size())
    add_counterexample(c, "sarsa: " + std::to_string(episodes.size() - matched) + " episodes have no answer set");

  c.details.push_back("initial pairs: " + std::to_string(pairs) + ", episodes: " + std::to_string(episodes.size()));
  std::ostringstream tol;
  tol << "max |float - direct| = " << fmt(worst_float) << " (tolerance " << fmt(kQTolerance)
      << "), max |fixed - direct| = " << fmt(worst_fixed) << " (bound " << fmt(fixed_bound) << ")";
  c.details.push_back(tol.str());
  return c;
}

CheckResult naive_vs_sat(const CompiledTheory& theory, const PipelineResult& pipeline, const CheckOptions& options) {
  CheckResult c{"naive and SAT answer sets agree", true, false, {}, {}};
  const auto& st = pipeline.stats;
  std::string route = st.tight ? "completion (tight program)"
                               : "completion with loop formulas (" + std::to_string(st.loop_formula_rounds) +
                                     " rounds, " + std::to_string(st.loop_clauses) + " clauses)";
  c.details.push_back("sat path: " + route);
  if (theory.fluent_count() > options.naive_max_fluents) {
    c.skipped = true;
    c.details.push_back("naive path skipped: " + std::to_string(theory.fluent_count()) + " fluents exceed " +
                        std::to_string(options.naive_max_fluents));
    return c;
  }
  std::vector<Interpretation> sat;
  for (const auto& rec : pipeline.answer_sets) sat.push_back(rec.atoms);
  std::vector<Interpretation> naive;
  try {
    naive = enumerate_answer_sets(pipeline.program, SolverPath::naive, options.pipeline.limits);
  } catch (const CapExceeded& e) {
    c.skipped = true;
    c.details.push_back(std::string("naive path skipped: ") + e.what());
    return c;
  }
  c.details.push_back("answer sets: naive " + std::to_string(naive.size()) + ", sat " + std::to_string(sat.size()));
  auto show = [&](const Interpretation& s) {
    std::vector<std::string> names;
    for (AtomId a : s) {
      const auto& n = pipeline.program.name(a);
      if (n.rfind("occ(", 0) == 0 || (n.rfind("holds(", 0) == 0 && n.size() > 3 && n.substr(n.size() - 3) == ",0)"))
        names.push_back(n);
    }
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
    return out + "}";
  };
  for (const auto& s : naive)
    if (!std::binary_search(sat.begin(), sat.end(), s)) add_counterexample(c, "only naive: " + show(s));
  for (const auto& s : sat)
    if (!std::binary_search(naive.begin(), naive.end(), s)) add_counterexample(c, "only sat: " + show(s));
  return c;
}

}  // namespace

CheckReport run_checks(const CompiledTheory& theory, const CheckOptions& options) {
  PipelineOptions pipeline_options = options.pipeline;
  pipeline_options.solver = SolverPath::sat;
  const PipelineResult pipeline = run_pipeline(theory, pipeline_options);
  EpisodeOptions eo;
  eo.require_goal = options.pipeline.translate.require_goal;
  eo.limits = options.pipeline.limits;
  const auto episodes = enumerate_episodes(theory, eo);

  CheckReport report;
  report.checks.push_back(episodes_vs_answer_sets(theory, episodes, pipeline));
  report.checks.push_back(q_agreement(theory, episodes, pipeline, options.pipeline.scale));
  report.checks.push_back(naive_vs_sat(theory, pipeline, options));
  return report;
}

}  // namespace bq
