// Acceptance gate. One PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bq/checks.hpp"
#include "bq/error.hpp"
#include "bq/q_estimator.hpp"
#include "bq/semantics.hpp"
#include "bq/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace bq {
namespace {

using test::EpisodeKey;
using test::Grid;
using test::load_fixture;

constexpr double kTol = 1e-9;
constexpr double kFixedScale = 1e-6;
constexpr double kLimitEquivalence = 10.0;  // seconds, per fixture
constexpr double kLimitQ = 5.0;
constexpr double kLimitSolvers = 30.0;
constexpr std::size_t kMaxFluentsForNaive = 18;
constexpr int kRewardVectors = 1000;

const std::vector<std::string> kFixtures = {"elevator2.bq", "elevator2_literal.bq", "gridworld3.bq", "loop.bq",
                                            "partial.bq",   "single.bq",            "stuck.bq"};

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Plain discounted sum, weights gamma^(i-t) for i >= t.
double tail(const std::vector<double>& r, double gamma, std::size_t t) {
  double sum = 0.0;
  for (std::size_t i = t; i < r.size(); ++i) sum += std::pow(gamma, static_cast<double>(i - t)) * r[i];
  return sum;
}

// Episode key read from an answer set's occ/reward/holds atoms by name.
EpisodeKey trace_key(const CompiledTheory& ct, const Trace& trace) {
  EpisodeKey k;
  for (const auto& holds : trace.holds) {
    std::vector<bool> truth(ct.fluent_count(), false);
    for (std::size_t f = 0; f < ct.fluent_count(); ++f)
      truth[f] = std::binary_search(holds.begin(), holds.end(), ct.fluents[f]);
    std::get<0>(k).push_back(truth);
  }
  for (const auto& step : trace.steps) {
    std::get<1>(k).push_back(step.action);
    std::get<2>(k).push_back(step.reward ? step.reward->to_double() : 0.0);
  }
  return k;
}

Outcome trace_equivalence() {
  Outcome out;
  std::ostringstream detail;
  for (const auto& [name, oracle] : {std::pair{"elevator2.bq", test::lift_episodes()},
                                     std::pair{"gridworld3.bq", Grid::episodes()}}) {
    const auto start = std::chrono::steady_clock::now();
    const auto ct = load_fixture(name);
    const auto result = run_pipeline(ct);
    std::multiset<EpisodeKey> from_answer_sets, from_semantics;
    for (const auto& rec : result.answer_sets) {
      if (!rec.trace) {
        out.fail(std::string(name) + ": unreadable answer set: " + rec.error);
        continue;
      }
      from_answer_sets.insert(trace_key(ct, *rec.trace));
    }
    for (const auto& e : enumerate_episodes(ct)) from_semantics.insert(test::episode_key(ct, e));
    const double took = seconds_since(start);
    if (from_answer_sets != from_semantics) out.fail(std::string(name) + ": answer-set traces differ from episodes");
    if (from_semantics != oracle) out.fail(std::string(name) + ": episodes differ from hand model");
    if (took > kLimitEquivalence) out.fail(std::string(name) + ": took " + std::to_string(took) + " s");
    detail << name << " " << from_answer_sets.size() << " traces; ";
  }
  if (out.ok) out.detail = detail.str();
  return out;
}

Outcome q_equivalence() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0, worst_fixed = 0.0;
  std::size_t pairs = 0, episodes_checked = 0;
  for (const char* name : {"elevator2.bq", "gridworld3.bq"}) {
    const auto ct = load_fixture(name);
    const auto result = run_pipeline(ct);
    const auto episodes = enumerate_episodes(ct);
    const auto qlearn = q_direct(episodes, ct.gamma, QMode::qlearning);
    const auto sarsa = q_direct(episodes, ct.gamma, QMode::sarsa);

    // Q-learning: max of the final Q atom per initial pair.
    std::map<std::pair<WorldState, ActionId>, std::pair<double, double>> best;  // float, fixed
    for (const auto& rec : result.answer_sets) {
      if (!rec.q || !rec.episode || rec.episode->actions.empty()) {
        out.fail(std::string(name) + ": answer set without Q layer");
        continue;
      }
      const auto key = std::make_pair(rec.episode->states[0], rec.episode->actions[0]);
      auto [it, fresh] = best.try_emplace(key, rec.q->float_value, rec.q->final_value);
      if (!fresh) {
        it->second.first = std::max(it->second.first, rec.q->float_value);
        it->second.second = std::max(it->second.second, rec.q->final_value);
      }
      worst_fixed = std::max(worst_fixed, std::abs(rec.q->final_value - rec.q->float_value));
      if (std::abs(rec.q->final_value - rec.q->float_value) > ct.horizon * kFixedScale)
        out.fail(std::string(name) + ": fixed-point bound exceeded");

      // SARSA: each answer set against the re-anchored sum of its episode.
      const auto pos = std::find(episodes.begin(), episodes.end(), *rec.episode);
      if (pos == episodes.end()) {
        out.fail(std::string(name) + ": answer set names no episode");
        continue;
      }
      const auto idx = static_cast<std::size_t>(pos - episodes.begin());
      const double expected = tail(rec.episode->reward_values(), ct.gamma, 0);
      worst = std::max({worst, std::abs(rec.q->float_value - expected), std::abs(sarsa.tails[idx][0] - expected)});
      ++episodes_checked;
    }
    // Independent max over the episode set.
    std::map<std::pair<WorldState, ActionId>, double> oracle;
    for (const auto& e : episodes) {
      const auto key = std::make_pair(e.states[0], e.actions[0]);
      const double v = tail(e.reward_values(), ct.gamma, 0);
      auto [it, fresh] = oracle.try_emplace(key, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
    if (oracle.size() != best.size()) out.fail(std::string(name) + ": initial pair sets differ");
    for (const auto& [key, v] : oracle) {
      const auto direct = qlearn.table.find(key.first, key.second, 0);
      const auto it = best.find(key);
      if (!direct || it == best.end()) {
        out.fail(std::string(name) + ": missing initial pair");
        continue;
      }
      worst = std::max({worst, std::abs(*direct - v), std::abs(it->second.first - v)});
      ++pairs;
    }
  }
  const double took = seconds_since(start);
  if (worst > kTol) out.fail("max difference " + format_real(worst));
  if (took > kLimitQ) out.fail("took " + std::to_string(took) + " s");
  if (out.ok)
    out.detail = std::to_string(pairs) + " pairs, " + std::to_string(episodes_checked) + " episodes, max diff " +
                 format_real(worst) + ", fixed-point diff " + format_real(worst_fixed);
  return out;
}

Outcome solver_equivalence() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  std::size_t compared = 0, non_tight = 0;
  for (const auto& name : kFixtures) {
    const auto ct = load_fixture(name);
    if (ct.fluent_count() > kMaxFluentsForNaive) continue;
    const auto program = translate(ct);
    SolveStats stats;
    auto naive = enumerate_answer_sets(program, SolverPath::naive);
    auto sat = enumerate_answer_sets(program, SolverPath::sat, {}, &stats);
    for (auto* v : {&naive, &sat}) {
      for (auto& m : *v) std::sort(m.begin(), m.end());
      std::sort(v->begin(), v->end());
    }
    if (naive != sat)
      out.fail(name + ": naive " + std::to_string(naive.size()) + " vs SAT " + std::to_string(sat.size()));
    for (const auto& m : sat)
      if (!is_answer_set(program, m)) out.fail(name + ": SAT model is not an answer set");
    if (!stats.tight) ++non_tight;
    ++compared;
  }
  const double took = seconds_since(start);
  if (non_tight == 0) out.fail("no non-tight fixture exercised loop formulas");
  if (took > kLimitSolvers) out.fail("took " + std::to_string(took) + " s");
  if (out.ok)
    out.detail = std::to_string(compared) + " fixtures, " + std::to_string(non_tight) + " non-tight";
  return out;
}

Outcome reconstruction_and_update() {
  Outcome out;
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> reward(-10.0, 10.0);
  const double gammas[] = {0.1, 0.5, 0.9};
  double worst = 0.0;
  for (int trial = 0; trial < kRewardVectors; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const double gamma = gammas[trial % 3];
    std::vector<double> r(n);
    for (auto& x : r) x = reward(rng);
    const double initial = tail(r, gamma, 0);
    worst = std::max(worst, std::abs(discounted_tail(r, gamma, 0) - initial));
    for (std::size_t t = 1; t <= n; ++t)
      worst = std::max(worst, std::abs(q_reconstruct(initial, r, gamma, t) - tail(r, gamma, t)));
  }
  if (worst > kTol) out.fail("reconstruction differs by " + format_real(worst));

  double change = 0.0;
  for (const char* name : {"elevator2.bq", "gridworld3.bq", "single.bq", "partial.bq"}) {
    const auto ct = load_fixture(name);
    const auto episodes = enumerate_episodes(ct);
    const auto q = q_direct(episodes, ct.gamma, QMode::qlearning).table;
    const auto update = q_update_once(q, episode_transitions(episodes));
    change = std::max(change, update.max_change);
    for (const auto& [key, v] : q.entries) change = std::max(change, std::abs(update.table.entries.at(key) - v));
  }
  if (change > kTol) out.fail("update moved the table by " + format_real(change));
  if (out.ok)
    out.detail = std::to_string(kRewardVectors) + " vectors, max diff " + format_real(worst) + "; update change " +
                 format_real(change);
  return out;
}

Outcome classic_oracle_agreement() {
  Outcome out;
  std::size_t keys = 0;
  for (const char* name : {"elevator2.bq", "gridworld3.bq"}) {
    const auto ct = load_fixture(name);
    const auto direct = q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table;
    const auto oracle = classic_oracle(ct);
    if (direct.entries.size() != oracle.entries.size()) out.fail(std::string(name) + ": key sets differ in size");
    for (const auto& [key, v] : oracle.entries) {
      const auto it = direct.entries.find(key);
      if (it == direct.entries.end() || std::abs(it->second - v) > kTol)
        out.fail(std::string(name) + ": disagreement at depth " + std::to_string(key.depth));
      ++keys;
    }
  }
  // The gridworld also against the hand-written backward induction.
  const auto ct = load_fixture("gridworld3.bq");
  const auto direct = q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table;
  const auto hand = Grid::solve();
  if (hand.size() != direct.entries.size()) out.fail("gridworld: hand oracle key count differs");
  for (const auto& [key, v] : hand) {
    const auto& [s, a, t] = key;
    const auto got = direct.find(Grid::encode(s), static_cast<ActionId>(a), t);
    if (!got || std::abs(*got - v) > kTol) out.fail("gridworld: hand oracle disagrees");
  }
  if (out.ok) out.detail = std::to_string(keys) + " keys";
  return out;
}

Outcome policy_correctness() {
  Outcome out;
  const auto ct = load_fixture("gridworld3.bq");
  const auto policy = extract_policy(q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table);
  const auto expected = Grid::argmax_sets(kTieTolerance);
  if (policy.argmax.size() != expected.size()) out.fail("state sets differ");
  for (const auto& [cell, tied] : expected) {
    const auto s = Grid::encode(cell);
    const auto it = policy.argmax.find(s);
    if (it == policy.argmax.end() || it->second != tied) {
      out.fail("argmax set differs at " + ct.state_text(s));
      continue;
    }
    if (policy.choice.at(s) != tied.front()) out.fail("tie broken wrongly at " + ct.state_text(s));
  }
  if (out.ok) out.detail = std::to_string(expected.size()) + " states";
  return out;
}

// Every consistent partial assignment over the fluents: 3^n sets.
std::vector<LiteralSet> partial_sets(std::size_t fluents) {
  std::vector<LiteralSet> out{LiteralSet(fluents)};
  for (std::size_t f = 0; f < fluents; ++f) {
    std::vector<LiteralSet> next;
    for (const auto& s : out)
      for (int choice = 0; choice < 3; ++choice) {
        LiteralSet t = s;
        if (choice) t.insert(Lit(static_cast<FluentId>(f), choice == 1));
        next.push_back(t);
      }
    out = std::move(next);
  }
  return out;
}

bool closed_by_hand(const CompiledTheory& ct, const LiteralSet& s) {
  for (const auto& law : ct.static_laws)
    if (s.contains_all(law.condition) && !s.contains(law.head)) return false;
  return true;
}

Outcome semantics_suite() {
  Outcome out;
  std::size_t closures = 0, transitions = 0;
  for (const char* name : {"elevator2.bq", "elevator2_literal.bq", "loop.bq", "partial.bq", "single.bq"}) {
    const auto ct = load_fixture(name);
    const auto sets = partial_sets(ct.fluent_count());
    std::vector<LiteralSet> closed;
    for (const auto& s : sets) {
      const auto c = closure(ct, s);
      if (!s.subset_of(c)) out.fail(std::string(name) + ": closure not extensive");
      if (!(closure(ct, c) == c)) out.fail(std::string(name) + ": closure not idempotent");
      if (!closed_by_hand(ct, c)) out.fail(std::string(name) + ": closure not closed");
      closed.push_back(c);
      ++closures;
    }
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = 0; j < sets.size(); ++j)
        if (sets[i].subset_of(sets[j]) && !closed[i].subset_of(closed[j]))
          out.fail(std::string(name) + ": closure not monotone");
    for (const auto& s : enumerate_states(ct))
      for (ActionId a : executable_actions(ct, s)) {
        try {
          const auto t = transition(ct, s, a);
          const auto set = t.to.to_set();
          if (t.to.size() != ct.fluent_count() || !set.is_complete() || !set.is_consistent() ||
              !closed_by_hand(ct, set))
            out.fail(std::string(name) + ": successor not a state");
          ++transitions;
        } catch (const TransitionError&) {
          // Faults are reported, never turned into states.
        }
      }
  }
  const auto count = [](const char* text, SolverPath path) {
    return enumerate_answer_sets(parse_program(text), path).size();
  };
  for (SolverPath path : {SolverPath::naive, SolverPath::sat}) {
    if (count("a :- not a.\n", path) != 0) out.fail("{a <- not a} has an answer set");
    if (count("a :- not b.\nb :- not a.\n", path) != 2) out.fail("{a <- not b, b <- not a} lacks two answer sets");
  }
  const auto even = parse_program("a :- not b.\nb :- not a.\n");
  const auto a = *even.find("a");
  const auto b = *even.find("b");
  if (!is_answer_set(even, {a}) || !is_answer_set(even, {b}) || is_answer_set(even, {a, b}) || is_answer_set(even, {}))
    out.fail("reduct check wrong on the even loop");
  if (out.ok) out.detail = std::to_string(closures) + " closures, " + std::to_string(transitions) + " transitions";
  return out;
}

Outcome determinism() {
  Outcome out;
  for (const auto& name : kFixtures) {
    const std::string cmd = test::cli() + " check '" + test::fixture_path(name) + "'";
    const auto first = test::run(cmd);
    const auto second = test::run(cmd);
    if (first.out.empty()) out.fail(name + ": empty report");
    if (first.out != second.out || first.status != second.status) out.fail(name + ": reports differ");
    const auto ct = load_fixture(name);
    if (run_checks(ct).text() != run_checks(ct).text()) out.fail(name + ": in-process reports differ");
  }
  if (out.ok) out.detail = std::to_string(kFixtures.size()) + " fixtures";
  return out;
}

}  // namespace
}  // namespace bq

int main() {
  using bq::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"answer-set traces equal episodes", bq::trace_equivalence},
      {"Q layer equals direct Q", bq::q_equivalence},
      {"SAT path equals naive path", bq::solver_equivalence},
      {"reconstruction and single update", bq::reconstruction_and_update},
      {"classic Q-learning oracle", bq::classic_oracle_agreement},
      {"gridworld policy", bq::policy_correctness},
      {"semantics unit suite", bq::semantics_suite},
      {"check reports are deterministic", bq::determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << (i + 1) << " " << criteria[i].first << ": " << o.detail << std::endl;
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
