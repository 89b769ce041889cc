#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "bq/error.hpp"
#include "bq/q_estimator.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace bq {
namespace {

using test::compile_text;
using test::load_fixture;

constexpr double kTol = 1e-9;

// Episodes over a one-fluent world; only the rewards matter here.
Episode make_episode(std::vector<double> rewards, std::vector<ActionId> actions = {}, std::vector<bool> bits = {}) {
  Episode e;
  const std::size_t n = rewards.size();
  if (actions.empty()) actions.assign(n, 0);
  if (bits.empty()) bits.assign(n + 1, false);
  for (std::size_t i = 0; i <= n; ++i) e.states.emplace_back(std::vector<bool>{bits[i]});
  e.actions = actions;
  for (double r : rewards) e.rewards.push_back(*Reward::parse(format_real(r)));
  return e;
}

// Direct re-anchored tail, written out independently of the library.
double tail(const std::vector<double>& r, double gamma, std::size_t t) {
  double sum = 0.0, w = 1.0;
  for (std::size_t i = t; i < r.size(); ++i, w *= gamma) sum += w * r[i];
  return sum;
}

TEST(Tail, Examples) {
  const std::vector<double> r{1.0, 2.0};
  EXPECT_NEAR(discounted_tail(r, 0.5, 0), 2.0, kTol);
  EXPECT_NEAR(discounted_tail(r, 0.5, 1), 2.0, kTol);
  EXPECT_NEAR(discounted_tail(r, 0.5, 2), 0.0, kTol);
  EXPECT_NEAR(discounted_tail(r, 0.5, 1, Anchoring::episode_start), 1.0, kTol);
}

TEST(QDirect, SingleEpisode) {
  const auto q = q_direct({make_episode({1.0, 2.0})}, 0.5, QMode::qlearning);
  const WorldState s0(std::vector<bool>{false});
  ASSERT_TRUE(q.table.find(s0, 0, 0));
  EXPECT_NEAR(*q.table.find(s0, 0, 0), 2.0, kTol);
  EXPECT_NEAR(*q.table.find(s0, 0, 1), 2.0, kTol);
  EXPECT_FALSE(q.table.find(s0, 0, 2));  // depth n is implicit 0
}

TEST(QDirect, QLearningTakesTheMax) {
  // Two episodes share (s0, a0) with tails 2.0 and 3.0.
  const std::vector<Episode> es{make_episode({2.0}, {0}, {false, false}), make_episode({3.0}, {0}, {false, true})};
  const auto q = q_direct(es, 0.9, QMode::qlearning);
  EXPECT_NEAR(*q.table.find(WorldState(std::vector<bool>{false}), 0, 0), 3.0, kTol);
  const auto s = q_direct(es, 0.9, QMode::sarsa);
  ASSERT_EQ(s.tails.size(), 2u);
  EXPECT_NEAR(s.tails[0][0], 2.0, kTol);
  EXPECT_NEAR(s.tails[1][0], 3.0, kTol);
}

TEST(QDirect, RejectsEmptyAndRaggedSets) {
  EXPECT_THROW(q_direct({}, 0.9, QMode::qlearning), Error);
  EXPECT_THROW(q_direct({make_episode({1.0}), make_episode({1.0, 1.0})}, 0.9, QMode::qlearning), Error);
}

TEST(QDirect, SerialReferenceAgrees) {
  for (const char* name : {"elevator2.bq", "gridworld3.bq", "partial.bq"}) {
    const auto ct = load_fixture(name);
    const auto es = enumerate_episodes(ct);
    for (QMode m : {QMode::qlearning, QMode::sarsa}) {
      const auto par = q_direct(es, ct.gamma, m);
      const auto ser = serial::q_direct(es, ct.gamma, m);
      EXPECT_EQ(par.table.entries, ser.table.entries) << name;
      EXPECT_EQ(par.tails, ser.tails) << name;
    }
  }
}

TEST(OnlineFold, Examples) {
  OnlineQFold empty(0.9, 3);
  EXPECT_EQ(empty.value(), 0.0);
  OnlineQFold f(0.5, 2);
  f.consume(1.0);
  f.consume(2.0);
  EXPECT_NEAR(f.value(), 2.0, kTol);
  EXPECT_THROW(f.consume(1.0), Error);
  OnlineQFold one(0.9, 1);
  one.consume(5.0);
  EXPECT_NEAR(one.value(), 5.0, kTol);
}

TEST(Reconstruct, Examples) {
  const std::vector<double> r{1.0, 2.0};
  EXPECT_NEAR(q_reconstruct(2.0, r, 0.5, 1), 2.0, kTol);
  EXPECT_NEAR(q_reconstruct(2.0, r, 0.5, 2), 0.0, kTol);
  for (double x : {-3.0, 0.0, 7.5}) {
    const std::vector<double> single{x};
    EXPECT_NEAR(q_reconstruct(x, single, 0.9, 1), 0.0, kTol);
  }
  EXPECT_THROW(q_reconstruct(2.0, r, 0.5, 0), Error);
  EXPECT_THROW(q_reconstruct(2.0, r, 0.5, 3), Error);
}

// Property: reconstructing from the initial value recovers every tail.
TEST(ReconstructProperty, MatchesDirectTail) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> reward(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double gamma = std::array{0.1, 0.5, 0.9}[trial % 3];
    std::vector<double> r(1 + rng() % 6);
    for (auto& x : r) x = reward(rng);
    const double q0 = tail(r, gamma, 0);
    for (std::size_t t = 1; t <= r.size(); ++t) {
      // Division by gamma^t scales rounding error; tolerance is relative to that.
      const double scale = std::max(1.0, std::abs(q0) / std::pow(gamma, static_cast<double>(t)));
      EXPECT_NEAR(q_reconstruct(q0, r, gamma, t), tail(r, gamma, t), kTol * scale);
    }
  }
}

TEST(Update, TerminalKeyTakesTheReward) {
  QTable table;
  table.gamma = 0.9;
  table.horizon = 2;
  const WorldState a(std::vector<bool>{false}), b(std::vector<bool>{true});
  table.entries[{a, 0, 0}] = 0.0;
  table.entries[{b, 0, 1}] = 42.0;
  const auto u = q_update_once(table, {DepthTransition{b, 0, 1, a, 3.5}});
  EXPECT_NEAR(*u.table.find(b, 0, 1), 3.5, kTol);
  EXPECT_NEAR(u.max_change, 38.5, kTol);
}

TEST(Update, EmptyTransitionsLeaveTableAlone) {
  const auto ct = load_fixture("elevator2.bq");
  const auto q = q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table;
  const auto u = q_update_once(q, {});
  EXPECT_EQ(u.table.entries, q.entries);
  EXPECT_EQ(u.max_change, 0.0);
}

TEST(Update, MissingSuccessorIsAnError) {
  QTable table;
  table.horizon = 3;
  const WorldState a(std::vector<bool>{false}), b(std::vector<bool>{true});
  table.entries[{a, 0, 1}] = 1.0;
  EXPECT_THROW(q_update_once(table, {DepthTransition{a, 0, 1, b, 1.0}}), Error);
}

TEST(UpdateProperty, DirectTableIsAFixpoint) {
  for (const char* name : {"elevator2.bq", "elevator2_literal.bq", "gridworld3.bq", "partial.bq", "single.bq"}) {
    const auto ct = load_fixture(name);
    const auto es = enumerate_episodes(ct);
    const auto q = q_direct(es, ct.gamma, QMode::qlearning).table;
    const auto u = q_update_once(q, episode_transitions(es));
    EXPECT_LE(u.max_change, kTol) << name;
  }
}

TEST(Oracle, HorizonOneIsImmediateReward) {
  const auto ct = load_fixture("partial.bq");
  auto one = ct;
  one.horizon = 1;
  const auto oracle = classic_oracle(one);
  for (const auto& [key, value] : oracle.entries) {
    const auto tr = transition(one, key.state, key.action);
    EXPECT_NEAR(value, tr.reward.to_double(), kTol);
  }
  EXPECT_EQ(oracle.entries.size(), 2u);
}

TEST(Oracle, AgreesWithDirectOnFixtures) {
  for (const char* name : {"elevator2.bq", "elevator2_literal.bq", "gridworld3.bq", "partial.bq", "loop.bq"}) {
    const auto ct = load_fixture(name);
    const auto q = q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table;
    const auto oracle = classic_oracle(ct);
    ASSERT_EQ(oracle.entries.size(), q.entries.size()) << name;
    for (const auto& [key, value] : q.entries) {
      auto it = oracle.entries.find(key);
      ASSERT_NE(it, oracle.entries.end()) << name;
      EXPECT_NEAR(it->second, value, kTol) << name;
    }
  }
}

using test::Grid;

TEST(Gridworld, DirectTableMatchesBackwardInduction) {
  const auto ct = load_fixture("gridworld3.bq");
  ASSERT_EQ(ct.actions, (std::vector<std::string>{"down", "left", "right", "up"}));
  const auto expected = Grid::solve();
  const auto q = q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table;
  ASSERT_EQ(q.entries.size(), expected.size());
  for (const auto& [key, value] : expected) {
    const auto& [s, a, t] = key;
    const auto got = q.find(Grid::encode(s), static_cast<ActionId>(a), t);
    ASSERT_TRUE(got);
    EXPECT_NEAR(*got, value, kTol);
  }
  // Best first move from (1,1): -1 - 0.9 - 0.81 + 0.729 * 10.
  EXPECT_NEAR(*q.find(Grid::encode({1, 1}), 2, 0), -1 - 0.9 - 0.81 + 7.29, kTol);
}

TEST(Gridworld, PolicyMatchesOracleArgmaxSets) {
  const auto ct = load_fixture("gridworld3.bq");
  const auto expected = Grid::argmax_sets(kTieTolerance);
  const auto policy = extract_policy(q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table);
  ASSERT_EQ(policy.argmax.size(), expected.size());
  for (const auto& [s, tied] : expected) {
    const auto w = Grid::encode(s);
    EXPECT_EQ(policy.argmax.at(w), tied);
    EXPECT_EQ(policy.choice.at(w), tied.front());
  }
}

TEST(Policy, SingleActionAndTies) {
  const auto ct = load_fixture("single.bq");
  const auto policy = extract_policy(q_direct(enumerate_episodes(ct), ct.gamma, QMode::qlearning).table);
  for (const auto& [s, a] : policy.choice) EXPECT_EQ(ct.actions[a], "toggle");

  QTable table;
  const WorldState s(std::vector<bool>{false});
  table.entries[{s, 0, 0}] = 1.0;  // close
  table.entries[{s, 4, 0}] = 3.0;  // up(2)
  EXPECT_EQ(extract_policy(table).choice.at(s), 4u);
  table.entries[{s, 0, 0}] = 3.0;
  const auto tied = extract_policy(table);
  EXPECT_EQ(tied.choice.at(s), 0u);
  EXPECT_EQ(tied.argmax.at(s), (std::vector<ActionId>{0, 4}));
}

// Property: rewards scaled by c > 0 scale every value and keep argmax sets.
TEST(QProperty, ScalingRewards) {
  const auto ct = load_fixture("gridworld3.bq");
  const auto es = enumerate_episodes(ct);
  const auto base = q_direct(es, ct.gamma, QMode::qlearning).table;
  const auto base_policy = extract_policy(base);
  for (double c : {0.5, 2.0, 3.0}) {
    auto scaled_es = es;
    for (auto& e : scaled_es)
      for (auto& r : e.rewards) r = *Reward::parse(format_real(r.to_double() * c));
    const auto scaled = q_direct(scaled_es, ct.gamma, QMode::qlearning).table;
    for (const auto& [key, value] : base.entries) EXPECT_NEAR(scaled.entries.at(key), c * value, kTol * 10);
    EXPECT_EQ(extract_policy(scaled).argmax, base_policy.argmax);
  }
}

// Property: with non-negative rewards, a longer horizon never lowers Q.
TEST(QProperty, MonotoneInHorizon) {
  for (const char* name : {"elevator2.bq", "single.bq", "partial.bq"}) {
    auto ct = load_fixture(name);
    std::map<std::pair<WorldState, ActionId>, double> previous;
    for (int n = 1; n <= 3; ++n) {
      ct.horizon = n;
      const auto es = enumerate_episodes(ct);
      if (es.empty()) continue;
      const auto q = q_direct(es, ct.gamma, QMode::qlearning).table;
      for (const auto& [key, value] : q.entries) {
        if (key.depth != 0) continue;
        auto it = previous.find({key.state, key.action});
        if (it != previous.end()) {
          EXPECT_GE(value, it->second - kTol) << name;
        }
        previous[{key.state, key.action}] = value;
      }
    }
  }
}

TEST(QProperty, SarsaTailsAreReanchored) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const double gamma = std::array{0.1, 0.5, 0.9}[trial % 3];
    const std::size_t n = 1 + rng() % 5;
    std::vector<Episode> es;
    std::vector<std::vector<double>> raw;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> r(n);
      for (auto& x : r) x = static_cast<double>(static_cast<int>(rng() % 21) - 10);
      std::vector<bool> bits(n + 1);
      for (std::size_t i = 0; i <= n; ++i) bits[i] = (rng() >> 3) & 1;
      es.push_back(make_episode(r, std::vector<ActionId>(n, 0), bits));
      raw.push_back(r);
    }
    std::sort(es.begin(), es.end(), episode_less);
    const auto s = q_direct(es, gamma, QMode::sarsa);
    for (std::size_t e = 0; e < es.size(); ++e) {
      const auto r = es[e].reward_values();
      for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(s.tails[e][t], tail(r, gamma, t), kTol);
    }
    // Q-learning value at each key is the max of the SARSA tails there.
    const auto q = q_direct(es, gamma, QMode::qlearning).table;
    for (const auto& [key, value] : q.entries) {
      double best = -1e300;
      for (std::size_t e = 0; e < es.size(); ++e)
        if (es[e].states[key.depth] == key.state && es[e].actions[key.depth] == key.action)
          best = std::max(best, s.tails[e][key.depth]);
      EXPECT_NEAR(value, best, kTol);
    }
  }
}

}  // namespace
}  // namespace bq
