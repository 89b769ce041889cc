// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "bq/grounder.hpp"
#include "bq/parser.hpp"
#include "bq/q_estimator.hpp"
#include "bq/semantics.hpp"

namespace {

bq::CompiledTheory load(const char* name) {
  std::ifstream in(std::string(BQ_FIXTURE_DIR) + "/" + name);
  std::stringstream text;
  text << in.rdbuf();
  return bq::compile_theory(bq::ground_theory(bq::parse_theory(text.str())));
}

// Gridworld with a longer horizon, so the episode tree is worth splitting.
bq::CompiledTheory grid(int horizon) {
  auto ct = load("gridworld3.bq");
  ct.horizon = horizon;
  return ct;
}

void BM_States(benchmark::State& state, bool parallel) {
  const auto ct = load("elevator2.bq");
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? bq::enumerate_states(ct) : bq::serial::enumerate_states(ct));
}

void BM_Episodes(benchmark::State& state, bool parallel) {
  const auto ct = grid(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? bq::enumerate_episodes(ct) : bq::serial::enumerate_episodes(ct));
}

void BM_QDirect(benchmark::State& state, bool parallel) {
  const auto ct = grid(static_cast<int>(state.range(0)));
  const auto episodes = bq::enumerate_episodes(ct);
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? bq::q_direct(episodes, ct.gamma, bq::QMode::sarsa)
                                      : bq::serial::q_direct(episodes, ct.gamma, bq::QMode::sarsa));
}

}  // namespace

BENCHMARK_CAPTURE(BM_States, serial, false);
BENCHMARK_CAPTURE(BM_States, parallel, true);
BENCHMARK_CAPTURE(BM_Episodes, serial, false)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episodes, parallel, true)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_QDirect, serial, false)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_QDirect, parallel, true)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
