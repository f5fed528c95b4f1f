// Serial vs parallel kernels on fixed random corpora.

#include <benchmark/benchmark.h>

#include "ibg/random.hpp"
#include "ibg/realizability.hpp"
#include "ibg/verification.hpp"

using namespace ibg;

namespace {

std::vector<Ibg> game_corpus(std::size_t agents, std::size_t states) {
  Rng rng(7);
  RandomGameParams p;
  p.agents = agents;
  p.max_symbols = 3;
  p.max_states = states;
  p.kind = GoalKind::Mixed;
  std::vector<Ibg> games;
  for (int i = 0; i < 8; ++i) games.push_back(random_game(rng, p));
  return games;
}

ExecutionPolicy policy_arg(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
}

void BM_Realizable(benchmark::State& state) {
  const auto games = game_corpus(static_cast<std::size_t>(state.range(1)), 6);
  const auto policy = policy_arg(state);
  for (auto _ : state) {
    int positive = 0;
    for (const auto& g : games)
      for (std::uint32_t bits = 0; bits < (1U << g.num_agents()); ++bits)
        positive += realizable(g, AgentSet(bits), policy).realizable;
    benchmark::DoNotOptimize(positive);
  }
  state.SetLabel(policy == ExecutionPolicy::Serial ? "serial" : "parallel");
}

void BM_Verify(benchmark::State& state) {
  const auto games = game_corpus(static_cast<std::size_t>(state.range(1)), 6);
  Rng rng(11);
  std::vector<StrategyProfile> profiles;
  for (const auto& g : games) profiles.push_back(random_profile(rng, g, 6));
  const auto policy = policy_arg(state);
  for (auto _ : state) {
    int ne = 0;
    for (std::size_t i = 0; i < games.size(); ++i)
      for (std::uint32_t bits = 0; bits < (1U << games[i].num_agents()); ++bits)
        ne += verify(games[i], AgentSet(bits), profiles[i], policy).is_ne;
    benchmark::DoNotOptimize(ne);
  }
  state.SetLabel(policy == ExecutionPolicy::Serial ? "serial" : "parallel");
}

void BM_SafetySolve(benchmark::State& state) {
  Rng rng(13);
  const auto [arena, safe] = random_arena(rng, static_cast<std::size_t>(state.range(0)), 4, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(solve_safety(arena, safe).win0.size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(arena.num_edges()));
}

}  // namespace

BENCHMARK(BM_Realizable)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Verify)->ArgsProduct({{0, 1}, {2, 3, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SafetySolve)->RangeMultiplier(8)->Range(1 << 10, 1 << 19)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
