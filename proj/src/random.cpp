#include "ibg/random.hpp"

namespace ibg {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<bool> random_accepting(Rng& rng, std::size_t n) {
  std::vector<bool> acc(n);
  for (std::size_t q = 0; q < n; ++q) acc[q] = chance(rng, 0.35);
  return acc;
}

PositiveFormula random_formula(Rng& rng, std::size_t states, int depth) {
  const auto roll = uniform(rng, 0, 9);
  if (depth == 0 || roll < 4) {
    if (roll == 0) return PositiveFormula::top();
    if (roll == 1) return PositiveFormula::bottom();
    return PositiveFormula::atom(static_cast<StateId>(uniform(rng, 0, states - 1)));
  }
  std::vector<PositiveFormula> args;
  const auto width = uniform(rng, 2, 3);
  for (std::size_t i = 0; i < width; ++i) args.push_back(random_formula(rng, states, depth - 1));
  return roll < 7 ? PositiveFormula::conj(std::move(args)) : PositiveFormula::disj(std::move(args));
}

}  // namespace

AlphabetPtr random_alphabet(Rng& rng, std::size_t agents, std::size_t max_symbols) {
  std::vector<std::vector<std::string>> channels;
  std::size_t next = 0;
  for (std::size_t i = 0; i < agents; ++i) {
    std::vector<std::string> symbols;
    const auto size = uniform(rng, 1, max_symbols);
    for (std::size_t s = 0; s < size; ++s, ++next)
      symbols.push_back(next < 26 ? std::string(1, static_cast<char>('a' + next)) : "s" + std::to_string(next));
    channels.push_back(std::move(symbols));
  }
  return std::make_shared<const ProductAlphabet>(std::move(channels));
}

ChannelMask random_mask(Rng& rng, std::size_t channels, double density) {
  std::vector<std::uint32_t> agents;
  for (std::uint32_t i = 0; i < channels; ++i)
    if (chance(rng, density)) agents.push_back(i);
  return ChannelMask(std::move(agents));
}

Dfa random_dfa(Rng& rng, const AlphabetPtr& alphabet, ChannelMask mask, std::size_t max_states) {
  const auto n = uniform(rng, 1, max_states);
  const RestrictedAlphabet restricted(*alphabet, mask);
  std::vector<StateId> table(n * restricted.size());
  for (auto& t : table) t = static_cast<StateId>(uniform(rng, 0, n - 1));
  return Dfa(alphabet, std::move(mask), 0, std::move(table), random_accepting(rng, n));
}

Nfa random_nfa(Rng& rng, const AlphabetPtr& alphabet, ChannelMask mask, std::size_t max_states) {
  const auto n = uniform(rng, 1, max_states);
  const RestrictedAlphabet restricted(*alphabet, mask);
  std::vector<StateSet> table(n * restricted.size());
  for (auto& t : table)
    for (StateId q = 0; q < n; ++q)
      if (chance(rng, 0.4)) t.push_back(q);
  return Nfa(alphabet, std::move(mask), 0, std::move(table), random_accepting(rng, n));
}

Afa random_afa(Rng& rng, const AlphabetPtr& alphabet, ChannelMask mask, std::size_t max_states) {
  const auto n = uniform(rng, 1, max_states);
  const RestrictedAlphabet restricted(*alphabet, mask);
  std::vector<PositiveFormula> table;
  for (std::size_t s = 0; s < n * restricted.size(); ++s) table.push_back(random_formula(rng, n, 2));
  return Afa(alphabet, std::move(mask), 0, std::move(table), random_accepting(rng, n));
}

Ibg random_game(Rng& rng, const RandomGameParams& params) {
  const auto alphabet = random_alphabet(rng, params.agents, params.max_symbols);
  std::vector<GoalAutomaton> goals;
  for (std::size_t i = 0; i < params.agents; ++i) {
    auto mask = random_mask(rng, params.agents, params.mask_density);
    auto kind = params.kind;
    if (kind == GoalKind::Mixed) kind = static_cast<GoalKind>(uniform(rng, 0, 2));
    switch (kind) {
      case GoalKind::Dfa:
        goals.emplace_back(random_dfa(rng, alphabet, std::move(mask), params.max_states));
        break;
      case GoalKind::Nfa:
        goals.emplace_back(random_nfa(rng, alphabet, std::move(mask), params.max_states));
        break;
      default:
        goals.emplace_back(random_afa(rng, alphabet, std::move(mask), params.max_states));
        break;
    }
  }
  return Ibg(alphabet, {}, std::move(goals));
}

StrategyProfile random_profile(Rng& rng, const Ibg& game, std::size_t max_states) {
  const auto& alphabet = game.alphabet();
  StrategyProfile p;
  for (std::uint32_t i = 0; i < game.num_agents(); ++i) {
    const auto n = uniform(rng, 1, max_states);
    auto mask = random_mask(rng, game.num_agents(), 0.7);
    const RestrictedAlphabet restricted(*alphabet, mask);
    std::vector<StateId> table(n * restricted.size());
    for (auto& t : table) t = static_cast<StateId>(uniform(rng, 0, n - 1));
    std::vector<std::uint32_t> output(n);
    for (auto& o : output) o = static_cast<std::uint32_t>(uniform(rng, 0, alphabet->channel_size(i) - 1));
    p.machines.emplace_back(alphabet, i, std::move(mask), 0, std::move(table), std::move(output));
  }
  return p;
}

AgentSet random_agent_set(Rng& rng, std::size_t agents) {
  return AgentSet(static_cast<std::uint32_t>(uniform(rng, 0, (std::size_t{1} << agents) - 1)));
}

std::pair<Arena, std::vector<bool>> random_arena(Rng& rng, std::size_t vertices, std::size_t max_degree,
                                                 double unsafe_ratio) {
  Arena::Builder b;
  for (std::size_t v = 0; v < vertices; ++v) b.add_vertex(chance(rng, 0.5) ? Player::Zero : Player::One);
  for (std::size_t v = 0; v < vertices; ++v) {
    const auto degree = uniform(rng, 0, max_degree);
    for (std::size_t e = 0; e < degree; ++e)
      b.add_edge(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(uniform(rng, 0, vertices - 1)));
  }
  std::vector<bool> safe(vertices);
  for (std::size_t v = 0; v < vertices; ++v) safe[v] = !chance(rng, unsafe_ratio);
  return {std::move(b).build(), std::move(safe)};
}

}  // namespace ibg
