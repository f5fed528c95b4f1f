#pragma once

#include <cstdint>
#include <random>

#include "ibg/game.hpp"
#include "ibg/safety.hpp"

namespace ibg {

using Rng = std::mt19937_64;

enum class GoalKind { Dfa, Nfa, Afa, Mixed };

struct RandomGameParams {
  std::size_t agents = 2;        // exact
  std::size_t max_symbols = 2;   // each |Σ_i| drawn from [1, max]
  std::size_t max_states = 4;    // each goal has [1, max] states
  GoalKind kind = GoalKind::Dfa;
  double mask_density = 0.7;     // chance that a goal reads a given channel
};

/// Symbols are single letters, consecutive across agents (a, b | c, d | ...).
AlphabetPtr random_alphabet(Rng& rng, std::size_t agents, std::size_t max_symbols);
ChannelMask random_mask(Rng& rng, std::size_t channels, double density);

Dfa random_dfa(Rng& rng, const AlphabetPtr& alphabet, ChannelMask mask, std::size_t max_states);
Nfa random_nfa(Rng& rng, const AlphabetPtr& alphabet, ChannelMask mask, std::size_t max_states);
Afa random_afa(Rng& rng, const AlphabetPtr& alphabet, ChannelMask mask, std::size_t max_states);

Ibg random_game(Rng& rng, const RandomGameParams& params);
/// Machines with [1, max_states] states each and random masks.
StrategyProfile random_profile(Rng& rng, const Ibg& game, std::size_t max_states);
AgentSet random_agent_set(Rng& rng, std::size_t agents);

/// Arena with both owners mixed, out-degree in [0, max_degree], and a random safe set.
std::pair<Arena, std::vector<bool>> random_arena(Rng& rng, std::size_t vertices, std::size_t max_degree,
                                                 double unsafe_ratio);

}  // namespace ibg
