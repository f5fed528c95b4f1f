#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ibg/game.hpp"
#include "ibg/parallel.hpp"
#include "ibg/safety.hpp"

namespace ibg {

/// Safety game in which agent 0 keeps agent j's goal out of F^j against j's
/// unilateral changes of its own channel. Agent-0 vertices are the goal states
/// (vertex id == state id); agent-1 vertices are ⟨q, key⟩ for safe q, where the
/// key is the letter restricted to (goal mask ∪ {j}).
struct DeviationGame {
  std::uint32_t agent = 0;
  std::size_t num_goal_states = 0;
  RestrictedAlphabet keys;
  /// Full letter index -> key index.
  std::vector<LetterIndex> key_of_letter;
  /// q * |keys| + key -> agent-1 vertex, kNone when q is accepting.
  std::vector<std::uint32_t> choice_vertex;
  /// Agent-1 vertex -> key (kNone-filled for agent-0 vertices).
  std::vector<LetterIndex> vertex_key;
  Arena arena;
  std::vector<bool> safe;
  SafetySolution solution;

  std::uint32_t vertex(StateId q, LetterIndex full_letter) const {
    return choice_vertex[q * keys.size() + key_of_letter[full_letter]];
  }
  /// ⟨q, α⟩ ∈ Win0 (false when q is accepting).
  bool safe_choice(StateId q, LetterIndex full_letter) const {
    const auto v = vertex(q, full_letter);
    return v != kNone && solution.winning0(v);
  }
};

/// Builds and solves G_j for agent j from its goal in DFA form.
DeviationGame build_deviation_game(const Ibg& game, std::uint32_t agent, const Dfa& goal);

struct ProductState {
  std::vector<StateId> goals;
  AgentSet pending;
  auto operator<=>(const ProductState&) const = default;
};

struct ProductEdge {
  LetterIndex letter;
  std::uint32_t target;
  bool operator==(const ProductEdge&) const = default;
};

/// Reachable part of the deterministic Büchi product; state 0 is initial and
/// accepting states are those with no pending winner left.
struct ProductBuchi {
  std::vector<ProductState> states;
  std::vector<std::vector<ProductEdge>> edges;

  bool accepting(std::uint32_t s) const { return states[s].pending.empty(); }
  std::size_t num_transitions() const;
};

/// Unrefined product: a step is undefined when an agent outside W enters its F.
ProductBuchi build_product_buchi(const Ibg& game, AgentSet winners, std::span<const Dfa> goals);

/// Keeps a transition on α from q only when ⟨q[j], α⟩ ∈ Win0(G_j) for every
/// j outside W, then drops unreachable states. `games[j]` must be set for j ∉ W.
ProductBuchi refine(const ProductBuchi& product, AgentSet winners,
                    std::span<const std::optional<DeviationGame>> games);

/// Same result as refine(build_product_buchi(...)) without materializing the
/// transitions that refinement deletes.
ProductBuchi build_refined_product(const Ibg& game, AgentSet winners, std::span<const Dfa> goals,
                                   std::span<const std::optional<DeviationGame>> games);

struct BuchiLasso {
  std::vector<std::uint32_t> prefix_states;  // state before each prefix letter
  std::vector<LetterIndex> prefix_letters;
  std::vector<std::uint32_t> cycle_states;  // cycle_states[0] is accepting
  std::vector<LetterIndex> cycle_letters;

  UltimatelyPeriodicWord word(const ProductAlphabet& alphabet) const;
};

/// Shortest lasso through an accepting state on a cycle, lowest letters first.
std::optional<BuchiLasso> buchi_nonempty(const ProductBuchi& product);

struct RealizabilityStats {
  std::vector<std::size_t> goal_dfa_states;
  /// Vertex count of G_j, 0 for agents in W.
  std::vector<std::size_t> deviation_game_vertices;
  std::size_t product_states = 0;
  std::size_t product_transitions = 0;
};

struct RealizabilityWitness {
  UltimatelyPeriodicWord lasso;
  StrategyProfile profile;
  /// Positional agent-0 strategy of G_j per losing agent j.
  std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> deviation_strategies;
};

struct RealizabilityVerdict {
  bool realizable = false;
  std::optional<RealizabilityWitness> witness;
  RealizabilityStats stats;
};

/// Moore machines replaying the lasso and punishing single deviations by
/// losing agents with the Win0 strategy of their deviation game.
StrategyProfile extract_witness(const Ibg& game, AgentSet winners, std::span<const Dfa> goals,
                                const ProductBuchi& refined, const BuchiLasso& lasso,
                                std::span<const std::optional<DeviationGame>> games);

RealizabilityVerdict realizable(const Ibg& game, AgentSet winners,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace ibg
