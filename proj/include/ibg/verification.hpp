#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "ibg/game.hpp"
#include "ibg/parallel.hpp"
#include "ibg/safety.hpp"

namespace ibg {

/// Goal as consumed by the query graphs; AFA goals go through afa_to_nfa first.
using QueryGoal = std::variant<Dfa, Nfa>;

QueryGoal query_goal(const GoalAutomaton& goal);

/// One edge of a query path: the letter read and the goal/profile states reached.
struct PathStep {
  LetterIndex letter;
  StateId goal_state;
  StateId profile_state;
  bool operator==(const PathStep&) const = default;
};

enum class Violation { None, PrimaryTrace, DeviantTrace };

struct AgentQueryResult {
  std::uint32_t agent = 0;
  bool winner = false;  // i-query when true, j-query otherwise
  bool passed = false;
  /// Path in the profile product graph from ⟨q0, s0⟩: an accepting path for a
  /// passing i-query, the path to the violation for a failing j-query.
  std::vector<PathStep> path;
  Violation violation = Violation::None;
  /// Deviant-trace violations: agent-1 moves from the end of `path` into F^j.
  std::vector<PathStep> escape;
  std::size_t graph_vertices = 0;
  std::size_t game_vertices = 0;
};

/// G_{π,j} on the reachable part. Agent-0 vertices are ⟨q, s⟩; each one with
/// q ∉ F^j has a single agent-1 vertex standing for α = γ(s).
struct ProfileDeviationGame {
  std::uint32_t agent = 0;
  std::vector<std::pair<StateId, StateId>> positions;  // agent-0 vertex -> ⟨q, s⟩
  std::map<std::pair<StateId, StateId>, std::uint32_t> index;
  std::vector<std::uint32_t> choice;                   // agent-0 vertex -> agent-1 vertex or kNone
  /// Agent-1 vertex id - positions.size() -> (β, target) pairs in ascending order.
  std::vector<std::vector<std::pair<LetterIndex, std::uint32_t>>> moves;
  Arena arena;
  std::vector<bool> safe;
  SafetySolution solution;

  std::optional<std::uint32_t> find(StateId q, StateId s) const;
};

AgentQueryResult i_query(const QueryGoal& goal, const GlobalMoore& global, std::uint32_t agent);
ProfileDeviationGame build_profile_deviation_game(const QueryGoal& goal, const GlobalMoore& global,
                                                  std::uint32_t agent);
AgentQueryResult j_query(const QueryGoal& goal, const GlobalMoore& global, std::uint32_t agent);

struct VerificationReport {
  bool is_ne = false;
  AgentSet winners;
  std::vector<AgentQueryResult> agents;
  std::size_t profile_states = 0;
};

VerificationReport verify(const Ibg& game, AgentSet winners, const StrategyProfile& profile,
                          ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace ibg
