#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ibg/game.hpp"

namespace ibg {

/// Brute-force search ran out of its state budget; never a verdict.
class OracleOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  /// Upper bound on explored search states per oracle_verify call.
  std::size_t max_states = 1'000'000;
  /// 0: constant machines, 1: machines remembering the last full letter.
  unsigned memory = 1;
  /// Upper bound on profiles tried by oracle_realizable_onesided.
  std::size_t max_profiles = 100'000;
};

/// Goal simulation that does not share code with the engine's conversions.
/// DFA: current state; NFA: current subset; AFA: the family D_n of state sets S
/// whose forward image under w_0..w_{n-1} contains q0 (one bit per subset).
class GoalEvaluator {
 public:
  using Config = std::vector<std::uint64_t>;

  explicit GoalEvaluator(GoalAutomaton goal);

  Config initial() const;
  Config step(const Config& c, const Letter& letter) const;
  bool accepting(const Config& c) const;

 private:
  GoalAutomaton goal_;
  std::size_t states_;
  std::uint64_t final_mask_ = 0;  // AFA/NFA: bitmask of accepting states
};

/// Direct simulation of Nash-equilibrium conditions for winning set W.
/// Throws OracleOverflow when the budget is exceeded.
bool oracle_verify(const Ibg& game, AgentSet winners, const StrategyProfile& profile,
                   const OracleConfig& config = {});

struct EnumerationResult {
  std::size_t visited = 0;
  bool truncated = false;
};

/// Calls `visit` on every profile of the given memory bound in lexicographic
/// order of output tables (agent 0's table most significant) until `visit`
/// returns false or `budget` profiles were produced.
EnumerationResult enumerate_profiles(const Ibg& game, unsigned memory, std::size_t budget,
                                     const std::function<bool(const StrategyProfile&)>& visit);

/// Number of profiles of the given memory bound, saturating at SIZE_MAX.
std::size_t count_profiles(const Ibg& game, unsigned memory);

struct OneSidedResult {
  std::optional<StrategyProfile> witness;  // unset means unknown, not unrealizable
  std::size_t profiles_checked = 0;
  bool truncated = false;
};

OneSidedResult oracle_realizable_onesided(const Ibg& game, AgentSet winners, const OracleConfig& config = {});

}  // namespace ibg
