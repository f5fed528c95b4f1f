#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibg/alphabet.hpp"
#include "ibg/automata.hpp"

namespace ibg {

/// Set of agent indices, at most 32 agents.
class AgentSet {
 public:
  AgentSet() = default;
  explicit AgentSet(std::uint32_t bits) : bits_(bits) {}
  AgentSet(std::initializer_list<std::uint32_t> agents);

  static AgentSet all(std::size_t num_agents);

  bool contains(std::uint32_t agent) const { return agent < 32 && ((bits_ >> agent) & 1U); }
  void insert(std::uint32_t agent) { bits_ |= 1U << agent; }
  void erase(std::uint32_t agent) { bits_ &= ~(1U << agent); }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::uint32_t bits() const { return bits_; }
  std::vector<std::uint32_t> members() const;
  std::string to_string() const;

  auto operator<=>(const AgentSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

inline constexpr std::size_t kMaxAgents = 31;

/// Iterated Boolean game: one channel and one goal per agent.
class Ibg {
 public:
  Ibg(AlphabetPtr alphabet, std::vector<std::string> agent_names, std::vector<GoalAutomaton> goals);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t num_agents() const { return goals_.size(); }
  const GoalAutomaton& goal(std::size_t agent) const { return goals_.at(agent); }
  const std::vector<GoalAutomaton>& goals() const { return goals_; }
  const std::string& agent_name(std::size_t agent) const { return names_.at(agent); }
  const std::vector<std::string>& agent_names() const { return names_; }

  /// Throws InputError unless every member of `winners` is an agent.
  void check_agents(AgentSet winners) const;

  bool operator==(const Ibg& other) const;

 private:
  AlphabetPtr alphabet_;
  std::vector<std::string> names_;
  std::vector<GoalAutomaton> goals_;
};

/// Strategy of one agent: reads (a mask of) the global letter, outputs a symbol of its own channel.
class MooreMachine {
 public:
  /// `table[s * |Σ_mask| + r]` is ρ(s, r); `output[s]` is a symbol index of channel `owner`.
  MooreMachine(AlphabetPtr alphabet, std::uint32_t owner, ChannelMask mask, StateId initial,
               std::vector<StateId> table, std::vector<std::uint32_t> output, std::vector<std::string> names = {});

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::uint32_t owner() const { return owner_; }
  const ChannelMask& mask() const { return restricted_.mask(); }
  const RestrictedAlphabet& restricted() const { return restricted_; }
  std::size_t num_states() const { return output_.size(); }
  StateId initial() const { return initial_; }
  std::uint32_t output(StateId s) const { return output_[s]; }
  StateId step(StateId s, const Letter& letter) const {
    return table_[s * restricted_.size() + restricted_.index_of(letter)];
  }
  StateId step_restricted(StateId s, LetterIndex r) const { return table_[s * restricted_.size() + r]; }
  const std::vector<StateId>& table() const { return table_; }
  const std::vector<std::uint32_t>& outputs() const { return output_; }
  const std::string& state_name(StateId s) const { return names_[s]; }
  const std::vector<std::string>& state_names() const { return names_; }

  bool operator==(const MooreMachine& other) const;

 private:
  AlphabetPtr alphabet_;
  std::uint32_t owner_;
  RestrictedAlphabet restricted_;
  StateId initial_;
  std::vector<StateId> table_;
  std::vector<std::uint32_t> output_;
  std::vector<std::string> names_;
};

struct StrategyProfile {
  std::vector<MooreMachine> machines;

  bool operator==(const StrategyProfile&) const = default;
};

/// Throws InputError when the profile does not fit the game.
void check_profile(const Ibg& game, const StrategyProfile& profile);

/// Reachable part of the component-wise product of a profile's machines.
class GlobalMoore {
 public:
  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return outputs_.size(); }
  StateId initial() const { return 0; }
  StateId next(StateId s, LetterIndex letter) const { return next_[s * letters_ + letter]; }
  LetterIndex output(StateId s) const { return outputs_[s]; }
  const std::vector<StateId>& components(StateId s) const { return components_[s]; }

 private:
  friend GlobalMoore product_profile(const StrategyProfile& profile);

  AlphabetPtr alphabet_;
  LetterIndex letters_ = 0;
  std::vector<StateId> next_;
  std::vector<LetterIndex> outputs_;
  std::vector<std::vector<StateId>> components_;
};

GlobalMoore product_profile(const StrategyProfile& profile);

/// Follows s <- ρ(s, γ(s)) until a product state repeats.
UltimatelyPeriodicWord primary_trace(const GlobalMoore& global);

AgentSet winning_set(const UltimatelyPeriodicWord& trace, const Ibg& game);

}  // namespace ibg
