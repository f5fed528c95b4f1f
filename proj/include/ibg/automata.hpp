#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ibg/alphabet.hpp"

namespace ibg {

/// Sorted, duplicate-free list of state ids.
using StateSet = std::vector<StateId>;

/// Negation-free Boolean formula over automaton states.
class PositiveFormula {
 public:
  enum class Kind : std::uint8_t { True, False, Atom, And, Or };

  PositiveFormula() = default;  // false

  static PositiveFormula top();
  static PositiveFormula bottom();
  static PositiveFormula atom(StateId state);
  /// Constants are folded and nested conjunctions flattened.
  static PositiveFormula conj(std::vector<PositiveFormula> args);
  static PositiveFormula disj(std::vector<PositiveFormula> args);

  Kind kind() const { return kind_; }
  StateId state() const { return state_; }
  const std::vector<PositiveFormula>& args() const { return args_; }

  bool satisfied_by(const std::vector<bool>& states) const;
  /// Antichain of minimal satisfying state sets.
  std::vector<StateSet> minimal_models() const;
  void collect_states(std::vector<StateId>& out) const;
  std::string to_string(const std::vector<std::string>& names) const;

  bool operator==(const PositiveFormula&) const = default;

 private:
  Kind kind_ = Kind::False;
  StateId state_ = 0;
  std::vector<PositiveFormula> args_;
};

/// Drops every set that is a superset of another one; result is sorted.
std::vector<StateSet> minimize_antichain(std::vector<StateSet> sets);
/// Minimal models of the conjunction of several formulas.
std::vector<StateSet> conjunction_models(std::span<const PositiveFormula* const> formulas);

/// Parts shared by all three goal kinds. Transitions are keyed on letters
/// restricted to `mask`, so storage is |Q| * |Σ_mask|.
class AutomatonBase {
 public:
  const AlphabetPtr& alphabet() const { return alphabet_; }
  const ChannelMask& mask() const { return restricted_.mask(); }
  const RestrictedAlphabet& restricted() const { return restricted_; }
  std::size_t num_states() const { return accepting_.size(); }
  StateId initial() const { return initial_; }
  bool accepting(StateId q) const { return accepting_[q]; }
  const std::vector<bool>& accepting_states() const { return accepting_; }
  const std::string& state_name(StateId q) const { return names_[q]; }
  const std::vector<std::string>& state_names() const { return names_; }
  bool has_accepting_state() const;

 protected:
  AutomatonBase(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<bool> accepting,
                std::vector<std::string> names);
  std::size_t slot(StateId q, LetterIndex r) const { return q * restricted_.size() + r; }

  AlphabetPtr alphabet_;
  RestrictedAlphabet restricted_;
  StateId initial_;
  std::vector<bool> accepting_;
  std::vector<std::string> names_;
};

/// Total deterministic automaton.
class Dfa : public AutomatonBase {
 public:
  /// `table[q * |Σ_mask| + r]` is δ(q, r); every entry must be a valid state.
  Dfa(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<StateId> table,
      std::vector<bool> accepting, std::vector<std::string> names = {});

  StateId step(StateId q, const Letter& letter) const {
    return table_[slot(q, restricted_.index_of(letter))];
  }
  StateId step_restricted(StateId q, LetterIndex r) const { return table_[slot(q, r)]; }
  const std::vector<StateId>& table() const { return table_; }

  bool operator==(const Dfa& other) const;

 private:
  std::vector<StateId> table_;
};

/// Nondeterministic automaton; a missing entry means the run dies.
class Nfa : public AutomatonBase {
 public:
  /// `successors[q * |Σ_mask| + r]` lists δ(q, r); lists are sorted on construction.
  Nfa(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<StateSet> successors,
      std::vector<bool> accepting, std::vector<std::string> names = {});

  std::span<const StateId> successors(StateId q, const Letter& letter) const {
    return successors_[slot(q, restricted_.index_of(letter))];
  }
  std::span<const StateId> successors_restricted(StateId q, LetterIndex r) const {
    return successors_[slot(q, r)];
  }
  const std::vector<StateSet>& table() const { return successors_; }

  bool operator==(const Nfa& other) const;

 private:
  std::vector<StateSet> successors_;
};

/// Alternating automaton with positive Boolean transition formulas.
class Afa : public AutomatonBase {
 public:
  Afa(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<PositiveFormula> transitions,
      std::vector<bool> accepting, std::vector<std::string> names = {});

  const PositiveFormula& transition(StateId q, const Letter& letter) const {
    return transitions_[slot(q, restricted_.index_of(letter))];
  }
  const PositiveFormula& transition_restricted(StateId q, LetterIndex r) const {
    return transitions_[slot(q, r)];
  }
  const std::vector<PositiveFormula>& table() const { return transitions_; }

  bool operator==(const Afa& other) const;

 private:
  std::vector<PositiveFormula> transitions_;
};

using GoalAutomaton = std::variant<Dfa, Nfa, Afa>;

const AutomatonBase& base_of(const GoalAutomaton& goal);
std::string kind_name(const GoalAutomaton& goal);

/// u · v^ω with v nonempty.
struct UltimatelyPeriodicWord {
  std::vector<Letter> prefix;
  std::vector<Letter> period;

  UltimatelyPeriodicWord() = default;
  UltimatelyPeriodicWord(std::vector<Letter> u, std::vector<Letter> v);

  const Letter& at(std::size_t position) const;
  std::size_t lasso_length() const { return prefix.size() + period.size(); }
  /// u·v as one period appended to the prefix, same infinite word.
  UltimatelyPeriodicWord unrolled() const;
};

bool accepts(const Dfa& dfa, std::span<const Letter> word);
/// Reachable-subset simulation.
bool accepts(const Nfa& nfa, std::span<const Letter> word);
/// Backward evaluation: S_n = F, S_i = { q : δ(q, w_i) holds under S_{i+1} }.
bool accepts(const Afa& afa, std::span<const Letter> word);
bool accepts(const GoalAutomaton& goal, std::span<const Letter> word);

/// True iff some finite prefix (including ε) of the lasso is accepted.
bool accepts_prefix(const GoalAutomaton& goal, const UltimatelyPeriodicWord& word);

/// Subset construction over reachable subsets; the empty subset is an explicit sink.
Dfa determinize(const Nfa& nfa);
/// Obligation-set construction using minimal models only.
Nfa afa_to_nfa(const Afa& afa);
/// determinize(afa_to_nfa(afa)) with all states that cannot reach F merged into one sink.
Dfa afa_to_dfa(const Afa& afa);
Dfa collapse_dead_states(const Dfa& dfa);

Nfa as_nfa(const Dfa& dfa);
/// Every transition becomes a disjunction of state atoms.
Afa as_afa(const Nfa& nfa);
Dfa to_dfa(const GoalAutomaton& goal);

}  // namespace ibg
