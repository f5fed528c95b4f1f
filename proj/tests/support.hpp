#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibg/game.hpp"
#include "ibg/ltlf.hpp"
#include "ibg/safety.hpp"
#include "ibg/verification.hpp"

namespace ibg::test {

std::string games_dir();

/// Σ0 = {a, b}, Σ1 = {c, d}.
AlphabetPtr ac_alphabet();
Letter letter(const ProductAlphabet& alphabet, const std::string& text);  // "ac" -> (a,c)
std::vector<Letter> word(const ProductAlphabet& alphabet, const std::vector<std::string>& letters);

/// Accepting sink after a letter in `hits`, rejecting sink after any other first letter.
Dfa first_letter_dfa(const AlphabetPtr& alphabet, const std::vector<std::string>& hits);
/// Two states: waiting, seen (accepting sink) once `target` occurs.
Dfa contains_dfa(const AlphabetPtr& alphabet, const std::string& target);
Nfa contains_nfa(const AlphabetPtr& alphabet, const std::string& target);

Ibg mp_game();
Ibg ev_game();

StrategyProfile constant_profile(const Ibg& game, const std::vector<std::uint32_t>& symbols);

/// Same game with every DFA goal wrapped as an NFA or as a disjunction-only AFA.
Ibg wrap_as_nfa(const Ibg& game);
Ibg wrap_as_afa(const Ibg& game);
/// Same game with every goal converted to a DFA by the library.
std::vector<Dfa> goal_dfas(const Ibg& game);

/// n states over channel 0 of `alphabet`: accepts words whose (n-1)-th letter
/// from the end has symbol 0 on channel 0.
Nfa nth_from_end_nfa(const AlphabetPtr& alphabet, std::size_t n);
/// States of the minimal DFA equivalent to `dfa` (reachable part, Moore refinement).
std::size_t minimal_dfa_size(const Dfa& dfa);

/// Greatest fixpoint: drop agent-0 vertices without a surviving successor and
/// agent-1 vertices with an escaping one, until nothing changes.
std::vector<bool> naive_safety(const Arena& arena, const std::vector<bool>& safe);

/// Recursive LTLf semantics on finite words; the empty word uses the polarity rule.
bool ltlf_accepts(const ltlf::Formula& f, const std::vector<Letter>& word);
/// Bit i set iff the formula holds on the suffix of the nonempty word starting at i.
std::uint64_t ltlf_positions(const ltlf::Formula& f, const std::vector<Letter>& word);
/// One operator applied to operand position masks over a word of length n (n >= 1).
std::uint64_t ltlf_apply(ltlf::Op op, std::uint64_t lhs, std::uint64_t rhs, std::size_t n);
bool ltlf_holds_on_empty(const ltlf::Formula& f);

/// All words of length 0..max_len in length-lexicographic order.
std::vector<std::vector<Letter>> all_words(const ProductAlphabet& alphabet, std::size_t max_len);

/// Replays a deviant-trace escape from the end of `r.path`: each letter must
/// match the profile off channel j, goal states must follow δ^j, and the last
/// goal state must be accepting.
bool replay_escape(const QueryGoal& goal, const GlobalMoore& global, const AgentQueryResult& r);

}  // namespace ibg::test
