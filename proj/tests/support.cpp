#include "support.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ibg::test {

std::string games_dir() { return IBG_GAMES_DIR; }

AlphabetPtr ac_alphabet() {
  return std::make_shared<const ProductAlphabet>(std::vector<std::vector<std::string>>{{"a", "b"}, {"c", "d"}});
}

Letter letter(const ProductAlphabet& alphabet, const std::string& text) {
  if (text.size() != alphabet.num_channels()) throw std::invalid_argument("letter: wrong length");
  Letter l;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto idx = alphabet.find(i, std::string(1, text[i]));
    if (!idx) throw std::invalid_argument("letter: unknown symbol");
    l.picks.push_back(*idx);
  }
  return l;
}

std::vector<Letter> word(const ProductAlphabet& alphabet, const std::vector<std::string>& letters) {
  std::vector<Letter> out;
  for (const auto& l : letters) out.push_back(letter(alphabet, l));
  return out;
}

Dfa first_letter_dfa(const AlphabetPtr& alphabet, const std::vector<std::string>& hits) {
  const auto k = alphabet->num_channels();
  const RestrictedAlphabet full(*alphabet, ChannelMask::full(k));
  std::vector<StateId> table(3 * full.size());
  for (LetterIndex a = 0; a < full.size(); ++a) {
    const auto text = [&] {
      std::string s;
      const auto l = alphabet->letter(a);
      for (std::size_t i = 0; i < k; ++i) s += alphabet->symbol(i, l[i]);
      return s;
    }();
    table[a] = std::find(hits.begin(), hits.end(), text) != hits.end() ? 1 : 2;
    table[full.size() + a] = 1;
    table[2 * full.size() + a] = 2;
  }
  return Dfa(alphabet, ChannelMask::full(k), 0, std::move(table), {false, true, false}, {"start", "hit", "miss"});
}

Dfa contains_dfa(const AlphabetPtr& alphabet, const std::string& target) {
  const auto k = alphabet->num_channels();
  const auto t = alphabet->index(letter(*alphabet, target));
  std::vector<StateId> table(2 * alphabet->size());
  for (LetterIndex a = 0; a < alphabet->size(); ++a) {
    table[a] = a == t ? 1 : 0;
    table[alphabet->size() + a] = 1;
  }
  return Dfa(alphabet, ChannelMask::full(k), 0, std::move(table), {false, true}, {"waiting", "seen"});
}

Nfa contains_nfa(const AlphabetPtr& alphabet, const std::string& target) {
  const auto k = alphabet->num_channels();
  const auto t = alphabet->index(letter(*alphabet, target));
  std::vector<StateSet> table(2 * alphabet->size());
  for (LetterIndex a = 0; a < alphabet->size(); ++a) {
    table[a] = a == t ? StateSet{0, 1} : StateSet{0};
    table[alphabet->size() + a] = {1};
  }
  return Nfa(alphabet, ChannelMask::full(k), 0, std::move(table), {false, true}, {"scan", "found"});
}

Ibg mp_game() {
  const auto alphabet = ac_alphabet();
  return Ibg(alphabet, {"matcher", "mismatcher"},
             {first_letter_dfa(alphabet, {"ac", "bd"}), first_letter_dfa(alphabet, {"ad", "bc"})});
}

Ibg ev_game() {
  const auto alphabet = ac_alphabet();
  return Ibg(alphabet, {"first", "second"}, {contains_dfa(alphabet, "ac"), contains_dfa(alphabet, "bc")});
}

StrategyProfile constant_profile(const Ibg& game, const std::vector<std::uint32_t>& symbols) {
  StrategyProfile p;
  for (std::uint32_t i = 0; i < game.num_agents(); ++i)
    p.machines.emplace_back(game.alphabet(), i, ChannelMask(), 0, std::vector<StateId>{0},
                            std::vector<std::uint32_t>{symbols.at(i)});
  return p;
}

Ibg wrap_as_nfa(const Ibg& game) {
  std::vector<GoalAutomaton> goals;
  for (const auto& g : game.goals()) goals.emplace_back(as_nfa(std::get<Dfa>(g)));
  return Ibg(game.alphabet(), game.agent_names(), std::move(goals));
}

Ibg wrap_as_afa(const Ibg& game) {
  std::vector<GoalAutomaton> goals;
  for (const auto& g : game.goals()) goals.emplace_back(as_afa(as_nfa(std::get<Dfa>(g))));
  return Ibg(game.alphabet(), game.agent_names(), std::move(goals));
}

std::vector<Dfa> goal_dfas(const Ibg& game) {
  std::vector<Dfa> out;
  for (const auto& g : game.goals()) out.push_back(to_dfa(g));
  return out;
}

Nfa nth_from_end_nfa(const AlphabetPtr& alphabet, std::size_t n) {
  if (n < 2) throw std::invalid_argument("nth_from_end_nfa: n >= 2");
  const ChannelMask mask({0});
  const auto r = alphabet->channel_size(0);
  std::vector<StateSet> table(n * r);
  for (std::uint32_t x = 0; x < r; ++x) {
    table[x] = x == 0 ? StateSet{0, 1} : StateSet{0};
    for (StateId q = 1; q + 1 < n; ++q) table[q * r + x] = {q + 1};
  }
  std::vector<bool> acc(n, false);
  acc[n - 1] = true;
  return Nfa(alphabet, mask, 0, std::move(table), std::move(acc));
}

std::size_t minimal_dfa_size(const Dfa& dfa) {
  const auto r = dfa.restricted().size();
  std::vector<StateId> reach{dfa.initial()};
  std::vector<bool> seen(dfa.num_states(), false);
  seen[dfa.initial()] = true;
  for (std::size_t i = 0; i < reach.size(); ++i)
    for (LetterIndex a = 0; a < r; ++a) {
      const auto t = dfa.step_restricted(reach[i], a);
      if (!seen[t]) {
        seen[t] = true;
        reach.push_back(t);
      }
    }
  std::vector<std::size_t> cls(dfa.num_states(), 0);
  for (auto q : reach) cls[q] = dfa.accepting(q) ? 1 : 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> signatures;
    std::vector<std::size_t> next(dfa.num_states(), 0);
    for (auto q : reach) {
      std::vector<std::size_t> sig{cls[q]};
      for (LetterIndex a = 0; a < r; ++a) sig.push_back(cls[dfa.step_restricted(q, a)]);
      next[q] = signatures.emplace(std::move(sig), signatures.size()).first->second;
    }
    cls = std::move(next);
    if (signatures.size() == count) return count;
    count = signatures.size();
  }
}

std::vector<bool> naive_safety(const Arena& arena, const std::vector<bool>& safe) {
  std::vector<bool> win = safe;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::uint32_t v = 0; v < arena.size(); ++v) {
      if (!win[v]) continue;
      const auto succ = arena.successors(v);
      const bool keep = arena.owner(v) == Player::Zero
                            ? std::any_of(succ.begin(), succ.end(), [&](auto t) { return win[t]; })
                            : std::all_of(succ.begin(), succ.end(), [&](auto t) { return win[t]; });
      if (!keep) {
        win[v] = false;
        changed = true;
      }
    }
  }
  return win;
}

namespace {

using ltlf::Op;

std::uint64_t until_mask(std::uint64_t a, std::uint64_t b, std::size_t n) {
  std::uint64_t out = 0;
  bool next = false;
  for (std::size_t i = n; i-- > 0;) {
    next = ((b >> i) & 1U) || (((a >> i) & 1U) && next);
    if (next) out |= std::uint64_t{1} << i;
  }
  return out;
}

std::uint64_t release_mask(std::uint64_t a, std::uint64_t b, std::size_t n) {
  std::uint64_t out = 0;
  bool next = true;
  for (std::size_t i = n; i-- > 0;) {
    next = ((b >> i) & 1U) && (((a >> i) & 1U) || next);
    if (next) out |= std::uint64_t{1} << i;
  }
  return out;
}

/// Truth on the empty word of f (positive) or of its negation (negative),
/// read off the negation normal form without building it.
bool on_empty(const ltlf::Formula& f, bool positive) {
  switch (f->op) {
    case Op::True:
      return positive;
    case Op::False:
      return !positive;
    case Op::Atom:
    case Op::NegAtom:
      return false;
    case Op::Not:
      return on_empty(f->lhs, !positive);
    case Op::And:
      return positive ? on_empty(f->lhs, true) && on_empty(f->rhs, true)
                      : on_empty(f->lhs, false) || on_empty(f->rhs, false);
    case Op::Or:
      return positive ? on_empty(f->lhs, true) || on_empty(f->rhs, true)
                      : on_empty(f->lhs, false) && on_empty(f->rhs, false);
    case Op::Next:
    case Op::Until:
    case Op::Eventually:
      return !positive;
    case Op::WeakNext:
    case Op::Release:
    case Op::Always:
      return positive;
  }
  return false;
}

}  // namespace

std::uint64_t ltlf_apply(ltlf::Op op, std::uint64_t a, std::uint64_t b, std::size_t n) {
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  switch (op) {
    case Op::True: return all;
    case Op::False: return 0;
    case Op::Not: return all & ~a;
    case Op::And: return a & b;
    case Op::Or: return a | b;
    case Op::Next: return a >> 1;
    case Op::WeakNext: return n == 0 ? 0 : (a >> 1) | (std::uint64_t{1} << (n - 1));
    case Op::Until: return until_mask(a, b, n);
    case Op::Release: return release_mask(a, b, n);
    case Op::Eventually: return until_mask(all, a, n);
    case Op::Always: return release_mask(0, a, n);
    case Op::Atom:
    case Op::NegAtom: break;
  }
  throw std::invalid_argument("ltlf_apply: atoms have no operands");
}

std::uint64_t ltlf_positions(const ltlf::Formula& f, const std::vector<Letter>& w) {
  if (w.size() > 63) throw std::invalid_argument("ltlf_positions: word too long");
  const auto n = w.size();
  if (f->op == Op::Atom || f->op == Op::NegAtom) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (w[i][f->channel] == f->symbol) m |= std::uint64_t{1} << i;
    return f->op == Op::Atom ? m : ltlf_apply(Op::Not, m, 0, n);
  }
  const auto a = f->lhs ? ltlf_positions(f->lhs, w) : 0;
  const auto b = f->rhs ? ltlf_positions(f->rhs, w) : 0;
  return ltlf_apply(f->op, a, b, n);
}

bool ltlf_holds_on_empty(const ltlf::Formula& f) { return on_empty(f, true); }

bool ltlf_accepts(const ltlf::Formula& f, const std::vector<Letter>& w) {
  if (w.empty()) return on_empty(f, true);
  return ltlf_positions(f, w) & 1U;
}

std::vector<std::vector<Letter>> all_words(const ProductAlphabet& alphabet, std::size_t max_len) {
  std::vector<std::vector<Letter>> out{{}};
  for (std::size_t begin = 0, len = 0; len < max_len; ++len) {
    const auto end = out.size();
    for (auto i = begin; i < end; ++i)
      for (LetterIndex a = 0; a < alphabet.size(); ++a) {
        auto w = out[i];
        w.push_back(alphabet.letter(a));
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

bool replay_escape(const QueryGoal& goal, const GlobalMoore& global, const AgentQueryResult& r) {
  const auto& alphabet = *global.alphabet();
  const auto& base = std::visit([](const auto& a) -> const AutomatonBase& { return a; }, goal);
  StateId q = r.path.empty() ? base.initial() : r.path.back().goal_state;
  StateId s = r.path.empty() ? global.initial() : r.path.back().profile_state;
  if (r.escape.empty()) return base.accepting(q);
  for (const auto& step : r.escape) {
    const auto beta = alphabet.letter(step.letter);
    const auto alpha = alphabet.letter(global.output(s));
    for (std::size_t i = 0; i < alphabet.num_channels(); ++i)
      if (i != r.agent && beta[i] != alpha[i]) return false;
    bool ok;
    if (const auto* d = std::get_if<Dfa>(&goal)) {
      ok = d->step(q, beta) == step.goal_state;
    } else {
      const auto succ = std::get<Nfa>(goal).successors(q, beta);
      ok = std::find(succ.begin(), succ.end(), step.goal_state) != succ.end();
    }
    if (!ok || global.next(s, step.letter) != step.profile_state) return false;
    q = step.goal_state;
    s = step.profile_state;
  }
  return base.accepting(q);
}

}  // namespace ibg::test
