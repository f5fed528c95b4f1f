#include "ibg/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace ibg {

// ---------------------------------------------------------------------------
// PositiveFormula

PositiveFormula PositiveFormula::top() {
  PositiveFormula f;
  f.kind_ = Kind::True;
  return f;
}

PositiveFormula PositiveFormula::bottom() { return PositiveFormula{}; }

PositiveFormula PositiveFormula::atom(StateId state) {
  PositiveFormula f;
  f.kind_ = Kind::Atom;
  f.state_ = state;
  return f;
}

namespace {

PositiveFormula fold(PositiveFormula::Kind op, std::vector<PositiveFormula> args) {
  using K = PositiveFormula::Kind;
  const K absorbing = op == K::And ? K::False : K::True;
  const K neutral = op == K::And ? K::True : K::False;
  std::vector<PositiveFormula> kept;
  for (auto& a : args) {
    if (a.kind() == absorbing) return a;
    if (a.kind() == neutral) continue;
    if (a.kind() == op) {
      for (const auto& inner : a.args()) kept.push_back(inner);
    } else {
      kept.push_back(std::move(a));
    }
  }
  if (kept.empty()) return neutral == K::True ? PositiveFormula::top() : PositiveFormula::bottom();
  if (kept.size() == 1) return std::move(kept.front());
  return op == K::And ? PositiveFormula::conj(std::move(kept)) : PositiveFormula::disj(std::move(kept));
}

}  // namespace

PositiveFormula PositiveFormula::conj(std::vector<PositiveFormula> args) {
  bool flat = args.size() > 1;
  for (const auto& a : args)
    if (a.kind_ == Kind::True || a.kind_ == Kind::False || a.kind_ == Kind::And) flat = false;
  if (!flat) return fold(Kind::And, std::move(args));
  PositiveFormula f;
  f.kind_ = Kind::And;
  f.args_ = std::move(args);
  return f;
}

PositiveFormula PositiveFormula::disj(std::vector<PositiveFormula> args) {
  bool flat = args.size() > 1;
  for (const auto& a : args)
    if (a.kind_ == Kind::True || a.kind_ == Kind::False || a.kind_ == Kind::Or) flat = false;
  if (!flat) return fold(Kind::Or, std::move(args));
  PositiveFormula f;
  f.kind_ = Kind::Or;
  f.args_ = std::move(args);
  return f;
}

bool PositiveFormula::satisfied_by(const std::vector<bool>& states) const {
  switch (kind_) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return states[state_];
    case Kind::And:
      return std::all_of(args_.begin(), args_.end(), [&](const auto& a) { return a.satisfied_by(states); });
    case Kind::Or:
      return std::any_of(args_.begin(), args_.end(), [&](const auto& a) { return a.satisfied_by(states); });
  }
  return false;
}

std::vector<StateSet> minimize_antichain(std::vector<StateSet> sets) {
  std::sort(sets.begin(), sets.end(), [](const StateSet& a, const StateSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<StateSet> kept;
  for (auto& s : sets) {
    bool dominated = false;
    for (const auto& k : kept) {
      if (std::includes(s.begin(), s.end(), k.begin(), k.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

namespace {

std::vector<StateSet> cross(const std::vector<StateSet>& lhs, const std::vector<StateSet>& rhs) {
  std::vector<StateSet> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto& a : lhs) {
    for (const auto& b : rhs) {
      StateSet u;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
      out.push_back(std::move(u));
    }
  }
  return minimize_antichain(std::move(out));
}

}  // namespace

std::vector<StateSet> PositiveFormula::minimal_models() const {
  switch (kind_) {
    case Kind::True: return {StateSet{}};
    case Kind::False: return {};
    case Kind::Atom: return {StateSet{state_}};
    case Kind::Or: {
      std::vector<StateSet> all;
      for (const auto& a : args_) {
        auto m = a.minimal_models();
        all.insert(all.end(), m.begin(), m.end());
      }
      return minimize_antichain(std::move(all));
    }
    case Kind::And: {
      std::vector<StateSet> acc{StateSet{}};
      for (const auto& a : args_) {
        acc = cross(acc, a.minimal_models());
        if (acc.empty()) break;
      }
      return acc;
    }
  }
  return {};
}

std::vector<StateSet> conjunction_models(std::span<const PositiveFormula* const> formulas) {
  std::vector<StateSet> acc{StateSet{}};
  for (const auto* f : formulas) {
    acc = cross(acc, f->minimal_models());
    if (acc.empty()) break;
  }
  return acc;
}

void PositiveFormula::collect_states(std::vector<StateId>& out) const {
  if (kind_ == Kind::Atom) out.push_back(state_);
  for (const auto& a : args_) a.collect_states(out);
}

std::string PositiveFormula::to_string(const std::vector<std::string>& names) const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: return state_ < names.size() ? names[state_] : "q" + std::to_string(state_);
    case Kind::And:
    case Kind::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += kind_ == Kind::And ? " & " : " | ";
        out += args_[i].to_string(names);
      }
      return out + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Automata

AutomatonBase::AutomatonBase(AlphabetPtr alphabet, ChannelMask mask, StateId initial,
                             std::vector<bool> accepting, std::vector<std::string> names)
    : alphabet_(std::move(alphabet)),
      restricted_((alphabet_ ? *alphabet_ : throw InputError("automaton: missing alphabet")), std::move(mask)),
      initial_(initial),
      accepting_(std::move(accepting)),
      names_(std::move(names)) {
  if (accepting_.empty()) throw InputError("automaton: at least one state is required");
  if (initial_ >= accepting_.size()) throw InputError("automaton: initial state out of range");
  if (names_.empty()) {
    for (std::size_t q = 0; q < accepting_.size(); ++q) names_.push_back("q" + std::to_string(q));
  } else if (names_.size() != accepting_.size()) {
    throw InputError("automaton: state name count does not match state count");
  }
}

bool AutomatonBase::has_accepting_state() const {
  return std::find(accepting_.begin(), accepting_.end(), true) != accepting_.end();
}

Dfa::Dfa(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<StateId> table,
         std::vector<bool> accepting, std::vector<std::string> names)
    : AutomatonBase(std::move(alphabet), std::move(mask), initial, std::move(accepting), std::move(names)),
      table_(std::move(table)) {
  if (table_.size() != num_states() * restricted_.size())
    throw InputError("dfa: transition table is not total");
  for (auto t : table_)
    if (t >= num_states()) throw InputError("dfa: transition target out of range");
}

bool Dfa::operator==(const Dfa& o) const {
  return same_alphabet(alphabet_, o.alphabet_) && mask() == o.mask() && initial_ == o.initial_ &&
         accepting_ == o.accepting_ && names_ == o.names_ && table_ == o.table_;
}

Nfa::Nfa(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<StateSet> successors,
         std::vector<bool> accepting, std::vector<std::string> names)
    : AutomatonBase(std::move(alphabet), std::move(mask), initial, std::move(accepting), std::move(names)),
      successors_(std::move(successors)) {
  if (successors_.size() != num_states() * restricted_.size())
    throw InputError("nfa: transition table has wrong size");
  for (auto& s : successors_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto t : s)
      if (t >= num_states()) throw InputError("nfa: transition target out of range");
  }
}

bool Nfa::operator==(const Nfa& o) const {
  return same_alphabet(alphabet_, o.alphabet_) && mask() == o.mask() && initial_ == o.initial_ &&
         accepting_ == o.accepting_ && names_ == o.names_ && successors_ == o.successors_;
}

Afa::Afa(AlphabetPtr alphabet, ChannelMask mask, StateId initial, std::vector<PositiveFormula> transitions,
         std::vector<bool> accepting, std::vector<std::string> names)
    : AutomatonBase(std::move(alphabet), std::move(mask), initial, std::move(accepting), std::move(names)),
      transitions_(std::move(transitions)) {
  if (transitions_.size() != num_states() * restricted_.size())
    throw InputError("afa: transition table has wrong size");
  std::vector<StateId> mentioned;
  for (const auto& f : transitions_) f.collect_states(mentioned);
  for (auto q : mentioned)
    if (q >= num_states()) throw InputError("afa: formula mentions state out of range");
}

bool Afa::operator==(const Afa& o) const {
  return same_alphabet(alphabet_, o.alphabet_) && mask() == o.mask() && initial_ == o.initial_ &&
         accepting_ == o.accepting_ && names_ == o.names_ && transitions_ == o.transitions_;
}

const AutomatonBase& base_of(const GoalAutomaton& goal) {
  return std::visit([](const auto& a) -> const AutomatonBase& { return a; }, goal);
}

std::string kind_name(const GoalAutomaton& goal) {
  switch (goal.index()) {
    case 0: return "dfa";
    case 1: return "nfa";
    default: return "afa";
  }
}

// ---------------------------------------------------------------------------
// Words and acceptance

UltimatelyPeriodicWord::UltimatelyPeriodicWord(std::vector<Letter> u, std::vector<Letter> v)
    : prefix(std::move(u)), period(std::move(v)) {
  if (period.empty()) throw InputError("lasso: period must be nonempty");
}

const Letter& UltimatelyPeriodicWord::at(std::size_t position) const {
  if (position < prefix.size()) return prefix[position];
  return period[(position - prefix.size()) % period.size()];
}

UltimatelyPeriodicWord UltimatelyPeriodicWord::unrolled() const {
  auto u = prefix;
  u.insert(u.end(), period.begin(), period.end());
  return {std::move(u), period};
}

namespace {

void check_word(const AutomatonBase& a, std::span<const Letter> word) {
  for (const auto& l : word)
    if (!a.alphabet()->valid(l)) throw InputError("word letter does not match the automaton's alphabet");
}

StateSet nfa_step(const Nfa& nfa, const StateSet& current, LetterIndex r) {
  StateSet next;
  for (auto q : current) {
    auto succ = nfa.successors_restricted(q, r);
    next.insert(next.end(), succ.begin(), succ.end());
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

bool any_accepting(const AutomatonBase& a, const StateSet& set) {
  return std::any_of(set.begin(), set.end(), [&](StateId q) { return a.accepting(q); });
}

bool all_accepting(const AutomatonBase& a, const StateSet& set) {
  return std::all_of(set.begin(), set.end(), [&](StateId q) { return a.accepting(q); });
}

/// Successor obligation sets of an obligation set under one restricted letter.
std::vector<StateSet> obligation_successors(const Afa& afa, const StateSet& obligations, LetterIndex r) {
  std::vector<const PositiveFormula*> parts;
  parts.reserve(obligations.size());
  for (auto q : obligations) parts.push_back(&afa.transition_restricted(q, r));
  return conjunction_models(parts);
}

/// Generic lasso scan: `step` advances a configuration, `good` tests acceptance.
template <class Config, class Step, class Good>
bool scan_lasso(const UltimatelyPeriodicWord& word, Config config, Step step, Good good) {
  std::set<std::pair<Config, std::size_t>> seen;
  std::size_t pos = 0;
  const std::size_t wrap = word.lasso_length();
  while (true) {
    if (good(config)) return true;
    if (!seen.emplace(config, pos).second) return false;
    config = step(config, word.at(pos));
    pos = pos + 1 < wrap ? pos + 1 : word.prefix.size();
  }
}

}  // namespace

bool accepts(const Dfa& dfa, std::span<const Letter> word) {
  check_word(dfa, word);
  StateId q = dfa.initial();
  for (const auto& l : word) q = dfa.step(q, l);
  return dfa.accepting(q);
}

bool accepts(const Nfa& nfa, std::span<const Letter> word) {
  check_word(nfa, word);
  StateSet current{nfa.initial()};
  for (const auto& l : word) {
    current = nfa_step(nfa, current, nfa.restricted().index_of(l));
    if (current.empty()) return false;
  }
  return any_accepting(nfa, current);
}

bool accepts(const Afa& afa, std::span<const Letter> word) {
  check_word(afa, word);
  std::vector<bool> holds = afa.accepting_states();
  for (std::size_t i = word.size(); i-- > 0;) {
    std::vector<bool> before(afa.num_states());
    for (StateId q = 0; q < afa.num_states(); ++q) before[q] = afa.transition(q, word[i]).satisfied_by(holds);
    holds = std::move(before);
  }
  return holds[afa.initial()];
}

bool accepts(const GoalAutomaton& goal, std::span<const Letter> word) {
  return std::visit([&](const auto& a) { return accepts(a, word); }, goal);
}

bool accepts_prefix(const GoalAutomaton& goal, const UltimatelyPeriodicWord& word) {
  const auto& base = base_of(goal);
  check_word(base, word.prefix);
  check_word(base, word.period);
  if (word.period.empty()) throw InputError("lasso: period must be nonempty");
  if (!std::holds_alternative<Afa>(goal) && !base.has_accepting_state()) return false;

  if (const auto* dfa = std::get_if<Dfa>(&goal)) {
    return scan_lasso(
        word, dfa->initial(), [&](StateId q, const Letter& l) { return dfa->step(q, l); },
        [&](StateId q) { return dfa->accepting(q); });
  }
  if (const auto* nfa = std::get_if<Nfa>(&goal)) {
    return scan_lasso(
        word, StateSet{nfa->initial()},
        [&](const StateSet& s, const Letter& l) { return nfa_step(*nfa, s, nfa->restricted().index_of(l)); },
        [&](const StateSet& s) { return any_accepting(*nfa, s); });
  }
  const auto& afa = std::get<Afa>(goal);
  using Config = std::vector<StateSet>;
  return scan_lasso(
      word, Config{StateSet{afa.initial()}},
      [&](const Config& c, const Letter& l) {
        const auto r = afa.restricted().index_of(l);
        Config next;
        for (const auto& t : c) {
          auto succ = obligation_successors(afa, t, r);
          next.insert(next.end(), succ.begin(), succ.end());
        }
        return minimize_antichain(std::move(next));
      },
      [&](const Config& c) {
        return std::any_of(c.begin(), c.end(), [&](const StateSet& t) { return all_accepting(afa, t); });
      });
}

// ---------------------------------------------------------------------------
// Conversions

namespace {

std::string set_name(const StateSet& set, const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += names[set[i]];
  }
  return out + "}";
}

/// Interns state sets in discovery order.
class SetInterner {
 public:
  std::pair<StateId, bool> intern(const StateSet& s) {
    auto [it, inserted] = ids_.emplace(s, static_cast<StateId>(sets_.size()));
    if (inserted) sets_.push_back(s);
    return {it->second, inserted};
  }
  const StateSet& at(StateId id) const { return sets_[id]; }
  std::size_t size() const { return sets_.size(); }

 private:
  std::map<StateSet, StateId> ids_;
  std::vector<StateSet> sets_;
};

}  // namespace

Dfa determinize(const Nfa& nfa) {
  const auto letters = nfa.restricted().size();
  SetInterner subsets;
  std::vector<StateId> table;
  subsets.intern(StateSet{nfa.initial()});
  for (StateId id = 0; id < subsets.size(); ++id) {
    for (LetterIndex r = 0; r < letters; ++r) {
      auto next = nfa_step(nfa, subsets.at(id), r);
      table.push_back(subsets.intern(next).first);
    }
  }
  std::vector<bool> accepting;
  std::vector<std::string> names;
  for (StateId id = 0; id < subsets.size(); ++id) {
    accepting.push_back(any_accepting(nfa, subsets.at(id)));
    names.push_back(set_name(subsets.at(id), nfa.state_names()));
  }
  return Dfa(nfa.alphabet(), nfa.mask(), 0, std::move(table), std::move(accepting), std::move(names));
}

Nfa afa_to_nfa(const Afa& afa) {
  const auto letters = afa.restricted().size();
  SetInterner obligations;
  std::vector<StateSet> table;
  obligations.intern(StateSet{afa.initial()});
  for (StateId id = 0; id < obligations.size(); ++id) {
    for (LetterIndex r = 0; r < letters; ++r) {
      StateSet targets;
      for (const auto& model : obligation_successors(afa, obligations.at(id), r))
        targets.push_back(obligations.intern(model).first);
      table.push_back(std::move(targets));
    }
  }
  std::vector<bool> accepting;
  std::vector<std::string> names;
  for (StateId id = 0; id < obligations.size(); ++id) {
    accepting.push_back(all_accepting(afa, obligations.at(id)));
    names.push_back(set_name(obligations.at(id), afa.state_names()));
  }
  return Nfa(afa.alphabet(), afa.mask(), 0, std::move(table), std::move(accepting), std::move(names));
}

Dfa collapse_dead_states(const Dfa& dfa) {
  const auto n = dfa.num_states();
  const auto letters = dfa.restricted().size();
  std::vector<std::vector<StateId>> preds(n);
  for (StateId q = 0; q < n; ++q)
    for (LetterIndex r = 0; r < letters; ++r) preds[dfa.step_restricted(q, r)].push_back(q);
  std::vector<bool> live(n, false);
  std::deque<StateId> work;
  for (StateId q = 0; q < n; ++q)
    if (dfa.accepting(q)) {
      live[q] = true;
      work.push_back(q);
    }
  while (!work.empty()) {
    auto q = work.front();
    work.pop_front();
    for (auto p : preds[q])
      if (!live[p]) {
        live[p] = true;
        work.push_back(p);
      }
  }
  if (std::all_of(live.begin(), live.end(), [](bool b) { return b; })) return dfa;

  // Rebuild from the initial state, sending every dead state to one sink.
  std::vector<StateId> id(n, kNone);
  std::vector<StateId> order;
  StateId sink = kNone;
  auto map_state = [&](StateId q) -> StateId {
    if (!live[q]) {
      if (sink == kNone) {
        sink = static_cast<StateId>(order.size());
        order.push_back(kNone);
      }
      return sink;
    }
    if (id[q] == kNone) {
      id[q] = static_cast<StateId>(order.size());
      order.push_back(q);
    }
    return id[q];
  };
  map_state(dfa.initial());
  std::vector<StateId> table;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (LetterIndex r = 0; r < letters; ++r)
      table.push_back(order[i] == kNone ? sink : map_state(dfa.step_restricted(order[i], r)));
  }
  std::vector<bool> accepting;
  std::vector<std::string> names;
  for (auto q : order) {
    accepting.push_back(q != kNone && dfa.accepting(q));
    names.push_back(q == kNone ? "dead" : dfa.state_name(q));
  }
  return Dfa(dfa.alphabet(), dfa.mask(), 0, std::move(table), std::move(accepting), std::move(names));
}

Dfa afa_to_dfa(const Afa& afa) { return collapse_dead_states(determinize(afa_to_nfa(afa))); }

Nfa as_nfa(const Dfa& dfa) {
  std::vector<StateSet> table;
  table.reserve(dfa.table().size());
  for (auto t : dfa.table()) table.push_back(StateSet{t});
  return Nfa(dfa.alphabet(), dfa.mask(), dfa.initial(), std::move(table), dfa.accepting_states(),
             dfa.state_names());
}

Afa as_afa(const Nfa& nfa) {
  std::vector<PositiveFormula> table;
  table.reserve(nfa.table().size());
  for (const auto& succ : nfa.table()) {
    std::vector<PositiveFormula> atoms;
    for (auto t : succ) atoms.push_back(PositiveFormula::atom(t));
    table.push_back(PositiveFormula::disj(std::move(atoms)));
  }
  return Afa(nfa.alphabet(), nfa.mask(), nfa.initial(), std::move(table), nfa.accepting_states(),
             nfa.state_names());
}

Dfa to_dfa(const GoalAutomaton& goal) {
  switch (goal.index()) {
    case 0: return std::get<Dfa>(goal);
    case 1: return determinize(std::get<Nfa>(goal));
    default: return afa_to_dfa(std::get<Afa>(goal));
  }
}

}  // namespace ibg
