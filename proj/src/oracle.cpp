#include "ibg/oracle.hpp"

#include <deque>
#include <limits>
#include <map>
#include <set>

namespace ibg {

namespace {

bool holds(const PositiveFormula& f, std::uint64_t set) {
  switch (f.kind()) {
    case PositiveFormula::Kind::True:
      return true;
    case PositiveFormula::Kind::False:
      return false;
    case PositiveFormula::Kind::Atom:
      return (set >> f.state()) & 1U;
    case PositiveFormula::Kind::And:
      for (const auto& a : f.args())
        if (!holds(a, set)) return false;
      return true;
    case PositiveFormula::Kind::Or:
      for (const auto& a : f.args())
        if (holds(a, set)) return true;
      return false;
  }
  return false;
}

bool test_bit(const GoalEvaluator::Config& c, std::uint64_t i) { return (c[i / 64] >> (i % 64)) & 1U; }
void set_bit(GoalEvaluator::Config& c, std::uint64_t i) { c[i / 64] |= std::uint64_t{1} << (i % 64); }

}  // namespace

GoalEvaluator::GoalEvaluator(GoalAutomaton goal) : goal_(std::move(goal)), states_(base_of(goal_).num_states()) {
  if (std::holds_alternative<Nfa>(goal_) && states_ > 64)
    throw OracleOverflow("oracle: NFA goal with more than 64 states");
  if (std::holds_alternative<Afa>(goal_) && states_ > 16)
    throw OracleOverflow("oracle: AFA goal with more than 16 states");
  const auto& base = base_of(goal_);
  if (!std::holds_alternative<Dfa>(goal_))
    for (StateId q = 0; q < states_; ++q)
      if (base.accepting(q)) final_mask_ |= std::uint64_t{1} << q;
}

GoalEvaluator::Config GoalEvaluator::initial() const {
  const auto q0 = base_of(goal_).initial();
  if (std::holds_alternative<Dfa>(goal_)) return {q0};
  if (std::holds_alternative<Nfa>(goal_)) return {std::uint64_t{1} << q0};
  // D_0 = { S : q0 ∈ S }
  const std::uint64_t subsets = std::uint64_t{1} << states_;
  Config c((subsets + 63) / 64, 0);
  for (std::uint64_t s = 0; s < subsets; ++s)
    if ((s >> q0) & 1U) set_bit(c, s);
  return c;
}

GoalEvaluator::Config GoalEvaluator::step(const Config& c, const Letter& letter) const {
  if (const auto* d = std::get_if<Dfa>(&goal_)) return {d->step(static_cast<StateId>(c[0]), letter)};
  if (const auto* n = std::get_if<Nfa>(&goal_)) {
    std::uint64_t next = 0;
    for (StateId q = 0; q < states_; ++q)
      if ((c[0] >> q) & 1U)
        for (auto t : n->successors(q, letter)) next |= std::uint64_t{1} << t;
    return {next};
  }
  const auto& afa = std::get<Afa>(goal_);
  const std::uint64_t subsets = std::uint64_t{1} << states_;
  Config next(c.size(), 0);
  for (std::uint64_t s = 0; s < subsets; ++s) {
    std::uint64_t image = 0;  // B_α(S)
    for (StateId q = 0; q < states_; ++q)
      if (holds(afa.transition(q, letter), s)) image |= std::uint64_t{1} << q;
    if (test_bit(c, image)) set_bit(next, s);
  }
  return next;
}

bool GoalEvaluator::accepting(const Config& c) const {
  if (const auto* d = std::get_if<Dfa>(&goal_)) return d->accepting(static_cast<StateId>(c[0]));
  if (std::holds_alternative<Nfa>(goal_)) return (c[0] & final_mask_) != 0;
  return test_bit(c, final_mask_);
}

namespace {

using Tuple = std::vector<StateId>;

Letter outputs(const StrategyProfile& p, const Tuple& s) {
  Letter l;
  for (std::size_t i = 0; i < p.machines.size(); ++i) l.picks.push_back(p.machines[i].output(s[i]));
  return l;
}

Tuple advance(const StrategyProfile& p, const Tuple& s, const Letter& l) {
  Tuple t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) t[i] = p.machines[i].step(s[i], l);
  return t;
}

void charge(std::size_t& used, const OracleConfig& config) {
  if (++used > config.max_states) throw OracleOverflow("oracle: state budget exceeded");
}

}  // namespace

bool oracle_verify(const Ibg& game, AgentSet winners, const StrategyProfile& profile, const OracleConfig& config) {
  game.check_agents(winners);
  check_profile(game, profile);
  const auto k = game.num_agents();
  std::size_t used = 0;

  // Primary trace by stepping the k machines until their tuple repeats.
  std::vector<Letter> letters;
  std::map<Tuple, std::size_t> seen;
  Tuple s;
  for (const auto& m : profile.machines) s.push_back(m.initial());
  while (!seen.contains(s)) {
    charge(used, config);
    seen.emplace(s, letters.size());
    letters.push_back(outputs(profile, s));
    s = advance(profile, s, letters.back());
  }
  const auto loop_start = seen.at(s);
  const auto length = letters.size();

  // Winning set: some prefix accepted, scanning (configuration, position) until it repeats.
  for (std::uint32_t i = 0; i < k; ++i) {
    const GoalEvaluator eval(game.goal(i));
    std::set<std::pair<GoalEvaluator::Config, std::size_t>> visited;
    auto c = eval.initial();
    std::size_t pos = 0;
    bool won = false;
    while (visited.emplace(c, pos).second) {
      charge(used, config);
      if (eval.accepting(c)) {
        won = true;
        break;
      }
      c = eval.step(c, letters[pos]);
      pos = pos + 1 < length ? pos + 1 : loop_start;
    }
    if (won != winners.contains(i)) return false;
  }

  // No losing agent reaches its goal on a trace where it changed its own symbol.
  const auto& alphabet = *game.alphabet();
  for (std::uint32_t j = 0; j < k; ++j) {
    if (winners.contains(j)) continue;
    const GoalEvaluator eval(game.goal(j));
    using Node = std::tuple<GoalEvaluator::Config, Tuple, bool>;
    std::set<Node> visited;
    std::deque<Node> queue;
    Tuple s0;
    for (const auto& m : profile.machines) s0.push_back(m.initial());
    queue.emplace_back(eval.initial(), s0, false);
    visited.insert(queue.back());
    while (!queue.empty()) {
      auto [c, tuple, deviated] = std::move(queue.front());
      queue.pop_front();
      auto letter = outputs(profile, tuple);
      const auto planned = letter.picks[j];
      for (std::uint32_t x = 0; x < alphabet.channel_size(j); ++x) {
        letter.picks[j] = x;
        const bool dev = deviated || x != planned;
        auto next_c = eval.step(c, letter);
        if (dev && eval.accepting(next_c)) return false;
        Node node{std::move(next_c), advance(profile, tuple, letter), dev};
        if (visited.insert(node).second) {
          charge(used, config);
          queue.push_back(std::move(node));
        }
      }
    }
  }
  return true;
}

namespace {

struct MachineShape {
  std::size_t states;
  std::vector<StateId> table;
  std::vector<std::string> names;
};

MachineShape shape(const Ibg& game, unsigned memory) {
  const auto& alphabet = *game.alphabet();
  const auto letters = alphabet.size();
  if (memory == 0) return {1, std::vector<StateId>(letters, 0), {"const"}};
  if (memory != 1) throw InputError("oracle: only memory 0 and 1 are supported");
  MachineShape m{letters + 1, {}, {"init"}};
  for (LetterIndex a = 0; a < letters; ++a) m.names.push_back("last" + alphabet.format(alphabet.letter(a)));
  for (std::size_t s = 0; s < m.states; ++s)
    for (LetterIndex a = 0; a < letters; ++a) m.table.push_back(static_cast<StateId>(a + 1));
  return m;
}

}  // namespace

std::size_t count_profiles(const Ibg& game, unsigned memory) {
  const auto m = shape(game, memory);
  std::size_t total = 1;
  constexpr auto cap = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < game.num_agents(); ++i)
    for (std::size_t s = 0; s < m.states; ++s) {
      const auto r = game.alphabet()->channel_size(i);
      total = total > cap / r ? cap : total * r;
    }
  return total;
}

EnumerationResult enumerate_profiles(const Ibg& game, unsigned memory, std::size_t budget,
                                     const std::function<bool(const StrategyProfile&)>& visit) {
  const auto m = shape(game, memory);
  const auto k = game.num_agents();
  const auto& alphabet_ptr = game.alphabet();
  std::vector<std::vector<std::uint32_t>> digits(k, std::vector<std::uint32_t>(m.states, 0));
  EnumerationResult result;
  while (true) {
    if (result.visited == budget) {
      result.truncated = true;
      return result;
    }
    StrategyProfile p;
    for (std::uint32_t i = 0; i < k; ++i)
      p.machines.emplace_back(alphabet_ptr, i, ChannelMask::full(k), 0, m.table, digits[i], m.names);
    ++result.visited;
    if (!visit(p)) return result;

    // Odometer step; agent k-1's last state is the least significant digit.
    bool carry = true;
    for (std::size_t i = k; i-- > 0 && carry;) {
      const auto radix = alphabet_ptr->channel_size(i);
      for (std::size_t s = m.states; s-- > 0 && carry;) {
        if (++digits[i][s] < radix) {
          carry = false;
        } else {
          digits[i][s] = 0;
        }
      }
    }
    if (carry) return result;
  }
}

OneSidedResult oracle_realizable_onesided(const Ibg& game, AgentSet winners, const OracleConfig& config) {
  game.check_agents(winners);
  OneSidedResult out;
  try {
    const auto e = enumerate_profiles(game, config.memory, config.max_profiles, [&](const StrategyProfile& p) {
      if (!oracle_verify(game, winners, p, config)) return true;
      out.witness = p;
      return false;
    });
    out.profiles_checked = e.visited;
    out.truncated = e.truncated;
  } catch (const OracleOverflow&) {
    out.truncated = true;
  }
  return out;
}

}  // namespace ibg
