#include "ibg/game.hpp"

#include <bit>
#include <map>

namespace ibg {

AgentSet::AgentSet(std::initializer_list<std::uint32_t> agents) {
  for (auto a : agents) insert(a);
}

AgentSet AgentSet::all(std::size_t num_agents) {
  return AgentSet(num_agents >= 32 ? ~0U : (1U << num_agents) - 1U);
}

std::size_t AgentSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<std::uint32_t> AgentSet::members() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 0; a < 32; ++a)
    if (contains(a)) out.push_back(a);
  return out;
}

std::string AgentSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto a : members()) {
    if (!first) out += ',';
    out += std::to_string(a);
    first = false;
  }
  return out + "}";
}

Ibg::Ibg(AlphabetPtr alphabet, std::vector<std::string> agent_names, std::vector<GoalAutomaton> goals)
    : alphabet_(std::move(alphabet)), names_(std::move(agent_names)), goals_(std::move(goals)) {
  if (!alphabet_) throw InputError("game: missing alphabet");
  if (goals_.size() != alphabet_->num_channels())
    throw InputError("game: one goal per agent channel is required");
  if (goals_.size() > kMaxAgents) throw InputError("game: too many agents");
  if (names_.empty())
    for (std::size_t i = 0; i < goals_.size(); ++i) names_.push_back("agent" + std::to_string(i));
  if (names_.size() != goals_.size()) throw InputError("game: agent name count mismatch");
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    if (!same_alphabet(base_of(goals_[i]).alphabet(), alphabet_))
      throw InputError("game: goal of agent " + std::to_string(i) + " uses a different alphabet");
  }
}

void Ibg::check_agents(AgentSet winners) const {
  for (auto a : winners.members())
    if (a >= num_agents()) throw InputError("unknown agent " + std::to_string(a) + " in winning set");
}

bool Ibg::operator==(const Ibg& o) const {
  return same_alphabet(alphabet_, o.alphabet_) && names_ == o.names_ && goals_ == o.goals_;
}

MooreMachine::MooreMachine(AlphabetPtr alphabet, std::uint32_t owner, ChannelMask mask, StateId initial,
                           std::vector<StateId> table, std::vector<std::uint32_t> output,
                           std::vector<std::string> names)
    : alphabet_(std::move(alphabet)),
      owner_(owner),
      restricted_((alphabet_ ? *alphabet_ : throw InputError("machine: missing alphabet")), std::move(mask)),
      initial_(initial),
      table_(std::move(table)),
      output_(std::move(output)),
      names_(std::move(names)) {
  if (owner_ >= alphabet_->num_channels()) throw InputError("machine: owner is not an agent");
  if (output_.empty()) throw InputError("machine: at least one state is required");
  if (initial_ >= output_.size()) throw InputError("machine: initial state out of range");
  if (table_.size() != output_.size() * restricted_.size())
    throw InputError("machine: transition table is not total");
  for (auto t : table_)
    if (t >= output_.size()) throw InputError("machine: transition target out of range");
  for (auto o : output_)
    if (o >= alphabet_->channel_size(owner_)) throw InputError("machine: output symbol out of range");
  if (names_.empty()) {
    for (std::size_t s = 0; s < output_.size(); ++s) names_.push_back("s" + std::to_string(s));
  } else if (names_.size() != output_.size()) {
    throw InputError("machine: state name count mismatch");
  }
}

bool MooreMachine::operator==(const MooreMachine& o) const {
  return same_alphabet(alphabet_, o.alphabet_) && owner_ == o.owner_ && mask() == o.mask() &&
         initial_ == o.initial_ && table_ == o.table_ && output_ == o.output_ && names_ == o.names_;
}

void check_profile(const Ibg& game, const StrategyProfile& profile) {
  if (profile.machines.size() != game.num_agents())
    throw InputError("profile: expected " + std::to_string(game.num_agents()) + " machines, got " +
                     std::to_string(profile.machines.size()));
  for (std::size_t i = 0; i < profile.machines.size(); ++i) {
    const auto& m = profile.machines[i];
    if (m.owner() != i) throw InputError("profile: machine " + std::to_string(i) + " has the wrong owner");
    if (!same_alphabet(m.alphabet(), game.alphabet()))
      throw InputError("profile: machine " + std::to_string(i) + " uses a different alphabet");
  }
}

GlobalMoore product_profile(const StrategyProfile& profile) {
  if (profile.machines.empty()) throw InputError("profile: no machines");
  const auto& alphabet = profile.machines.front().alphabet();
  const auto k = profile.machines.size();
  if (k != alphabet->num_channels()) throw InputError("profile: machine count does not match the alphabet");
  for (std::size_t i = 0; i < k; ++i) {
    if (!same_alphabet(profile.machines[i].alphabet(), alphabet))
      throw InputError("profile: machines use different alphabets");
    if (profile.machines[i].owner() != i) throw InputError("profile: machine order does not match owners");
  }

  GlobalMoore g;
  g.alphabet_ = alphabet;
  g.letters_ = alphabet->size();
  std::vector<std::vector<LetterIndex>> projections;
  for (const auto& m : profile.machines) projections.push_back(m.restricted().projection_table(*alphabet));

  std::map<std::vector<StateId>, StateId> ids;
  auto intern = [&](std::vector<StateId> tuple) {
    auto [it, inserted] = ids.emplace(tuple, static_cast<StateId>(g.components_.size()));
    if (inserted) g.components_.push_back(std::move(tuple));
    return it->second;
  };
  std::vector<StateId> start;
  for (const auto& m : profile.machines) start.push_back(m.initial());
  intern(std::move(start));
  std::vector<StateId> tuple(k);
  for (StateId s = 0; s < g.components_.size(); ++s) {
    Letter out;
    for (std::size_t i = 0; i < k; ++i) out.picks.push_back(profile.machines[i].output(g.components_[s][i]));
    g.outputs_.push_back(alphabet->index(out));
    for (LetterIndex a = 0; a < g.letters_; ++a) {
      for (std::size_t i = 0; i < k; ++i)
        tuple[i] = profile.machines[i].step_restricted(g.components_[s][i], projections[i][a]);
      g.next_.push_back(intern(tuple));
    }
  }
  return g;
}

UltimatelyPeriodicWord primary_trace(const GlobalMoore& global) {
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> first_visit(global.num_states(), unseen);
  std::vector<Letter> letters;
  StateId s = global.initial();
  while (first_visit[s] == unseen) {
    first_visit[s] = letters.size();
    const auto out = global.output(s);
    letters.push_back(global.alphabet()->letter(out));
    s = global.next(s, out);
  }
  const auto loop = first_visit[s];
  std::vector<Letter> prefix(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(loop));
  std::vector<Letter> period(letters.begin() + static_cast<std::ptrdiff_t>(loop), letters.end());
  return {std::move(prefix), std::move(period)};
}

AgentSet winning_set(const UltimatelyPeriodicWord& trace, const Ibg& game) {
  AgentSet out;
  for (std::uint32_t i = 0; i < game.num_agents(); ++i)
    if (accepts_prefix(game.goal(i), trace)) out.insert(i);
  return out;
}

}  // namespace ibg
