#include "ibg/verification.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace ibg {

QueryGoal query_goal(const GoalAutomaton& goal) {
  if (const auto* d = std::get_if<Dfa>(&goal)) return *d;
  if (const auto* n = std::get_if<Nfa>(&goal)) return *n;
  return afa_to_nfa(std::get<Afa>(goal));
}

namespace {

/// Uniform successor access for the two goal kinds.
class GoalView {
 public:
  GoalView(const QueryGoal& goal, const ProductAlphabet& alphabet) : goal_(goal) {
    const auto& base = std::visit([](const auto& a) -> const AutomatonBase& { return a; }, goal);
    base_ = &base;
    projection_ = base.restricted().projection_table(alphabet);
  }

  const AutomatonBase& base() const { return *base_; }

  void successors(StateId q, LetterIndex full, std::vector<StateId>& out) const {
    out.clear();
    const auto r = projection_[full];
    if (const auto* d = std::get_if<Dfa>(&goal_)) {
      out.push_back(d->step_restricted(q, r));
    } else {
      const auto succ = std::get<Nfa>(goal_).successors_restricted(q, r);
      out.assign(succ.begin(), succ.end());
    }
  }

 private:
  const QueryGoal& goal_;
  const AutomatonBase* base_ = nullptr;
  std::vector<LetterIndex> projection_;
};

/// BFS over the primary product graph until `stop(q, s)` holds.
struct PrimarySearch {
  std::vector<std::pair<StateId, StateId>> vertices;
  std::vector<std::uint32_t> parent;
  std::optional<std::uint32_t> hit;

  std::vector<PathStep> path_to(std::uint32_t v, const GlobalMoore& global) const {
    std::vector<PathStep> path;
    for (; parent[v] != kNone; v = parent[v]) {
      const auto s = vertices[parent[v]].second;
      path.push_back({global.output(s), vertices[v].first, vertices[v].second});
    }
    std::reverse(path.begin(), path.end());
    return path;
  }
};

template <class Stop>
PrimarySearch search_primary(const GoalView& goal, const GlobalMoore& global, Stop stop) {
  PrimarySearch out;
  std::map<std::pair<StateId, StateId>, std::uint32_t> ids;
  auto intern = [&](StateId q, StateId s, std::uint32_t from) {
    auto [it, inserted] = ids.emplace(std::pair{q, s}, static_cast<std::uint32_t>(out.vertices.size()));
    if (inserted) {
      out.vertices.emplace_back(q, s);
      out.parent.push_back(from);
    }
    return inserted;
  };
  intern(goal.base().initial(), global.initial(), kNone);
  std::vector<StateId> succ;
  for (std::uint32_t v = 0; v < out.vertices.size(); ++v) {
    const auto [q, s] = out.vertices[v];
    if (stop(q, s)) {
      out.hit = v;
      return out;
    }
    const auto a = global.output(s);
    const auto next_s = global.next(s, a);
    goal.successors(q, a, succ);
    for (auto next_q : succ) intern(next_q, next_s, v);
  }
  return out;
}

}  // namespace

std::optional<std::uint32_t> ProfileDeviationGame::find(StateId q, StateId s) const {
  const auto it = index.find({q, s});
  if (it == index.end()) return std::nullopt;
  return it->second;
}

AgentQueryResult i_query(const QueryGoal& goal, const GlobalMoore& global, std::uint32_t agent) {
  const GoalView view(goal, *global.alphabet());
  const auto search =
      search_primary(view, global, [&](StateId q, StateId) { return view.base().accepting(q); });
  AgentQueryResult r;
  r.agent = agent;
  r.winner = true;
  r.graph_vertices = search.vertices.size();
  if (search.hit) {
    r.passed = true;
    r.path = search.path_to(*search.hit, global);
  }
  return r;
}

ProfileDeviationGame build_profile_deviation_game(const QueryGoal& goal, const GlobalMoore& global,
                                                  std::uint32_t agent) {
  const auto& alphabet = *global.alphabet();
  if (agent >= alphabet.num_channels()) throw InputError("deviation game: unknown agent");
  const GoalView view(goal, alphabet);
  const auto& base = view.base();

  ProfileDeviationGame g;
  g.agent = agent;
  auto& ids = g.index;
  auto intern = [&](StateId q, StateId s) {
    auto [it, inserted] = ids.emplace(std::pair{q, s}, static_cast<std::uint32_t>(g.positions.size()));
    if (inserted) g.positions.emplace_back(q, s);
    return it->second;
  };
  intern(base.initial(), global.initial());

  // Agent-1 moves keep every channel of γ(s) except channel j.
  std::vector<std::vector<std::pair<LetterIndex, std::uint32_t>>> moves_of;  // per agent-0 vertex
  std::vector<StateId> succ;
  for (std::uint32_t v = 0; v < g.positions.size(); ++v) {
    moves_of.emplace_back();
    const auto [q, s] = g.positions[v];
    if (base.accepting(q)) continue;
    auto letter = alphabet.letter(global.output(s));
    for (std::uint32_t x = 0; x < alphabet.channel_size(agent); ++x) {
      letter.picks[agent] = x;
      const auto beta = alphabet.index(letter);
      const auto next_s = global.next(s, beta);
      view.successors(q, beta, succ);
      for (auto next_q : succ) {
        const auto t = intern(next_q, next_s);
        moves_of[v].emplace_back(beta, t);
      }
    }
  }

  const auto n0 = static_cast<std::uint32_t>(g.positions.size());
  Arena::Builder builder;
  for (std::uint32_t v = 0; v < n0; ++v) builder.add_vertex(Player::Zero);
  g.choice.assign(n0, kNone);
  for (std::uint32_t v = 0; v < n0; ++v) {
    if (base.accepting(g.positions[v].first)) continue;
    const auto c = builder.add_vertex(Player::One);
    g.choice[v] = c;
    builder.add_edge(v, c);
    for (auto [beta, t] : moves_of[v]) builder.add_edge(c, t);
    std::sort(moves_of[v].begin(), moves_of[v].end());
    g.moves.push_back(std::move(moves_of[v]));
  }
  g.arena = std::move(builder).build();
  g.safe.assign(g.arena.size(), true);
  for (std::uint32_t v = 0; v < n0; ++v) g.safe[v] = !base.accepting(g.positions[v].first);
  g.solution = solve_safety(g.arena, g.safe);
  return g;
}

AgentQueryResult j_query(const QueryGoal& goal, const GlobalMoore& global, std::uint32_t agent) {
  const GoalView view(goal, *global.alphabet());
  AgentQueryResult r;
  r.agent = agent;

  const auto primary =
      search_primary(view, global, [&](StateId q, StateId) { return view.base().accepting(q); });
  r.graph_vertices = primary.vertices.size();
  if (primary.hit) {
    r.violation = Violation::PrimaryTrace;
    r.path = primary.path_to(*primary.hit, global);
    return r;
  }

  const auto g = build_profile_deviation_game(goal, global, agent);
  r.game_vertices = g.arena.size();
  const auto entry = search_primary(view, global, [&](StateId q, StateId s) {
    const auto v = g.find(q, s);
    return v && g.solution.winning1(*v);
  });
  if (!entry.hit) {
    r.passed = true;
    return r;
  }
  r.violation = Violation::DeviantTrace;
  r.path = entry.path_to(*entry.hit, global);

  // Follow agent 1's attractor strategy down to F^j.
  const auto n0 = static_cast<std::uint32_t>(g.positions.size());
  auto [q, s] = entry.vertices[*entry.hit];
  auto v = *g.find(q, s);
  while (!view.base().accepting(g.positions[v].first)) {
    const auto c = g.choice[v];
    const auto target = g.solution.strategy1[c];
    const auto& moves = g.moves[c - n0];
    const auto move = std::find_if(moves.begin(), moves.end(), [&](const auto& m) { return m.second == target; });
    r.escape.push_back({move->first, g.positions[target].first, g.positions[target].second});
    v = target;
  }
  return r;
}

VerificationReport verify(const Ibg& game, AgentSet winners, const StrategyProfile& profile,
                          ExecutionPolicy policy) {
  game.check_agents(winners);
  check_profile(game, profile);
  const auto global = product_profile(profile);
  const auto k = game.num_agents();

  VerificationReport report;
  report.winners = winners;
  report.profile_states = global.num_states();
  report.agents.resize(k);
  for_each_index(policy, k, [&](std::size_t i) {
    const auto agent = static_cast<std::uint32_t>(i);
    const auto goal = query_goal(game.goal(i));
    report.agents[i] = winners.contains(agent) ? i_query(goal, global, agent) : j_query(goal, global, agent);
  });
  report.is_ne = std::all_of(report.agents.begin(), report.agents.end(),
                             [](const AgentQueryResult& a) { return a.passed; });
  return report;
}

}  // namespace ibg
