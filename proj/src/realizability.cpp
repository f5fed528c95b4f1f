#include "ibg/realizability.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace ibg {

// ---------------------------------------------------------------------------
// Deviation games

DeviationGame build_deviation_game(const Ibg& game, std::uint32_t agent, const Dfa& goal) {
  const auto& alphabet = *game.alphabet();
  if (agent >= game.num_agents()) throw InputError("deviation game: unknown agent");
  if (!same_alphabet(goal.alphabet(), game.alphabet()))
    throw InputError("deviation game: goal uses a different alphabet");

  DeviationGame g{.agent = agent,
                  .num_goal_states = goal.num_states(),
                  .keys = RestrictedAlphabet(alphabet, goal.mask().with(agent))};
  g.key_of_letter = g.keys.projection_table(alphabet);

  const auto num_keys = g.keys.size();
  const auto key_agents = g.keys.mask().agents();
  Arena::Builder builder;
  for (StateId q = 0; q < goal.num_states(); ++q) builder.add_vertex(Player::Zero);
  g.choice_vertex.assign(goal.num_states() * num_keys, kNone);
  g.vertex_key.assign(goal.num_states(), kNone);
  for (StateId q = 0; q < goal.num_states(); ++q) {
    if (goal.accepting(q)) continue;
    for (LetterIndex key = 0; key < num_keys; ++key) {
      const auto v = builder.add_vertex(Player::One);
      g.choice_vertex[q * num_keys + key] = v;
      g.vertex_key.push_back(key);
      builder.add_edge(q, v);
    }
  }

  // Agent j may replace its own channel; every other channel of the key is fixed.
  Letter scratch{std::vector<std::uint32_t>(alphabet.num_channels(), 0)};
  const bool goal_reads_agent = goal.mask().contains(agent);
  for (StateId q = 0; q < goal.num_states(); ++q) {
    if (goal.accepting(q)) continue;
    for (LetterIndex key = 0; key < num_keys; ++key) {
      const auto v = g.choice_vertex[q * num_keys + key];
      const auto picks = g.keys.picks(key);
      for (std::size_t i = 0; i < key_agents.size(); ++i) scratch.picks[key_agents[i]] = picks[i];
      const auto choices = goal_reads_agent ? alphabet.channel_size(agent) : 1;
      for (std::uint32_t x = 0; x < choices; ++x) {
        if (goal_reads_agent) scratch.picks[agent] = x;
        builder.add_edge(v, goal.step(q, scratch));
      }
    }
  }

  g.arena = std::move(builder).build();
  g.safe.assign(g.arena.size(), true);
  for (StateId q = 0; q < goal.num_states(); ++q) g.safe[q] = !goal.accepting(q);
  g.solution = solve_safety(g.arena, g.safe);
  return g;
}

// ---------------------------------------------------------------------------
// Büchi product

std::size_t ProductBuchi::num_transitions() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

namespace {

ProductBuchi explore(const Ibg& game, AgentSet winners, std::span<const Dfa> goals,
                     std::span<const std::optional<DeviationGame>> games) {
  game.check_agents(winners);
  const auto k = game.num_agents();
  if (goals.size() != k) throw InputError("product: one DFA per agent is required");
  const auto& alphabet = *game.alphabet();
  const auto letters = alphabet.size();
  std::vector<std::vector<LetterIndex>> projections;
  for (const auto& d : goals) projections.push_back(d.restricted().projection_table(alphabet));
  std::vector<std::uint32_t> losers;
  for (std::uint32_t j = 0; j < k; ++j)
    if (!winners.contains(j)) losers.push_back(j);
  const bool refined = !games.empty();
  if (refined)
    for (auto j : losers)
      if (j >= games.size() || !games[j]) throw InputError("product: missing deviation game for a losing agent");

  ProductBuchi out;
  std::map<ProductState, std::uint32_t> ids;
  auto intern = [&](ProductState s) {
    auto [it, inserted] = ids.emplace(s, static_cast<std::uint32_t>(out.states.size()));
    if (inserted) {
      out.states.push_back(std::move(s));
      out.edges.emplace_back();
    }
    return it->second;
  };

  ProductState init;
  init.pending = winners;
  bool blocked = false;
  for (std::uint32_t i = 0; i < k; ++i) {
    init.goals.push_back(goals[i].initial());
    if (goals[i].accepting(goals[i].initial())) {
      if (winners.contains(i))
        init.pending.erase(i);
      else
        blocked = true;  // ε already satisfies a losing agent's goal
    }
  }
  intern(std::move(init));
  if (blocked) return out;

  ProductState next;
  next.goals.resize(k);
  for (std::uint32_t s = 0; s < out.states.size(); ++s) {
    for (LetterIndex a = 0; a < letters; ++a) {
      const auto& cur = out.states[s];
      bool defined = true;
      if (refined) {
        for (auto j : losers)
          if (!games[j]->safe_choice(cur.goals[j], a)) {
            defined = false;
            break;
          }
      }
      if (!defined) continue;
      next.pending = cur.pending;
      for (std::uint32_t i = 0; i < k && defined; ++i) {
        const auto q = goals[i].step_restricted(cur.goals[i], projections[i][a]);
        next.goals[i] = q;
        if (goals[i].accepting(q)) {
          if (winners.contains(i))
            next.pending.erase(i);
          else
            defined = false;
        }
      }
      if (!defined) continue;
      const auto t = intern(next);
      out.edges[s].push_back({a, t});
    }
  }
  return out;
}

}  // namespace

ProductBuchi build_product_buchi(const Ibg& game, AgentSet winners, std::span<const Dfa> goals) {
  return explore(game, winners, goals, {});
}

ProductBuchi build_refined_product(const Ibg& game, AgentSet winners, std::span<const Dfa> goals,
                                   std::span<const std::optional<DeviationGame>> games) {
  if (games.empty()) throw InputError("product: deviation games are required for refinement");
  return explore(game, winners, goals, games);
}

ProductBuchi refine(const ProductBuchi& product, AgentSet winners,
                    std::span<const std::optional<DeviationGame>> games) {
  std::vector<std::uint32_t> losers;
  for (std::uint32_t j = 0; j < games.size(); ++j)
    if (!winners.contains(j)) {
      if (!games[j]) throw InputError("refine: missing deviation game for a losing agent");
      losers.push_back(j);
    }
  ProductBuchi out;
  std::vector<std::uint32_t> renumber(product.states.size(), kNone);
  std::deque<std::uint32_t> queue{0};
  renumber[0] = 0;
  out.states.push_back(product.states[0]);
  out.edges.emplace_back();
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (const auto& e : product.edges[s]) {
      const bool keep = std::all_of(losers.begin(), losers.end(), [&](std::uint32_t j) {
        return games[j]->safe_choice(product.states[s].goals[j], e.letter);
      });
      if (!keep) continue;
      if (renumber[e.target] == kNone) {
        renumber[e.target] = static_cast<std::uint32_t>(out.states.size());
        out.states.push_back(product.states[e.target]);
        out.edges.emplace_back();
        queue.push_back(e.target);
      }
      out.edges[renumber[s]].push_back({e.letter, renumber[e.target]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Emptiness

UltimatelyPeriodicWord BuchiLasso::word(const ProductAlphabet& alphabet) const {
  std::vector<Letter> u, v;
  for (auto a : prefix_letters) u.push_back(alphabet.letter(a));
  for (auto a : cycle_letters) v.push_back(alphabet.letter(a));
  return {std::move(u), std::move(v)};
}

namespace {

/// Iterative Tarjan; returns the SCC id of every state reachable from 0 (kNone otherwise).
std::vector<std::uint32_t> strongly_connected(const ProductBuchi& p) {
  const auto n = p.states.size();
  std::vector<std::uint32_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0, comps = 0;
  auto open = [&](std::uint32_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    call.emplace_back(v, 0);
  };
  open(0);
  while (!call.empty()) {
    auto& [v, next] = call.back();
    if (next < p.edges[v].size()) {
      const auto w = p.edges[v][next++].target;
      if (index[w] == kNone) {
        open(w);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
      continue;
    }
    const auto done = v;
    call.pop_back();
    if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    if (low[done] == index[done]) {
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps;
      } while (w != done);
      ++comps;
    }
  }
  return comp;
}

}  // namespace

std::optional<BuchiLasso> buchi_nonempty(const ProductBuchi& p) {
  const auto n = static_cast<std::uint32_t>(p.states.size());
  if (n == 0) return std::nullopt;

  // BFS tree from the initial state; edges are stored in ascending letter order.
  std::vector<std::uint32_t> parent(n, kNone), order;
  std::vector<LetterIndex> via(n, 0);
  std::vector<bool> seen(n, false);
  std::deque<std::uint32_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (const auto& e : p.edges[s]) {
      if (seen[e.target]) continue;
      seen[e.target] = true;
      parent[e.target] = s;
      via[e.target] = e.letter;
      queue.push_back(e.target);
    }
  }

  const auto comp = strongly_connected(p);
  std::vector<std::uint32_t> comp_size(n, 0);
  for (auto s : order) ++comp_size[comp[s]];
  auto on_cycle = [&](std::uint32_t s) {
    if (comp_size[comp[s]] > 1) return true;
    return std::any_of(p.edges[s].begin(), p.edges[s].end(), [&](const ProductEdge& e) { return e.target == s; });
  };

  // BFS order is by distance, so the first hit is the closest accepting cycle state.
  std::uint32_t anchor = kNone;
  for (auto s : order)
    if (p.accepting(s) && on_cycle(s)) {
      anchor = s;
      break;
    }
  if (anchor == kNone) return std::nullopt;

  BuchiLasso lasso;
  for (auto s = anchor; s != 0; s = parent[s]) {
    lasso.prefix_states.push_back(parent[s]);
    lasso.prefix_letters.push_back(via[s]);
  }
  std::reverse(lasso.prefix_states.begin(), lasso.prefix_states.end());
  std::reverse(lasso.prefix_letters.begin(), lasso.prefix_letters.end());

  // Shortest cycle through the anchor inside its component.
  std::vector<std::uint32_t> cparent(n, kNone);
  std::vector<LetterIndex> cvia(n, 0);
  std::vector<bool> cseen(n, false);
  std::deque<std::uint32_t> cqueue{anchor};
  cseen[anchor] = true;
  std::uint32_t closing = kNone;
  LetterIndex closing_letter = 0;
  while (!cqueue.empty() && closing == kNone) {
    const auto s = cqueue.front();
    cqueue.pop_front();
    for (const auto& e : p.edges[s]) {
      if (comp[e.target] != comp[anchor]) continue;
      if (e.target == anchor) {
        closing = s;
        closing_letter = e.letter;
        break;
      }
      if (cseen[e.target]) continue;
      cseen[e.target] = true;
      cparent[e.target] = s;
      cvia[e.target] = e.letter;
      cqueue.push_back(e.target);
    }
  }
  if (closing == kNone) throw std::logic_error("buchi_nonempty: no cycle through a cyclic component state");
  lasso.cycle_states.push_back(closing);
  lasso.cycle_letters.push_back(closing_letter);
  for (auto s = closing; s != anchor; s = cparent[s]) {
    lasso.cycle_states.push_back(cparent[s]);
    lasso.cycle_letters.push_back(cvia[s]);
  }
  std::reverse(lasso.cycle_states.begin(), lasso.cycle_states.end());
  std::reverse(lasso.cycle_letters.begin(), lasso.cycle_letters.end());
  return lasso;
}

// ---------------------------------------------------------------------------
// Witness

namespace {

std::uint32_t follow(const ProductBuchi& p, std::uint32_t s, LetterIndex a) {
  for (const auto& e : p.edges[s])
    if (e.letter == a) return e.target;
  return kNone;
}

}  // namespace

StrategyProfile extract_witness(const Ibg& game, AgentSet winners, std::span<const Dfa> goals,
                                const ProductBuchi& refined, const BuchiLasso& lasso,
                                std::span<const std::optional<DeviationGame>> games) {
  const auto& alphabet_ptr = game.alphabet();
  const auto& alphabet = *alphabet_ptr;
  const auto k = game.num_agents();
  const auto letters = alphabet.size();

  // Re-check that the lasso is a run of the refined automaton.
  {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < lasso.prefix_letters.size(); ++i) {
      if (s != lasso.prefix_states[i]) throw std::logic_error("witness: lasso prefix is not a run");
      s = follow(refined, s, lasso.prefix_letters[i]);
      if (s == kNone) throw std::logic_error("witness: lasso prefix uses an undefined transition");
    }
    if (lasso.cycle_states.empty() || s != lasso.cycle_states.front() || !refined.accepting(s))
      throw std::logic_error("witness: lasso cycle does not start at an accepting state");
    for (std::size_t i = 0; i < lasso.cycle_letters.size(); ++i) {
      if (s != lasso.cycle_states[i]) throw std::logic_error("witness: lasso cycle is not a run");
      s = follow(refined, s, lasso.cycle_letters[i]);
      if (s == kNone) throw std::logic_error("witness: lasso cycle uses an undefined transition");
    }
    if (s != lasso.cycle_states.front()) throw std::logic_error("witness: lasso cycle does not close");
  }

  // Controller states: lasso positions, then per losing agent its Win0 goal
  // states, then one default state.
  const auto prefix_len = lasso.prefix_letters.size();
  const auto positions = prefix_len + lasso.cycle_letters.size();
  std::vector<std::uint32_t> product_at, expected;
  for (std::size_t p = 0; p < positions; ++p) {
    product_at.push_back(p < prefix_len ? lasso.prefix_states[p] : lasso.cycle_states[p - prefix_len]);
    expected.push_back(static_cast<std::uint32_t>(
        p < prefix_len ? lasso.prefix_letters[p] : lasso.cycle_letters[p - prefix_len]));
  }

  std::vector<std::string> names;
  for (std::size_t p = 0; p < positions; ++p) names.push_back("follow" + std::to_string(p));
  std::vector<std::vector<std::uint32_t>> punish_state(k);
  std::vector<Letter> state_letter;  // letter the profile plays in each controller state
  for (std::size_t p = 0; p < positions; ++p) state_letter.push_back(alphabet.letter(expected[p]));
  for (std::uint32_t j = 0; j < k; ++j) {
    if (winners.contains(j)) continue;
    const auto& g = *games[j];
    punish_state[j].assign(g.num_goal_states, kNone);
    for (StateId q = 0; q < g.num_goal_states; ++q) {
      if (!g.solution.winning0(q)) continue;
      punish_state[j][q] = static_cast<std::uint32_t>(names.size());
      names.push_back("punish" + std::to_string(j) + ":" + goals[j].state_name(q));
      const auto choice = g.solution.strategy0[q];
      const auto key = g.vertex_key[choice];
      Letter l{std::vector<std::uint32_t>(k, 0)};
      const auto agents = g.keys.mask().agents();
      const auto picks = g.keys.picks(key);
      for (std::size_t i = 0; i < agents.size(); ++i) l.picks[agents[i]] = picks[i];
      state_letter.push_back(std::move(l));
    }
  }
  const auto fallback = static_cast<std::uint32_t>(names.size());
  names.push_back("default");
  state_letter.push_back(Letter{std::vector<std::uint32_t>(k, 0)});
  const auto num_states = names.size();

  auto punish = [&](std::uint32_t j, StateId q, const Letter& observed) -> std::uint32_t {
    const auto next = goals[j].step(q, observed);
    const auto target = punish_state[j][next];
    if (target == kNone) throw std::logic_error("witness: deviation left the winning region");
    return target;
  };

  std::vector<StateId> table(num_states * letters);
  for (std::size_t p = 0; p < positions; ++p) {
    const auto& want = state_letter[p];
    for (LetterIndex a = 0; a < letters; ++a) {
      const auto got = alphabet.letter(a);
      std::uint32_t target;
      if (a == expected[p]) {
        target = static_cast<std::uint32_t>(p + 1 < positions ? p + 1 : prefix_len);
      } else {
        std::vector<std::uint32_t> diff;
        for (std::uint32_t i = 0; i < k; ++i)
          if (got[i] != want[i]) diff.push_back(i);
        if (diff.size() == 1 && !winners.contains(diff[0]))
          target = punish(diff[0], refined.states[product_at[p]].goals[diff[0]], got);
        else
          target = fallback;
      }
      table[p * letters + a] = target;
    }
  }
  for (std::uint32_t j = 0; j < k; ++j) {
    for (StateId q = 0; q < punish_state[j].size(); ++q) {
      const auto s = punish_state[j][q];
      if (s == kNone) continue;
      const auto& want = state_letter[s];
      for (LetterIndex a = 0; a < letters; ++a) {
        const auto got = alphabet.letter(a);
        bool others_follow = true;
        for (std::uint32_t i = 0; i < k; ++i)
          if (i != j && got[i] != want[i]) others_follow = false;
        table[s * letters + a] = others_follow ? punish(j, q, got) : fallback;
      }
    }
  }
  for (LetterIndex a = 0; a < letters; ++a) table[fallback * letters + a] = fallback;

  StrategyProfile profile;
  for (std::uint32_t i = 0; i < k; ++i) {
    std::vector<std::uint32_t> output;
    for (const auto& l : state_letter) output.push_back(l[i]);
    profile.machines.emplace_back(alphabet_ptr, i, ChannelMask::full(k), 0, table, std::move(output), names);
  }
  return profile;
}

RealizabilityVerdict realizable(const Ibg& game, AgentSet winners, ExecutionPolicy policy) {
  game.check_agents(winners);
  const auto k = game.num_agents();
  RealizabilityVerdict verdict;

  std::vector<std::optional<Dfa>> converted(k);
  for_each_index(policy, k, [&](std::size_t i) { converted[i].emplace(to_dfa(game.goal(i))); });
  std::vector<Dfa> goals;
  for (auto& d : converted) goals.push_back(std::move(*d));

  std::vector<std::optional<DeviationGame>> games(k);
  for_each_index(policy, k, [&](std::size_t j) {
    if (!winners.contains(static_cast<std::uint32_t>(j)))
      games[j].emplace(build_deviation_game(game, static_cast<std::uint32_t>(j), goals[j]));
  });

  for (std::uint32_t i = 0; i < k; ++i) {
    verdict.stats.goal_dfa_states.push_back(goals[i].num_states());
    verdict.stats.deviation_game_vertices.push_back(games[i] ? games[i]->arena.size() : 0);
  }

  const auto product = build_refined_product(game, winners, goals, games);
  verdict.stats.product_states = product.states.size();
  verdict.stats.product_transitions = product.num_transitions();

  const auto lasso = buchi_nonempty(product);
  if (!lasso) return verdict;
  verdict.realizable = true;
  RealizabilityWitness witness;
  witness.lasso = lasso->word(*game.alphabet());
  witness.profile = extract_witness(game, winners, goals, product, *lasso, games);
  for (std::uint32_t j = 0; j < k; ++j)
    if (games[j]) witness.deviation_strategies.emplace_back(j, games[j]->solution.strategy0);
  verdict.witness = std::move(witness);
  return verdict;
}

}  // namespace ibg
