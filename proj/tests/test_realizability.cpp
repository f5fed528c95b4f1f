#include <doctest.h>

#include "ibg/oracle.hpp"
#include "ibg/random.hpp"
#include "ibg/realizability.hpp"
#include "support.hpp"

using namespace ibg;

namespace {

std::vector<std::optional<DeviationGame>> deviation_games(const Ibg& game, AgentSet w, const std::vector<Dfa>& goals) {
  std::vector<std::optional<DeviationGame>> games(game.num_agents());
  for (std::uint32_t j = 0; j < game.num_agents(); ++j)
    if (!w.contains(j)) games[j] = build_deviation_game(game, j, goals[j]);
  return games;
}

Dfa accept_all(const AlphabetPtr& s) { return Dfa(s, ChannelMask(), 0, {0}, {true}); }
Dfa accept_none(const AlphabetPtr& s) { return Dfa(s, ChannelMask(), 0, {0}, {false}); }

std::size_t transitions(const ProductBuchi& p) {
  std::size_t n = 0;
  for (const auto& e : p.edges) n += e.size();
  return n;
}

}  // namespace

TEST_CASE("deviation game examples") {
  const auto mp = test::mp_game();
  const auto mp_goals = test::goal_dfas(mp);
  const auto g1 = build_deviation_game(mp, 1, mp_goals[1]);
  CHECK(g1.solution.winning1(mp_goals[1].initial()));
  for (LetterIndex a = 0; a < 4; ++a) CHECK_FALSE(g1.safe_choice(mp_goals[1].initial(), a));

  const auto ev = test::ev_game();
  const auto ev_goals = test::goal_dfas(ev);
  const auto& s = *ev.alphabet();
  const auto e1 = build_deviation_game(ev, 1, ev_goals[1]);
  CHECK(e1.safe_choice(0, s.index(test::letter(s, "ac"))));
  CHECK(e1.safe_choice(0, s.index(test::letter(s, "ad"))));
  CHECK_FALSE(e1.safe_choice(0, s.index(test::letter(s, "bc"))));
  CHECK_FALSE(e1.safe_choice(0, s.index(test::letter(s, "bd"))));
  CHECK(e1.solution.winning0(0));
  // accepting goal states have no agent-1 vertices
  CHECK(e1.vertex(1, 0) == kNone);

  const auto empty = build_deviation_game(ev, 0, accept_none(ev.alphabet()));
  for (std::uint32_t v = 0; v < empty.arena.size(); ++v) CHECK(empty.solution.winning0(v));
}

TEST_CASE("bounded-channel goals collapse agent-1 vertices") {
  const auto s = test::ac_alphabet();
  // agent 1's goal reads only channel 0; its key still includes channel 1
  const Dfa d(s, ChannelMask({0}), 0, {1, 0, 1, 1}, {false, true});
  const Ibg game(s, {}, {accept_none(s), d});
  const auto g = build_deviation_game(game, 1, d);
  CHECK(g.keys.size() == 4);
  const Dfa d0(s, ChannelMask({0}), 0, {1, 0, 1, 1}, {false, true});
  const Ibg game0(s, {}, {d0, accept_none(s)});
  const auto g0 = build_deviation_game(game0, 0, d0);
  CHECK(g0.keys.size() == 2);
  CHECK(g0.arena.size() == 2 + 2);
}

TEST_CASE("product examples") {
  const auto s = test::ac_alphabet();
  const Ibg all(s, {}, {accept_all(s), accept_all(s)});
  const auto all_goals = test::goal_dfas(all);
  const auto p = build_product_buchi(all, AgentSet::all(2), all_goals);
  CHECK(p.accepting(0));
  CHECK(buchi_nonempty(p).has_value());

  const Ibg none(s, {}, {accept_none(s), accept_none(s)});
  const auto none_goals = test::goal_dfas(none);
  const auto q = build_product_buchi(none, AgentSet(), none_goals);
  for (std::uint32_t i = 0; i < q.states.size(); ++i) CHECK(q.accepting(i));
  const auto lasso = buchi_nonempty(q);
  REQUIRE(lasso);
  CHECK(lasso->prefix_letters.empty());
  CHECK(lasso->cycle_letters == std::vector<LetterIndex>{0});

  const auto mp = test::mp_game();
  const auto mp_goals = test::goal_dfas(mp);
  const auto m = build_product_buchi(mp, AgentSet(), mp_goals);
  CHECK(m.edges[0].empty());
  CHECK_FALSE(buchi_nonempty(m).has_value());

  // ε preprocessing: a losing agent whose goal accepts ε leaves the initial state without edges
  const Ibg eps(s, {}, {accept_all(s), accept_none(s)});
  const auto e = build_product_buchi(eps, AgentSet{1}, test::goal_dfas(eps));
  CHECK(e.states.size() == 1);
  CHECK(e.edges[0].empty());
}

TEST_CASE("refinement examples") {
  const auto mp = test::mp_game();
  const auto mp_goals = test::goal_dfas(mp);
  for (std::uint32_t bits = 0; bits < 3; ++bits) {
    const AgentSet w(bits);
    const auto games = deviation_games(mp, w, mp_goals);
    const auto r = build_refined_product(mp, w, mp_goals, games);
    CHECK(r.edges[0].empty());
    CHECK_FALSE(buchi_nonempty(r).has_value());
  }

  const auto ev = test::ev_game();
  const auto ev_goals = test::goal_dfas(ev);
  const auto& s = *ev.alphabet();
  const auto games = deviation_games(ev, AgentSet{0}, ev_goals);
  const auto r = build_refined_product(ev, AgentSet{0}, ev_goals, games);
  std::vector<LetterIndex> letters;
  for (const auto& e : r.edges[0]) letters.push_back(e.letter);
  CHECK(letters == std::vector<LetterIndex>{s.index(test::letter(s, "ac")), s.index(test::letter(s, "ad"))});
  const auto lasso = buchi_nonempty(r);
  REQUIRE(lasso);
  const auto word = lasso->word(s);
  CHECK(winning_set(word, ev) == AgentSet{0});
  CHECK(word.at(0) == test::letter(s, "ac"));

  // W = Ω: refinement is the identity
  const auto full = build_product_buchi(ev, AgentSet::all(2), ev_goals);
  const auto none = deviation_games(ev, AgentSet::all(2), ev_goals);
  CHECK(refine(full, AgentSet::all(2), none).edges == full.edges);
}

TEST_CASE("golden table") {
  const auto mp = test::mp_game();
  const auto ev = test::ev_game();
  for (std::uint32_t bits = 0; bits < 4; ++bits) {
    CHECK_FALSE(realizable(mp, AgentSet(bits)).realizable);
  }
  CHECK(realizable(ev, AgentSet()).realizable);
  CHECK(realizable(ev, AgentSet{0}).realizable);
  CHECK_FALSE(realizable(ev, AgentSet{1}).realizable);
  CHECK(realizable(ev, AgentSet{0, 1}).realizable);
  CHECK_THROWS_AS(realizable(ev, AgentSet{4}), InputError);
}

TEST_CASE("ev witness for W = {0}") {
  const auto ev = test::ev_game();
  const auto v = realizable(ev, AgentSet{0});
  REQUIRE(v.witness);
  const auto& w = *v.witness;
  // prefix (a,c) reaches the accepting state, which then loops on (a,c)
  CHECK(w.lasso.lasso_length() <= 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(w.lasso.at(i) == test::letter(*ev.alphabet(), "ac"));
  // agent 0 outputs a in every reachable state
  const auto g = product_profile(w.profile);
  for (StateId q = 0; q < g.num_states(); ++q) CHECK(ev.alphabet()->letter(g.output(q)).picks[0] == 0);
  for (StateId m = 0; m < w.profile.machines[0].num_states(); ++m) CHECK(w.profile.machines[0].output(m) == 0);
  CHECK(verify(ev, AgentSet{0}, w.profile).is_ne);
  CHECK(oracle_verify(ev, AgentSet{0}, w.profile));
  REQUIRE(v.stats.goal_dfa_states.size() == 2);
  CHECK(v.stats.deviation_game_vertices[0] == 0);
  CHECK(v.stats.deviation_game_vertices[1] > 0);
}

TEST_CASE("product invariants, refine equivalence and witnesses on random games") {
  Rng rng(23);
  int realizable_count = 0;
  for (int round = 0; round < 120; ++round) {
    RandomGameParams params;
    params.agents = 1 + rng() % 3;
    const auto game = random_game(rng, params);
    const auto goals = test::goal_dfas(game);
    for (std::uint32_t bits = 0; bits < (1U << game.num_agents()); ++bits) {
      const AgentSet w(bits);
      const auto games = deviation_games(game, w, goals);
      const auto plain = build_product_buchi(game, w, goals);
      for (std::uint32_t st = 0; st < plain.states.size(); ++st) {
        const auto pending = plain.states[st].pending.bits();
        CHECK((pending & ~w.bits()) == 0);
        for (const auto& e : plain.edges[st]) {
          const auto next = plain.states[e.target].pending.bits();
          CHECK((next & ~pending) == 0);
          if (pending == 0) CHECK(next == 0);
        }
      }
      const auto refined = refine(plain, w, games);
      const auto interleaved = build_refined_product(game, w, goals, games);
      CHECK(refined.states == interleaved.states);
      CHECK(refined.edges == interleaved.edges);
      CHECK(transitions(refined) <= transitions(plain));

      const auto verdict = realizable(game, w, ExecutionPolicy::Serial);
      CHECK(verdict.realizable == buchi_nonempty(refined).has_value());
      CHECK(verdict.realizable == verdict.witness.has_value());
      if (!verdict.witness) continue;
      ++realizable_count;
      CHECK(winning_set(verdict.witness->lasso, game) == w);
      CHECK(verify(game, w, verdict.witness->profile, ExecutionPolicy::Serial).is_ne);
      CHECK(oracle_verify(game, w, verdict.witness->profile));
    }
  }
  CHECK(realizable_count > 20);
}

TEST_CASE("serial and parallel runs agree") {
  Rng rng(29);
  for (int round = 0; round < 60; ++round) {
    RandomGameParams params;
    params.agents = 2 + rng() % 2;
    params.kind = GoalKind::Mixed;
    const auto game = random_game(rng, params);
    const auto w = random_agent_set(rng, game.num_agents());
    const auto a = realizable(game, w, ExecutionPolicy::Serial);
    const auto b = realizable(game, w, ExecutionPolicy::Parallel);
    CHECK(a.realizable == b.realizable);
    CHECK(a.stats.goal_dfa_states == b.stats.goal_dfa_states);
    CHECK(a.stats.deviation_game_vertices == b.stats.deviation_game_vertices);
    CHECK(a.stats.product_states == b.stats.product_states);
    CHECK(a.stats.product_transitions == b.stats.product_transitions);
    if (a.witness && b.witness) {
      CHECK(a.witness->lasso.prefix == b.witness->lasso.prefix);
      CHECK(a.witness->lasso.period == b.witness->lasso.period);
      CHECK(a.witness->profile == b.witness->profile);
    }
  }
}
