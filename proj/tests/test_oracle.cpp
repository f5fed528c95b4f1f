#include <doctest.h>

#include "ibg/oracle.hpp"
#include "ibg/random.hpp"
#include "ibg/realizability.hpp"
#include "support.hpp"

using namespace ibg;

TEST_CASE("oracle_verify examples") {
  const auto ev = test::ev_game();
  CHECK(oracle_verify(ev, AgentSet{0}, test::constant_profile(ev, {0, 0})));
  CHECK_FALSE(oracle_verify(ev, AgentSet{0, 1}, test::constant_profile(ev, {0, 0})));

  const auto mp = test::mp_game();
  for (std::uint32_t a = 0; a < 2; ++a)
    for (std::uint32_t c = 0; c < 2; ++c)
      for (std::uint32_t bits = 0; bits < 4; ++bits)
        CHECK_FALSE(oracle_verify(mp, AgentSet(bits), test::constant_profile(mp, {a, c})));

  const auto s = ev.alphabet();
  const Ibg empty(s, {}, {Dfa(s, ChannelMask(), 0, {0}, {false}), Dfa(s, ChannelMask(), 0, {0}, {false})});
  CHECK(oracle_verify(empty, AgentSet(), test::constant_profile(empty, {1, 1})));
}

TEST_CASE("oracle_verify overflows instead of guessing") {
  const auto ev = test::ev_game();
  OracleConfig tiny;
  tiny.max_states = 1;
  CHECK_THROWS_AS(oracle_verify(ev, AgentSet{0}, test::constant_profile(ev, {0, 0}), tiny), OracleOverflow);
}

TEST_CASE("profile counts") {
  const auto ev = test::ev_game();
  CHECK(count_profiles(ev, 1) == 1024);
  CHECK(count_profiles(ev, 0) == 4);
  std::size_t n = 0;
  const auto r = enumerate_profiles(ev, 1, 5000, [&](const StrategyProfile& p) {
    ++n;
    CHECK(p.machines[0].num_states() == 5);
    return true;
  });
  CHECK(n == 1024);
  CHECK_FALSE(r.truncated);
  const auto t = enumerate_profiles(ev, 1, 10, [](const StrategyProfile&) { return true; });
  CHECK(t.visited == 10);
  CHECK(t.truncated);
  CHECK_THROWS_AS(count_profiles(ev, 2), InputError);
}

TEST_CASE("enumeration order is fixed") {
  const auto ev = test::ev_game();
  std::vector<StrategyProfile> first, second;
  enumerate_profiles(ev, 0, 100, [&](const StrategyProfile& p) {
    first.push_back(p);
    return true;
  });
  enumerate_profiles(ev, 0, 100, [&](const StrategyProfile& p) {
    second.push_back(p);
    return true;
  });
  CHECK(first == second);
  REQUIRE(first.size() == 4);
  // agent 1's symbol is the least significant digit
  CHECK(first[0].machines[0].output(0) == 0);
  CHECK(first[0].machines[1].output(0) == 0);
  CHECK(first[1].machines[1].output(0) == 1);
  CHECK(first[1].machines[0].output(0) == 0);
  CHECK(first[2].machines[0].output(0) == 1);
  CHECK(first[2].machines[1].output(0) == 0);
}

TEST_CASE("one-sided realizability examples") {
  const auto ev = test::ev_game();
  const auto found = oracle_realizable_onesided(ev, AgentSet{0});
  REQUIRE(found.witness);
  CHECK(oracle_verify(ev, AgentSet{0}, *found.witness));

  const auto mp = test::mp_game();
  OracleConfig c;
  c.max_profiles = 2000;
  const auto unknown = oracle_realizable_onesided(mp, AgentSet{0, 1}, c);
  CHECK_FALSE(unknown.witness);
  CHECK(unknown.profiles_checked == 1024);
  CHECK_FALSE(unknown.truncated);

  const auto s = ev.alphabet();
  const Ibg all(s, {}, {Dfa(s, ChannelMask(), 0, {0}, {true}), Dfa(s, ChannelMask(), 0, {0}, {true})});
  CHECK(oracle_realizable_onesided(all, AgentSet::all(2)).witness.has_value());

  OracleConfig tiny;
  tiny.max_states = 1;
  const auto overflow = oracle_realizable_onesided(ev, AgentSet{0}, tiny);
  CHECK_FALSE(overflow.witness);
  CHECK(overflow.truncated);
}

TEST_CASE("one-sided coupling with the engine") {
  Rng rng(37);
  OracleConfig c;
  c.memory = 0;
  for (int round = 0; round < 200; ++round) {
    RandomGameParams params;
    params.agents = 1 + rng() % 3;
    params.kind = GoalKind::Mixed;
    const auto game = random_game(rng, params);
    const auto w = random_agent_set(rng, game.num_agents());
    const auto r = oracle_realizable_onesided(game, w, c);
    if (r.witness) CHECK(realizable(game, w).realizable);
  }
}

TEST_CASE("goal evaluator agrees with prefix acceptance") {
  Rng rng(41);
  for (int round = 0; round < 300; ++round) {
    const auto s = random_alphabet(rng, 2, 2);
    const auto mask = random_mask(rng, 2, 0.7);
    const std::vector<GoalAutomaton> goals{random_dfa(rng, s, mask, 4), random_nfa(rng, s, mask, 4),
                                           random_afa(rng, s, mask, 4)};
    std::vector<Letter> w;
    const auto len = rng() % 7;
    for (std::size_t i = 0; i < len; ++i) w.push_back(s->letter(rng() % s->size()));
    for (const auto& g : goals) {
      const GoalEvaluator e{g};
      auto c = e.initial();
      for (const auto& l : w) c = e.step(c, l);
      CHECK(e.accepting(c) == accepts(g, w));
    }
  }
}
