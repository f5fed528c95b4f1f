#include <doctest.h>

#include <map>

#include "ibg/game.hpp"
#include "ibg/random.hpp"
#include "support.hpp"

using namespace ibg;
using ibg::test::ac_alphabet;

TEST_CASE("agent sets") {
  AgentSet w{0, 2};
  CHECK(w.contains(0));
  CHECK_FALSE(w.contains(1));
  CHECK(w.size() == 2);
  CHECK(w.to_string() == "{0,2}");
  CHECK(AgentSet::all(3).bits() == 7);
  CHECK(AgentSet().empty());
}

TEST_CASE("ibg validation") {
  const auto s = ac_alphabet();
  const auto other = ac_alphabet();
  const auto d = test::contains_dfa(s, "ac");
  CHECK_THROWS_AS(Ibg(s, {}, {d}), InputError);
  CHECK_NOTHROW(Ibg(other, {}, {test::contains_dfa(other, "ac"), test::contains_dfa(other, "bd")}));
  const auto game = test::ev_game();
  CHECK(game.agent_name(1) == "second");
  CHECK_THROWS_AS(game.check_agents(AgentSet{2}), InputError);
}

TEST_CASE("constant machines give a one-state product") {
  const auto game = test::ev_game();
  const auto profile = test::constant_profile(game, {0, 0});
  const auto g = product_profile(profile);
  CHECK(g.num_states() == 1);
  CHECK(g.alphabet()->format(g.alphabet()->letter(g.output(0))) == "(a,c)");
  const auto trace = primary_trace(g);
  CHECK(trace.prefix.empty());
  CHECK(trace.period == test::word(*game.alphabet(), {"ac"}));
}

TEST_CASE("echo machine product and toggling trace") {
  const auto game = test::ev_game();
  const auto s = game.alphabet();
  // agent 0 toggles a, b; agent 1 echoes channel 0 (a -> c, b -> d) from its mask {0}
  const MooreMachine toggle(s, 0, ChannelMask(), 0, {1, 0}, {0, 1});
  const MooreMachine echo(s, 1, ChannelMask({0}), 0, {0, 1, 0, 1}, {0, 1});
  const auto g = product_profile(StrategyProfile{{toggle, echo}});
  CHECK(g.num_states() <= 4);
  const auto t = primary_trace(g);
  CHECK(t.lasso_length() <= g.num_states());
  // (a,c) (b,c) (a,d) (b,c)... : echo lags one step behind
  CHECK(t.at(0) == test::letter(*s, "ac"));
  CHECK(t.at(1) == test::letter(*s, "bc"));
  CHECK(t.at(2) == test::letter(*s, "ad"));

  const MooreMachine constant_c(s, 1, ChannelMask(), 0, {0}, {0});
  const auto t2 = primary_trace(product_profile(StrategyProfile{{toggle, constant_c}}));
  CHECK(t2.prefix.empty());
  CHECK(t2.period == test::word(*s, {"ac", "bc"}));

  // the echo machine alone has two reachable states in any product with a 1-state partner
  const auto g3 = product_profile(StrategyProfile{{MooreMachine(s, 0, ChannelMask(), 0, {0}, {0}), echo}});
  CHECK(g3.num_states() == 2);
}

TEST_CASE("bounded-channel machines ignore channels outside the mask") {
  const auto s = ac_alphabet();
  const MooreMachine echo(s, 1, ChannelMask({0}), 0, {0, 1, 0, 1}, {0, 1});
  CHECK(echo.step(0, test::letter(*s, "ac")) == echo.step(0, test::letter(*s, "ad")));
  CHECK(echo.step(1, test::letter(*s, "bc")) == echo.step(1, test::letter(*s, "bd")));
}

TEST_CASE("winning sets on the ev game") {
  const auto game = test::ev_game();
  const auto s = game.alphabet();
  CHECK(winning_set(UltimatelyPeriodicWord({}, test::word(*s, {"ac"})), game) == AgentSet{0});
  CHECK(winning_set(UltimatelyPeriodicWord(test::word(*s, {"ac"}), test::word(*s, {"bc"})), game) == AgentSet{0, 1});
  const Ibg empty(s, {}, {Dfa(s, ChannelMask(), 0, {0}, {false}), Dfa(s, ChannelMask(), 0, {0}, {false})});
  CHECK(winning_set(UltimatelyPeriodicWord({}, test::word(*s, {"ac"})), empty).empty());
}

TEST_CASE("primary trace agrees with direct machine simulation") {
  Rng rng(5);
  for (int round = 0; round < 300; ++round) {
    RandomGameParams params;
    params.agents = 1 + rng() % 3;
    const auto game = random_game(rng, params);
    const auto profile = random_profile(rng, game, 3);
    const auto g = product_profile(profile);
    const auto t = primary_trace(g);
    CHECK(t.lasso_length() <= g.num_states());

    std::size_t product_bound = 1;
    for (const auto& m : profile.machines) product_bound *= m.num_states();
    CHECK(g.num_states() <= product_bound);

    std::vector<StateId> s;
    for (const auto& m : profile.machines) s.push_back(m.initial());
    for (std::size_t pos = 0; pos < 3 * g.num_states(); ++pos) {
      Letter l;
      for (std::size_t i = 0; i < s.size(); ++i) l.picks.push_back(profile.machines[i].output(s[i]));
      REQUIRE(t.at(pos) == l);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = profile.machines[i].step(s[i], l);
    }
    CHECK(winning_set(t, game) == winning_set(t.unrolled(), game));
  }
}

TEST_CASE("profiles are checked against the game") {
  const auto game = test::ev_game();
  auto p = test::constant_profile(game, {0, 0});
  CHECK_NOTHROW(check_profile(game, p));
  p.machines.pop_back();
  CHECK_THROWS_AS(check_profile(game, p), InputError);
  const auto swapped = StrategyProfile{{test::constant_profile(game, {0, 0}).machines[1],
                                        test::constant_profile(game, {0, 0}).machines[0]}};
  CHECK_THROWS_AS(check_profile(game, swapped), InputError);
  CHECK_THROWS_AS(MooreMachine(game.alphabet(), 0, ChannelMask(), 0, {0}, {2}), InputError);
  CHECK_THROWS_AS(MooreMachine(game.alphabet(), 0, ChannelMask(), 0, {1}, {0}), InputError);
}
