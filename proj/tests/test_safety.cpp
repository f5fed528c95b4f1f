#include <doctest.h>

#include <sstream>

#include "ibg/random.hpp"
#include "ibg/safety.hpp"
#include "support.hpp"

using namespace ibg;

namespace {

Arena self_loops(std::size_t n) {
  Arena::Builder b;
  for (std::size_t v = 0; v < n; ++v) b.add_vertex(v % 2 ? Player::One : Player::Zero);
  for (std::uint32_t v = 0; v < n; ++v) b.add_edge(v, v);
  return std::move(b).build();
}

// every Win0 vertex has a strategy that stays, every Win1 vertex is forced out
void check_invariants(const Arena& arena, const std::vector<bool>& safe, const SafetySolution& sol) {
  REQUIRE(sol.win0.size() == arena.size());
  for (std::uint32_t v = 0; v < arena.size(); ++v) {
    CHECK(sol.winning0(v) != sol.winning1(v));
    const auto succ = arena.successors(v);
    if (sol.winning0(v)) {
      CHECK(safe[v]);
      CHECK(sol.rank[v] == kNone);
      if (arena.owner(v) == Player::Zero) {
        REQUIRE(sol.strategy0[v] != kNone);
        CHECK(sol.win0[sol.strategy0[v]]);
        std::uint32_t lowest = kNone;
        for (auto t : succ)
          if (sol.win0[t]) lowest = std::min(lowest, t);
        CHECK(sol.strategy0[v] == lowest);
      } else {
        for (auto t : succ) CHECK(sol.win0[t]);
      }
    } else {
      CHECK(sol.strategy0[v] == kNone);
      REQUIRE(sol.rank[v] != kNone);
      if (sol.rank[v] == 0) {
        CHECK((!safe[v] || (arena.owner(v) == Player::Zero && succ.empty())));
      } else if (arena.owner(v) == Player::One) {
        REQUIRE(sol.strategy1[v] != kNone);
        CHECK(sol.rank[sol.strategy1[v]] < sol.rank[v]);
      } else {
        for (auto t : succ) CHECK(sol.rank[t] < sol.rank[v]);
      }
    }
  }
}

}  // namespace

TEST_CASE("all safe with self loops") {
  const auto a = self_loops(5);
  const std::vector<bool> safe(5, true);
  const auto sol = solve_safety(a, safe);
  for (std::uint32_t v = 0; v < 5; ++v) CHECK(sol.winning0(v));
  check_invariants(a, safe, sol);
}

TEST_CASE("empty safe set") {
  const auto a = self_loops(4);
  const std::vector<bool> safe(4, false);
  const auto sol = solve_safety(a, safe);
  for (std::uint32_t v = 0; v < 4; ++v) CHECK(sol.winning1(v));
  check_invariants(a, safe, sol);
}

TEST_CASE("three-vertex chain") {
  Arena::Builder b;
  const auto v0 = b.add_vertex(Player::Zero);
  const auto v1 = b.add_vertex(Player::One);
  const auto v2 = b.add_vertex(Player::Zero);
  b.add_edge(v0, v1);
  b.add_edge(v1, v2);
  b.add_edge(v1, v0);
  b.add_edge(v2, v2);
  const auto a = std::move(b).build();
  const std::vector<bool> safe{true, true, false};
  const auto sol = solve_safety(a, safe);
  CHECK(sol.winning1(v1));
  CHECK(sol.winning1(v0));
  CHECK(sol.strategy1[v1] == v2);
  CHECK(sol.rank[v2] == 0);
  CHECK(sol.rank[v1] == 1);
  CHECK(sol.rank[v0] == 2);
  check_invariants(a, safe, sol);
}

TEST_CASE("dead vertices") {
  Arena::Builder b;
  const auto stuck0 = b.add_vertex(Player::Zero);
  const auto stuck1 = b.add_vertex(Player::One);
  const auto a = std::move(b).build();
  const auto sol = solve_safety(a, {true, true});
  CHECK(sol.winning1(stuck0));
  CHECK(sol.rank[stuck0] == 0);
  CHECK(sol.winning0(stuck1));
}

TEST_CASE("one-player mode is reachability") {
  // agent-0 vertices with exactly one successor: Win1 = vertices that can reach the unsafe one
  Arena::Builder b;
  for (int i = 0; i < 3; ++i) b.add_vertex(Player::Zero);
  const auto c = b.add_vertex(Player::One);
  b.add_edge(0, c);
  b.add_edge(c, 1);
  b.add_edge(c, 2);
  b.add_edge(1, 1);
  b.add_edge(2, 2);
  const auto a = std::move(b).build();
  const auto sol = solve_safety(a, {true, true, false, true});
  CHECK(sol.winning1(0));
  CHECK(sol.winning0(1));
  CHECK(sol.winning1(2));
}

TEST_CASE("edge list dump") {
  Arena::Builder b;
  b.add_vertex(Player::Zero);
  b.add_vertex(Player::One);
  b.add_edge(0, 1);
  b.add_edge(1, 0);
  std::ostringstream out;
  std::move(b).build().write_edge_list(out);
  CHECK(out.str() == "v 0 0\nv 1 1\ne 0 1\ne 1 0\n");
}

TEST_CASE("attractor solver equals the naive fixpoint on random arenas") {
  Rng rng(17);
  for (int round = 0; round < 300; ++round) {
    const auto n = 1 + rng() % 50;
    const auto [arena, safe] = random_arena(rng, n, 4, 0.2);
    const auto sol = solve_safety(arena, safe);
    CHECK(sol.win0 == test::naive_safety(arena, safe));
    check_invariants(arena, safe, sol);
  }
}
