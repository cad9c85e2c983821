/*
 * Copyright 2026 The gfx authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "game_check.hpp"
#include "gfx/games.hpp"

using namespace gfx;

namespace {

ParityGame self_loop_game(Player owner, int rank) {
  ParityGame g;
  int p = g.add_position(owner, rank);
  g.add_edge(p, p);
  g.initial = p;
  return g;
}

}  // namespace

TEST_CASE("trivial games") {
  auto even = self_loop_game(Player::Exists, 0);
  CHECK(solve(even).winner[0] == Player::Exists);

  auto odd = self_loop_game(Player::Exists, 1);
  CHECK(solve(odd).winner[0] == Player::Forall);

  ParityGame dead;
  dead.add_position(Player::Forall, 5);
  dead.initial = 0;
  CHECK(solve(dead).winner[0] == Player::Exists);  // stuck player loses

  ParityGame dead2;
  dead2.add_position(Player::Exists, 0);
  CHECK(solve(dead2).winner[0] == Player::Forall);
}

TEST_CASE("two-position alternating lasso") {
  ParityGame g;
  int a = g.add_position(Player::Exists, 1);
  int b = g.add_position(Player::Forall, 2);
  g.add_edge(a, b);
  g.add_edge(b, a);
  g.initial = a;
  auto sol = solve(g);
  CHECK(sol.winner[a] == Player::Exists);  // max infinitely-often rank 2, even
  CHECK(sol.winner[b] == Player::Exists);
  auto brute = brute_solve(g);
  CHECK(brute.winner == sol.winner);
}

TEST_CASE("brute agrees on the trivial examples") {
  for (auto [owner, rank, expect] :
       {std::tuple{Player::Exists, 0, Player::Exists}, {Player::Exists, 1, Player::Forall},
        {Player::Forall, 0, Player::Exists}, {Player::Forall, 1, Player::Forall}}) {
    auto g = self_loop_game(owner, rank);
    CHECK(solve(g).winner[0] == expect);
    CHECK(brute_solve(g).winner[0] == expect);
  }
}

TEST_CASE("solve matches brute force on all small games") {
  // exhaustive: 1 and 2 positions, every owner/rank/edge combination
  for (int n = 1; n <= 2; ++n) {
    int edge_slots = n * n;
    for (int owners = 0; owners < (1 << n); ++owners)
      for (int rank_code = 0; rank_code < (n == 1 ? 4 : 16); ++rank_code)
        for (int edges = 0; edges < (1 << edge_slots); ++edges) {
          ParityGame g;
          for (int v = 0; v < n; ++v) {
            int rank = (rank_code >> (2 * v)) & 3;
            g.add_position((owners >> v) & 1 ? Player::Exists : Player::Forall, rank);
          }
          for (int e = 0; e < edge_slots; ++e)
            if (edges & (1 << e)) g.add_edge(e / n, e % n);
          g.initial = 0;
          auto fast = solve(g);
          auto slow = brute_solve(g);
          REQUIRE(fast.winner == slow.winner);
          REQUIRE(corpus_check::strategy_sound(g, fast));
        }
  }
}

TEST_CASE("solve matches brute force on random games up to 5 positions") {
  std::mt19937 rng(41);
  for (int round = 0; round < 1500; ++round) {
    auto g = corpus_check::random_game(rng, 5, 3);
    auto fast = solve(g);
    auto slow = brute_solve(g);
    REQUIRE(fast.winner == slow.winner);
    REQUIRE(corpus_check::strategy_sound(g, fast));
  }
}

TEST_CASE("rank shift by two preserves winners") {
  std::mt19937 rng(43);
  for (int round = 0; round < 200; ++round) {
    auto g = corpus_check::random_game(rng, 5, 3);
    auto shifted = g;
    for (auto& p : shifted.positions) p.rank += 2;
    CHECK(solve(g).winner == solve(shifted).winner);
  }
}

TEST_CASE("game dump roundtrip") {
  ParityGame g;
  int a = g.add_position(Player::Exists, 1, "a");
  int b = g.add_position(Player::Forall, 2, "b");
  g.add_edge(a, b);
  g.add_edge(b, a);
  g.initial = a;
  auto back = parse_game(print_game(g));
  CHECK(back.size() == 2);
  CHECK(back.positions[0].owner == Player::Exists);
  CHECK(back.positions[1].rank == 2);
  CHECK(back.initial == 0);
  CHECK(solve(back).winner == solve(g).winner);
}

TEST_CASE("game files reject negative ranks") {
  CHECK_THROWS_AS(parse_game("pos a exists -1\ninit a\n"), std::runtime_error);
}

TEST_CASE("brute_solve refuses large games") {
  ParityGame g;
  for (int i = 0; i < 11; ++i) g.add_position(Player::Exists, 0);
  CHECK_THROWS_AS(brute_solve(g), std::invalid_argument);
}
