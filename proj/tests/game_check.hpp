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

#pragma once

#include <random>
#include <vector>

#include "gfx/games.hpp"

namespace gfx::corpus_check {

inline ParityGame random_game(std::mt19937& rng, int max_positions, int max_rank) {
  ParityGame g;
  int n = 1 + std::uniform_int_distribution<int>(0, max_positions - 1)(rng);
  for (int v = 0; v < n; ++v) {
    Player owner =
        std::uniform_int_distribution<int>(0, 1)(rng) ? Player::Exists : Player::Forall;
    int rank = std::uniform_int_distribution<int>(0, max_rank)(rng);
    g.add_position(owner, rank);
  }
  std::uniform_real_distribution<double> u(0, 1);
  double density = 0.15 + 0.5 * u(rng);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (u(rng) < density) g.add_edge(v, w);
  g.initial = 0;
  return g;
}

/// Replay check: from every position of a player's winning region, following
/// the returned strategy against arbitrary opponent moves never leaves the
/// region, never strands the winner, and every reachable lasso satisfies the
/// winner's parity objective. Independent of the solver internals.
inline bool strategy_sound(const ParityGame& g, const Solution& sol) {
  int n = static_cast<int>(g.size());
  for (Player p : {Player::Exists, Player::Forall}) {
    auto in_region = [&](int v) { return sol.winner[v] == p; };
    auto succs = [&](int v) -> std::vector<int> {
      if (g.positions[v].owner == p) {
        if (g.succ[v].empty()) return {};
        if (sol.strategy[v] < 0) return {};  // missing strategy: flagged below
        return {sol.strategy[v]};
      }
      return g.succ[v];
    };
    for (int v = 0; v < n; ++v) {
      if (!in_region(v)) continue;
      if (g.positions[v].owner == p) {
        if (g.succ[v].empty()) return false;  // winner stuck at its own position
        if (sol.strategy[v] < 0) return false;
      }
      // closure under consistent plays
      std::vector<char> reach(n, 0);
      std::vector<int> stack{v};
      reach[v] = 1;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (!in_region(u)) return false;
        if (g.positions[u].owner == p && (g.succ[u].empty() || sol.strategy[u] < 0)) return false;
        for (int w : succs(u))
          if (!reach[w]) {
            reach[w] = 1;
            stack.push_back(w);
          }
      }
      // every lasso in the reachable consistent subgraph respects parity
      bool even_good = p == Player::Exists;
      for (int w = 0; w < n; ++w) {
        if (!reach[w]) continue;
        int r = g.positions[w].rank;
        bool bad = even_good ? (r % 2 == 1) : (r % 2 == 0);
        if (!bad) continue;
        std::vector<char> seen(n, 0);
        std::vector<int> st;
        bool cycle = false;
        for (int u : succs(w)) {
          if (g.positions[u].rank > r || !reach[u]) continue;
          if (u == w) cycle = true;
          else if (!seen[u]) { seen[u] = 1; st.push_back(u); }
        }
        while (!cycle && !st.empty()) {
          int u = st.back();
          st.pop_back();
          for (int x : succs(u)) {
            if (g.positions[x].rank > r || !reach[x]) continue;
            if (x == w) { cycle = true; break; }
            if (!seen[x]) { seen[x] = 1; st.push_back(x); }
          }
        }
        if (cycle) return false;
      }
    }
  }
  return true;
}

}  // namespace gfx::corpus_check
