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

#include <optional>
#include <string>
#include <vector>

namespace gfx {

enum class Player { Exists, Forall };

inline Player opponent(Player p) { return p == Player::Exists ? Player::Forall : Player::Exists; }

/// Parity game arena. Winning convention: an infinite play is won by Exists
/// iff the maximum rank occurring infinitely often is even; a player who
/// cannot move loses at that position.
struct ParityGame {
  struct Position {
    Player owner;
    int rank;
  };
  std::vector<Position> positions;
  std::vector<std::vector<int>> succ;
  int initial = 0;
  std::vector<std::string> names;  // optional, for dumps

  int add_position(Player owner, int rank, std::string name = "");
  void add_edge(int from, int to) { succ[from].push_back(to); }
  size_t size() const { return positions.size(); }
};

struct Solution {
  std::vector<Player> winner;
  /// Positional strategy: a move for each position owned by its winner that
  /// has at least one successor; -1 elsewhere.
  std::vector<int> strategy;
};

/// Zielonka's recursive algorithm.
Solution solve(const ParityGame& g);

/// Independent oracle: exhaustive enumeration of positional strategies with
/// lasso analysis of all opponent-steered plays. Requires <= 10 positions.
Solution brute_solve(const ParityGame& g);

/// Debug dump format: `pos ID (exists|forall) RANK`, `edge A B`, `init ID`.
ParityGame parse_game(const std::string& text);
std::string print_game(const ParityGame& g);

}  // namespace gfx
