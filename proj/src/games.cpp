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

#include "gfx/games.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gfx {

int ParityGame::add_position(Player owner, int rank, std::string name) {
  positions.push_back({owner, rank});
  succ.emplace_back();
  names.push_back(std::move(name));
  return static_cast<int>(positions.size()) - 1;
}

namespace {

// Zielonka on a totalized arena. Dead ends are redirected to a losing sink
// for their owner before solving, which keeps every subgame total.
class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) : n_(static_cast<int>(g.size())) {
    owner_.reserve(n_ + 2);
    rank_.reserve(n_ + 2);
    succ_.resize(n_ + 2);
    for (int v = 0; v < n_; ++v) {
      owner_.push_back(g.positions[v].owner);
      rank_.push_back(g.positions[v].rank);
    }
    int sink_even = n_;      // Exists wins here forever
    int sink_odd = n_ + 1;   // Forall wins here forever
    owner_.push_back(Player::Exists);
    rank_.push_back(0);
    owner_.push_back(Player::Exists);
    rank_.push_back(1);
    succ_[sink_even].push_back(sink_even);
    succ_[sink_odd].push_back(sink_odd);
    for (int v = 0; v < n_; ++v) {
      if (g.succ[v].empty())
        succ_[v].push_back(g.positions[v].owner == Player::Exists ? sink_odd : sink_even);
      else
        succ_[v] = g.succ[v];
    }
    total_ = n_ + 2;
    pred_.resize(total_);
    for (int v = 0; v < total_; ++v)
      for (int w : succ_[v]) pred_[w].push_back(v);
    winner_.assign(total_, Player::Exists);
    strategy_.assign(total_, -1);
    alive_.assign(total_, 1);
  }

  Solution run() {
    solve_region();
    Solution out;
    out.winner.assign(winner_.begin(), winner_.begin() + n_);
    out.strategy.assign(n_, -1);
    for (int v = 0; v < n_; ++v) {
      if (winner_[v] == owner_[v] && strategy_[v] >= 0 && strategy_[v] < n_)
        out.strategy[v] = strategy_[v];
    }
    return out;
  }

 private:
  int n_, total_;
  std::vector<Player> owner_;
  std::vector<int> rank_;
  std::vector<std::vector<int>> succ_, pred_;
  std::vector<Player> winner_;
  std::vector<int> strategy_;
  std::vector<char> alive_;

  // Attractor of `targets` for player p within the alive region. Marks the
  // result in `in_a` and records p's attracting moves in `strat`.
  std::vector<int> attractor(const std::vector<int>& targets, Player p, std::vector<char>& in_a,
                             std::vector<int>& strat) {
    std::vector<int> cnt(total_, 0);
    for (int v = 0; v < total_; ++v)
      if (alive_[v])
        for (int w : succ_[v])
          if (alive_[w]) cnt[v]++;
    std::vector<int> queue = targets, result = targets;
    for (int t : targets) in_a[t] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int v : pred_[u]) {
        if (!alive_[v] || in_a[v]) continue;
        if (owner_[v] == p) {
          in_a[v] = 1;
          strat[v] = u;
          queue.push_back(v);
          result.push_back(v);
        } else if (--cnt[v] == 0) {
          in_a[v] = 1;
          queue.push_back(v);
          result.push_back(v);
        }
      }
    }
    return result;
  }

  void solve_region() {
    // positions assigned and removed within this invocation; restored on
    // return so the caller sees its region intact (winner labels persist)
    std::vector<int> removed;
    auto restore_and_return = [&] {
      for (int v : removed) alive_[v] = 1;
    };
    while (true) {
      int m = -1;
      for (int v = 0; v < total_; ++v)
        if (alive_[v]) m = std::max(m, rank_[v]);
      if (m < 0) {
        restore_and_return();
        return;
      }
      Player p = (m % 2 == 0) ? Player::Exists : Player::Forall;

      std::vector<int> tops;
      for (int v = 0; v < total_; ++v)
        if (alive_[v] && rank_[v] == m) tops.push_back(v);

      std::vector<char> in_a(total_, 0);
      std::vector<int> attr_strat(total_, -1);
      auto a = attractor(tops, p, in_a, attr_strat);

      for (int v : a) alive_[v] = 0;
      solve_region();
      for (int v : a) alive_[v] = 1;
      // after the recursive call every alive position outside A carries its
      // final winner for the subgame
      std::vector<int> w_opp;
      for (int v = 0; v < total_; ++v)
        if (alive_[v] && !in_a[v] && winner_[v] == opponent(p)) w_opp.push_back(v);

      if (w_opp.empty()) {
        for (int v = 0; v < total_; ++v) {
          if (!alive_[v] || !in_a[v]) continue;
          winner_[v] = p;
          if (owner_[v] == p) {
            if (attr_strat[v] >= 0) {
              strategy_[v] = attr_strat[v];
            } else {
              // max-rank position: any alive successor keeps the play in R
              for (int w : succ_[v])
                if (alive_[w]) { strategy_[v] = w; break; }
            }
          }
        }
        restore_and_return();
        return;
      }

      std::vector<char> in_b(total_, 0);
      std::vector<int> b_strat(total_, -1);
      auto b = attractor(w_opp, opponent(p), in_b, b_strat);
      std::vector<char> in_wopp(total_, 0);
      for (int v : w_opp) in_wopp[v] = 1;
      for (int v : b) {
        winner_[v] = opponent(p);
        if (!in_wopp[v] && owner_[v] == opponent(p) && b_strat[v] >= 0) strategy_[v] = b_strat[v];
        alive_[v] = 0;  // assigned for the rest of this invocation
        removed.push_back(v);
      }
      // loop on the remaining region
    }
  }
};

}  // namespace

Solution solve(const ParityGame& g) { return Zielonka(g).run(); }

// ---------------------------------------------------------------------------
// Brute force oracle
// ---------------------------------------------------------------------------

namespace {

// Restricted play graph for one player's fixed positional strategy: the
// player's positions keep one edge (or none), the opponent keeps all.
struct PlayGraph {
  const ParityGame& g;
  Player p;
  const std::vector<int>& choice;  // successor index per p-owned position, -1 if dead end

  std::vector<int> succs(int v) const {
    if (g.positions[v].owner == p) {
      if (choice[v] < 0) return {};
      return {g.succ[v][choice[v]]};
    }
    return g.succ[v];
  }
};

// A play consistent with the strategy is bad for p iff it reaches a p-owned
// dead end or can loop a cycle whose maximum rank has the opponent's parity.
bool wins_from(const PlayGraph& pg, int start) {
  int n = static_cast<int>(pg.g.size());
  std::vector<char> reach(n, 0);
  std::vector<int> stack{start};
  reach[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    auto ss = pg.succs(v);
    if (ss.empty() && pg.g.positions[v].owner == pg.p) return false;  // p stuck
    for (int w : ss)
      if (!reach[w]) {
        reach[w] = 1;
        stack.push_back(w);
      }
  }
  bool even_good = pg.p == Player::Exists;
  for (int w = 0; w < n; ++w) {
    if (!reach[w]) continue;
    int r = pg.g.positions[w].rank;
    bool bad_parity = even_good ? (r % 2 == 1) : (r % 2 == 0);
    if (!bad_parity) continue;
    // cycle through w using only ranks <= r
    std::vector<char> seen(n, 0);
    std::vector<int> st;
    for (int u : pg.succs(w))
      if (pg.g.positions[u].rank <= r && !seen[u]) {
        seen[u] = 1;
        st.push_back(u);
      }
    bool cycle = seen[w] != 0;
    while (!cycle && !st.empty()) {
      int v = st.back();
      st.pop_back();
      for (int u : pg.succs(v)) {
        if (pg.g.positions[u].rank > r) continue;
        if (u == w) { cycle = true; break; }
        if (!seen[u]) {
          seen[u] = 1;
          st.push_back(u);
        }
      }
    }
    if (cycle) return false;
  }
  return true;
}

// Winning set of player p: union over that player's positional strategies of
// the positions from which every consistent play is good for p. Also reports
// one strategy winning on the whole set (exists by positional determinacy).
std::pair<std::vector<char>, std::vector<int>> brute_region(const ParityGame& g, Player p) {
  int n = static_cast<int>(g.size());
  std::vector<int> mine;
  for (int v = 0; v < n; ++v)
    if (g.positions[v].owner == p && !g.succ[v].empty()) mine.push_back(v);

  uint64_t count = 1;
  for (int v : mine) {
    count *= g.succ[v].size();
    if (count > 4000000ull) throw std::invalid_argument("brute_solve strategy space too large");
  }

  std::vector<char> region(n, 0);
  std::vector<int> best_choice(n, -1);
  size_t best_size = 0;
  std::vector<int> idx(mine.size(), 0);
  while (true) {
    std::vector<int> choice(n, -1);
    for (size_t i = 0; i < mine.size(); ++i) choice[mine[i]] = idx[i];
    PlayGraph pg{g, p, choice};
    std::vector<char> wins(n, 0);
    size_t sz = 0;
    for (int v = 0; v < n; ++v)
      if (wins_from(pg, v)) {
        wins[v] = 1;
        region[v] = 1;
        sz++;
      }
    if (sz > best_size) {
      best_size = sz;
      best_choice = choice;
    }
    size_t i = 0;
    for (; i < mine.size(); ++i) {
      if (++idx[i] < static_cast<int>(g.succ[mine[i]].size())) break;
      idx[i] = 0;
    }
    if (i == mine.size()) break;
    if (mine.empty()) break;
  }
  return {region, best_choice};
}

}  // namespace

Solution brute_solve(const ParityGame& g) {
  if (g.size() > 10) throw std::invalid_argument("brute_solve size bound exceeded");
  auto [we, ce] = brute_region(g, Player::Exists);
  auto [wf, cf] = brute_region(g, Player::Forall);
  int n = static_cast<int>(g.size());
  Solution out;
  out.winner.assign(n, Player::Exists);
  out.strategy.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (we[v] == wf[v])
      throw std::logic_error("brute_solve: determinacy violated at position " + std::to_string(v));
    out.winner[v] = we[v] ? Player::Exists : Player::Forall;
    Player o = g.positions[v].owner;
    if (out.winner[v] == o && !g.succ[v].empty()) {
      int c = o == Player::Exists ? ce[v] : cf[v];
      if (c >= 0) out.strategy[v] = g.succ[v][c];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dump format
// ---------------------------------------------------------------------------

ParityGame parse_game(const std::string& text) {
  ParityGame g;
  std::map<std::string, int> ids;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto lookup = [&](const std::string& id) {
    auto it = ids.find(id);
    if (it == ids.end())
      throw std::runtime_error("line " + std::to_string(lineno) + ": unknown position " + id);
    return it->second;
  };
  bool have_init = false;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "pos") {
      std::string id, owner;
      int rank;
      if (!(ls >> id >> owner >> rank) || (owner != "exists" && owner != "forall") || rank < 0)
        throw std::runtime_error("line " + std::to_string(lineno) + ": expected pos ID (exists|forall) RANK");
      if (ids.count(id))
        throw std::runtime_error("line " + std::to_string(lineno) + ": duplicate position " + id);
      ids[id] = g.add_position(owner == "exists" ? Player::Exists : Player::Forall, rank, id);
    } else if (kw == "edge") {
      std::string a, b;
      if (!(ls >> a >> b)) throw std::runtime_error("line " + std::to_string(lineno) + ": expected edge A B");
      g.add_edge(lookup(a), lookup(b));
    } else if (kw == "init") {
      std::string id;
      if (!(ls >> id)) throw std::runtime_error("line " + std::to_string(lineno) + ": expected init ID");
      g.initial = lookup(id);
      have_init = true;
    } else {
      throw std::runtime_error("line " + std::to_string(lineno) + ": unknown directive " + kw);
    }
  }
  if (g.positions.empty()) throw std::runtime_error("game has no positions");
  if (!have_init) g.initial = 0;
  return g;
}

std::string print_game(const ParityGame& g) {
  std::ostringstream out;
  auto name = [&](int v) {
    return (v < static_cast<int>(g.names.size()) && !g.names[v].empty()) ? g.names[v]
                                                                         : "p" + std::to_string(v);
  };
  for (size_t v = 0; v < g.size(); ++v)
    out << "pos " << name(static_cast<int>(v)) << " "
        << (g.positions[v].owner == Player::Exists ? "exists" : "forall") << " "
        << g.positions[v].rank << "\n";
  for (size_t v = 0; v < g.size(); ++v)
    for (int w : g.succ[v]) out << "edge " << name(static_cast<int>(v)) << " " << name(w) << "\n";
  out << "init " << name(g.initial) << "\n";
  return out.str();
}

}  // namespace gfx
