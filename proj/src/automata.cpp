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

#include "gfx/automata.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace gfx {

bool LetterPattern::matches(const Letter& l) const {
  if (explicit_name) return l.is_explicit() && *l.name == *explicit_name;
  if (l.is_explicit())
    return require_pairs.empty() && forbid_pairs.empty() && require_consts.empty() &&
           forbid_consts.empty();
  const PhiType& p = *l.phi;
  for (const auto& q : require_pairs)
    if (!p.has(q)) return false;
  for (const auto& q : forbid_pairs)
    if (p.has(q)) return false;
  for (const auto& k : require_consts)
    if (!p.has_const(k)) return false;
  for (const auto& k : forbid_consts)
    if (p.has_const(k)) return false;
  return true;
}

std::string LetterPattern::render() const {
  if (explicit_name) return "letter:" + *explicit_name;
  std::string out;
  auto app = [&](const std::string& s) {
    if (!out.empty()) out += " ";
    out += s;
  };
  for (const auto& q : require_pairs) app("+pair:" + q.render());
  for (const auto& q : forbid_pairs) app("-pair:" + q.render());
  for (const auto& k : require_consts) app("const:" + k);
  for (const auto& k : forbid_consts) app("-const:" + k);
  if (out.empty()) out = "any";
  return out;
}

LetterPattern LetterPattern::letter(std::string name) {
  LetterPattern p;
  p.explicit_name = std::move(name);
  return p;
}

int AlternatingAutomaton::add_state(std::string name, Player player, int rank) {
  states.push_back({std::move(name), player, rank});
  rules.emplace_back();
  return static_cast<int>(states.size()) - 1;
}

void AlternatingAutomaton::add_rule(int from, LetterPattern pattern, Move dir, int to) {
  rules[from].push_back({std::move(pattern), dir, to});
}

int AlternatingAutomaton::state_id(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::pair<Move, int>> AlternatingAutomaton::delta(int state, const Letter& l) const {
  std::vector<std::pair<Move, int>> out;
  for (const auto& t : rules[state])
    if (t.pattern.matches(l)) out.push_back({t.dir, t.to});
  return out;
}

void AlternatingAutomaton::check_letter(const Letter& l) const {
  if (!structural) {
    if (!l.is_explicit() ||
        std::find(explicit_letters.begin(), explicit_letters.end(), *l.name) ==
            explicit_letters.end())
      throw std::invalid_argument("label outside alphabet: " + l.render());
    return;
  }
  if (l.is_explicit()) throw std::invalid_argument("label outside alphabet: " + l.render());
  const PhiType& p = *l.phi;
  auto known = [&](const std::string& k) {
    return std::find(pool.begin(), pool.end(), k) != pool.end();
  };
  for (const auto& k : p.carrier)
    if (!known(k)) throw std::invalid_argument("label outside alphabet: unknown constant " + k);
  for (const auto& q : p.pairs) {
    if (q.index < 0 || q.index >= formula_index_count)
      throw std::invalid_argument("label outside alphabet: pair index " + std::to_string(q.index));
    for (const auto& [var, k] : q.binding)
      if (!known(k)) throw std::invalid_argument("label outside alphabet: unknown constant " + k);
  }
}

// ---------------------------------------------------------------------------
// Acceptance games
// ---------------------------------------------------------------------------

namespace {

void check_input(const AlternatingAutomaton& a, const LabelledGraph& g) {
  if (g.has_self_loop())
    throw std::invalid_argument("automaton inputs must be simple graphs (no self-loops)");
  for (const auto& l : g.labels) a.check_letter(l);
}

// letter id per node (letters deduplicated by rendering) plus a delta cache
struct DeltaCache {
  const AlternatingAutomaton& a;
  std::vector<int> node_letter;
  std::vector<const Letter*> letters;
  std::vector<std::unordered_map<int, std::vector<std::pair<Move, int>>>> cache;

  DeltaCache(const AlternatingAutomaton& a_, const LabelledGraph& g) : a(a_), cache(a_.size()) {
    std::unordered_map<std::string, int> ids;
    node_letter.resize(g.size());
    for (size_t v = 0; v < g.size(); ++v) {
      auto [it, fresh] = ids.insert({g.labels[v].render(), static_cast<int>(letters.size())});
      if (fresh) letters.push_back(&g.labels[v]);
      node_letter[v] = it->second;
    }
  }

  const std::vector<std::pair<Move, int>>& delta(int state, int node) {
    int lid = node_letter[node];
    auto it = cache[state].find(lid);
    if (it == cache[state].end())
      it = cache[state].insert({lid, a.delta(state, *letters[lid])}).first;
    return it->second;
  }
};

}  // namespace

ParityGame acceptance_game(const AlternatingAutomaton& a, const LabelledGraph& g, int from) {
  if (from < 0 || from >= static_cast<int>(g.size()))
    throw std::invalid_argument("start node not in graph");
  check_input(a, g);
  DeltaCache dc(a, g);
  int q = static_cast<int>(a.size());
  ParityGame game;
  for (size_t v = 0; v < g.size(); ++v)
    for (int s = 0; s < q; ++s)
      game.add_position(a.states[s].player, a.states[s].rank,
                        g.node_names[v] + ":" + a.states[s].name);
  for (size_t v = 0; v < g.size(); ++v)
    for (int s = 0; s < q; ++s) {
      int pos = static_cast<int>(v) * q + s;
      for (const auto& [dir, to] : dc.delta(s, static_cast<int>(v))) {
        if (dir == Move::Stay) {
          game.add_edge(pos, static_cast<int>(v) * q + to);
        } else {
          for (int w : g.adj[v]) game.add_edge(pos, w * q + to);
        }
      }
    }
  game.initial = from * q + a.initial;
  return game;
}

namespace {

// Reachable fragment of the acceptance arena from the given seed positions.
// Successor-closed, so winners agree with the full arena.
struct ReachableArena {
  ParityGame game;
  std::vector<int> seed_position;  // per seed in input order
};

ReachableArena build_reachable(const AlternatingAutomaton& a, const LabelledGraph& g,
                               const std::vector<int>& seed_nodes) {
  check_input(a, g);
  DeltaCache dc(a, g);
  int q = static_cast<int>(a.size());
  ReachableArena out;
  std::unordered_map<int64_t, int> index;
  std::vector<int64_t> worklist;
  auto intern = [&](int node, int state) {
    int64_t key = static_cast<int64_t>(node) * q + state;
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = out.game.add_position(a.states[state].player, a.states[state].rank);
    index[key] = id;
    worklist.push_back(key);
    return id;
  };
  for (int v : seed_nodes) out.seed_position.push_back(intern(v, a.initial));
  for (size_t wi = 0; wi < worklist.size(); ++wi) {
    int64_t key = worklist[wi];
    int node = static_cast<int>(key / q), state = static_cast<int>(key % q);
    int pos = index.at(key);
    for (const auto& [dir, to] : dc.delta(state, node)) {
      if (dir == Move::Stay) {
        out.game.add_edge(pos, intern(node, to));
      } else {
        for (int w : g.adj[node]) out.game.add_edge(pos, intern(w, to));
      }
    }
  }
  if (!out.game.positions.empty()) out.game.initial = out.seed_position.empty() ? 0 : out.seed_position[0];
  return out;
}

}  // namespace

bool accepts(const AlternatingAutomaton& a, const LabelledGraph& g, int from) {
  if (from < 0 || from >= static_cast<int>(g.size()))
    throw std::invalid_argument("start node not in graph");
  auto arena = build_reachable(a, g, {from});
  Solution sol = solve(arena.game);
  return sol.winner[arena.seed_position[0]] == Player::Exists;
}

std::vector<char> accepts_all(const AlternatingAutomaton& a, const LabelledGraph& g) {
  std::vector<int> seeds(g.size());
  std::iota(seeds.begin(), seeds.end(), 0);
  auto arena = build_reachable(a, g, seeds);
  Solution sol = solve(arena.game);
  std::vector<char> out(g.size());
  for (size_t v = 0; v < g.size(); ++v)
    out[v] = sol.winner[arena.seed_position[v]] == Player::Exists;
  return out;
}

// ---------------------------------------------------------------------------
// Bounded nonemptiness
// ---------------------------------------------------------------------------

namespace {

// lexicographic canonical form of (labels, edges) under node permutations
bool graph_canonical(const std::vector<int>& labels, uint64_t edges, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> pair_idx(k, std::vector<int>(k, 0));
  {
    int c = 0;
    for (int x = 0; x < k; ++x)
      for (int y = x + 1; y < k; ++y, ++c) {
        pair_idx[x][y] = c;
        pair_idx[y][x] = c;
      }
  }
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<int> plabels(k);
    for (int i = 0; i < k; ++i) plabels[perm[i]] = labels[i];
    uint64_t pedges = 0;
    for (int x = 0; x < k; ++x)
      for (int y = x + 1; y < k; ++y)
        if (edges & (1ull << pair_idx[x][y])) pedges |= 1ull << pair_idx[perm[x]][perm[y]];
    if (plabels < labels || (plabels == labels && pedges < edges)) return false;
  }
  return true;
}

}  // namespace

NonemptinessResult bounded_nonemptiness(const AlternatingAutomaton& a, int max_nodes,
                                        const std::vector<std::string>& letter_pool) {
  if (letter_pool.empty()) throw std::invalid_argument("bounded_nonemptiness: empty letter pool");
  NonemptinessResult res;
  for (int k = 1; k <= max_nodes; ++k) {
    int pairs = k * (k - 1) / 2;
    std::vector<int> labels(k, 0);
    while (true) {
      for (uint64_t edges = 0; edges < (1ull << pairs); ++edges) {
        if (!graph_canonical(labels, edges, k)) continue;
        res.candidates++;
        LabelledGraph g;
        for (int i = 0; i < k; ++i)
          g.add_node("n" + std::to_string(i), Letter::make(letter_pool[labels[i]]));
        int c = 0;
        for (int x = 0; x < k; ++x)
          for (int y = x + 1; y < k; ++y, ++c)
            if (edges & (1ull << c)) g.add_edge(x, y);
        auto acc = accepts_all(a, g);
        for (int v = 0; v < k; ++v)
          if (acc[v]) {
            g.start = v;
            res.graph = std::move(g);
            return res;
          }
      }
      int i = 0;
      for (; i < k; ++i) {
        if (++labels[i] < static_cast<int>(letter_pool.size())) break;
        labels[i] = 0;
      }
      if (i == k) break;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

AlternatingAutomaton parse_automaton(const std::string& text) {
  AlternatingAutomaton a;
  bool have_alphabet = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
    };
    if (kw == "alphabet") {
      std::string kind;
      if (!(ls >> kind)) throw fail("expected alphabet kind");
      if (kind == "explicit") {
        std::string l;
        while (ls >> l) a.explicit_letters.push_back(l);
        a.structural = false;
      } else if (kind == "structural") {
        std::string word;
        if (!(ls >> word) || word != "count") throw fail("expected: alphabet structural count N pool ...");
        if (!(ls >> a.formula_index_count)) throw fail("expected subformula count");
        if (!(ls >> word) || word != "pool") throw fail("expected pool constants");
        std::string k;
        while (ls >> k) a.pool.push_back(k);
        a.structural = true;
      } else {
        throw fail("unknown alphabet kind: " + kind);
      }
      have_alphabet = true;
    } else if (kw == "state") {
      std::string id, owner, rank_kw;
      int rank;
      if (!(ls >> id >> owner >> rank_kw >> rank) || rank_kw != "rank" || rank < 0 ||
          (owner != "exists" && owner != "forall"))
        throw fail("expected: state ID (exists|forall) rank N [initial]");
      if (a.state_id(id) >= 0) throw fail("duplicate state " + id);
      int s = a.add_state(id, owner == "exists" ? Player::Exists : Player::Forall, rank);
      std::string init;
      if (ls >> init) {
        if (init != "initial") throw fail("unexpected token " + init);
        if (a.initial >= 0) throw fail("multiple initial states");
        a.initial = s;
      }
    } else if (kw == "trans") {
      std::string from;
      if (!(ls >> from)) throw fail("expected: trans FROM PATTERN (stay|move) TO");
      int fs = a.state_id(from);
      if (fs < 0) throw fail("unknown state " + from);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (toks.size() < 2) throw fail("expected: trans FROM PATTERN (stay|move) TO");
      std::string to_name = toks.back();
      std::string dir_name = toks[toks.size() - 2];
      if (dir_name != "stay" && dir_name != "move") throw fail("expected stay or move");
      int ts = a.state_id(to_name);
      if (ts < 0) throw fail("unknown state " + to_name);
      LetterPattern p;
      for (size_t i = 0; i + 2 < toks.size() + 0; ++i) {
        const std::string& tok = toks[i];
        if (tok == "any") continue;
        if (tok.rfind("letter:", 0) == 0) p.explicit_name = tok.substr(7);
        else if (tok.rfind("+pair:", 0) == 0) p.require_pairs.push_back(PhiPair::parse(tok.substr(6)));
        else if (tok.rfind("-pair:", 0) == 0) p.forbid_pairs.push_back(PhiPair::parse(tok.substr(6)));
        else if (tok.rfind("+const:", 0) == 0) p.require_consts.push_back(tok.substr(7));
        else if (tok.rfind("const:", 0) == 0) p.require_consts.push_back(tok.substr(6));
        else if (tok.rfind("-const:", 0) == 0) p.forbid_consts.push_back(tok.substr(7));
        else throw fail("bad pattern token: " + tok);
      }
      a.add_rule(fs, std::move(p), dir_name == "stay" ? Move::Stay : Move::MoveEdge, ts);
    } else {
      throw fail("unknown directive: " + kw);
    }
  }
  if (!have_alphabet) throw std::runtime_error("automaton file lacks an alphabet declaration");
  if (a.states.empty()) throw std::runtime_error("automaton has no states");
  if (a.initial < 0) throw std::runtime_error("automaton has no initial state");
  return a;
}

std::string print_automaton(const AlternatingAutomaton& a) {
  std::ostringstream out;
  if (a.structural) {
    out << "alphabet structural count " << a.formula_index_count << " pool";
    for (const auto& k : a.pool) out << " " << k;
    out << "\n";
  } else {
    out << "alphabet explicit";
    for (const auto& l : a.explicit_letters) out << " " << l;
    out << "\n";
  }
  for (size_t s = 0; s < a.size(); ++s) {
    out << "state " << a.states[s].name << " "
        << (a.states[s].player == Player::Exists ? "exists" : "forall") << " rank "
        << a.states[s].rank;
    if (static_cast<int>(s) == a.initial) out << " initial";
    out << "\n";
  }
  for (size_t s = 0; s < a.size(); ++s)
    for (const auto& t : a.rules[s])
      out << "trans " << a.states[s].name << " " << t.pattern.render() << " "
          << (t.dir == Move::Stay ? "stay" : "move") << " " << a.states[t.to].name << "\n";
  return out.str();
}

}  // namespace gfx
