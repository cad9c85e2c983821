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

#include "gfx/games.hpp"
#include "gfx/graph.hpp"

namespace gfx {

/// Conjunctive letter pattern: an explicit letter name, or a set of pair /
/// carrier-constant requirements against a structural PhiType letter.
struct LetterPattern {
  std::optional<std::string> explicit_name;
  std::vector<PhiPair> require_pairs;
  std::vector<PhiPair> forbid_pairs;
  std::vector<std::string> require_consts;
  std::vector<std::string> forbid_consts;

  bool matches(const Letter& l) const;
  std::string render() const;

  static LetterPattern any() { return {}; }
  static LetterPattern letter(std::string name);
};

enum class Move { Stay, MoveEdge };

struct Transition {
  LetterPattern pattern;
  Move dir;
  int to;
};

/// Alternating parity automaton on undirected labelled graphs. Transitions
/// are pattern rules; delta(q, letter) collects the matching rules, so the
/// map is total and computable for structural alphabets too.
struct AlternatingAutomaton {
  struct State {
    std::string name;
    Player player;
    int rank;
  };
  std::vector<State> states;
  int initial = -1;
  std::vector<std::vector<Transition>> rules;

  bool structural = false;
  std::vector<std::string> explicit_letters;  // when !structural
  std::vector<std::string> pool;              // when structural
  int formula_index_count = 0;                // when structural

  int add_state(std::string name, Player player, int rank);
  void add_rule(int from, LetterPattern pattern, Move dir, int to);
  int state_id(const std::string& name) const;
  size_t size() const { return states.size(); }

  std::vector<std::pair<Move, int>> delta(int state, const Letter& l) const;
  /// Throws std::invalid_argument when the label is outside the alphabet.
  void check_letter(const Letter& l) const;
};

/// The acceptance game per the transition rule: positions are all (node,
/// state) pairs, stay transitions stay, move transitions follow graph edges.
ParityGame acceptance_game(const AlternatingAutomaton& a, const LabelledGraph& g, int from);

/// True iff player Exists wins the acceptance game from (from, initial).
/// Solves only the reachable part of the arena, which preserves the winner.
bool accepts(const AlternatingAutomaton& a, const LabelledGraph& g, int from);

/// Acceptance verdict for every start node with a single solver run.
std::vector<char> accepts_all(const AlternatingAutomaton& a, const LabelledGraph& g);

struct NonemptinessResult {
  std::optional<LabelledGraph> graph;  // start recorded in graph.start
  uint64_t candidates = 0;
  bool found() const { return graph.has_value(); }
};

/// One-sided search: enumerate all letter_pool-labelled simple graphs with at
/// most max_nodes nodes up to isomorphism and report the first accepted
/// (graph, start) or exhaustion of the bounded space.
NonemptinessResult bounded_nonemptiness(const AlternatingAutomaton& a, int max_nodes,
                                        const std::vector<std::string>& letter_pool);

/// File format: `alphabet explicit N1 N2 ...` or `alphabet structural count N
/// pool k1 k2 ...`; `state ID (exists|forall) rank N [initial]`;
/// `trans FROM PATTERN... (stay|move) TO`.
AlternatingAutomaton parse_automaton(const std::string& text);
std::string print_automaton(const AlternatingAutomaton& a);

}  // namespace gfx
