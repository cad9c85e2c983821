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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gfx {

/// One (subformula-or-literal index, valuation into constants) pair of a
/// node label. Bindings are kept sorted by variable name.
struct PhiPair {
  int index = 0;
  std::vector<std::pair<std::string, std::string>> binding;

  auto operator<=>(const PhiPair&) const = default;
  std::string render() const;
  static PhiPair parse(const std::string& text);
};

/// A letter of the structural alphabet: a carrier set of constants plus a
/// canonically ordered set of pairs. Serialized bit-exactly via render().
struct PhiType {
  std::vector<std::string> carrier;  // sorted
  std::vector<PhiPair> pairs;        // sorted

  void canonicalize();
  bool has(const PhiPair& p) const;
  bool has_const(const std::string& k) const;
  bool operator==(const PhiType&) const = default;

  std::string render() const;
  static PhiType parse(const std::string& text);
};

/// Node label: an explicit letter name or a structural PhiType letter.
struct Letter {
  std::optional<std::string> name;  // explicit alphabet
  std::optional<PhiType> phi;      // structural alphabet

  bool is_explicit() const { return name.has_value(); }
  std::string render() const;
  static Letter parse(const std::string& text);
  static Letter make(std::string n) { return Letter{std::move(n), std::nullopt}; }
  static Letter make(PhiType p) { return Letter{std::nullopt, std::move(p)}; }
  bool operator==(const Letter&) const = default;
};

std::string letter_hash(const std::string& rendered);

/// Undirected node-labelled graph. Automaton inputs must be simple (no
/// self-loops); bisimulation checking tolerates self-loops.
struct LabelledGraph {
  std::vector<std::string> node_names;
  std::vector<Letter> labels;
  std::vector<std::set<int>> adj;
  int start = -1;

  int add_node(std::string name, Letter label);
  void add_edge(int a, int b);
  int node_id(const std::string& name) const;
  size_t size() const { return node_names.size(); }
  bool has_self_loop() const;
};

/// File format: `label HASH RENDERING`, `node ID HASH` (or `node ID
/// letter:NAME` inline), `edge A B`, `start ID`.
LabelledGraph parse_labelled_graph(const std::string& text);
std::string print_labelled_graph(const LabelledGraph& g);

/// Tree of walks from `from` of length <= depth, labels copied from the walk
/// terminal. Second component maps each tree node to its terminal node.
std::pair<LabelledGraph, std::vector<int>> unravel_graph(const LabelledGraph& g, int from,
                                                         int depth);

}  // namespace gfx
