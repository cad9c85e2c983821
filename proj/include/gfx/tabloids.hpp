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

#include "gfx/graph.hpp"
#include "gfx/structures.hpp"

namespace gfx {

/// Undirected graph whose nodes carry a constant set K_v and a complete
/// atomic type over K_v; adjacent types must agree on shared constants.
struct Tabloid {
  std::vector<std::string> pool;  // the constant pool K
  Signature sig;
  std::vector<std::string> node_names;
  std::vector<std::vector<std::string>> constants_of;  // sorted K_v
  std::vector<AtomicType> type_of;                     // carrier == constants_of[v]
  std::vector<std::set<int>> adj;

  int add_node(std::string name, std::vector<std::string> constants, AtomicType type);
  void add_edge(int a, int b);
  int node_id(const std::string& name) const;
  size_t size() const { return node_names.size(); }
};

struct TabloidReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Every edge must agree on shared constants and every type must live over
/// exactly the node's constant set.
TabloidReport validate_tabloid(const Tabloid& t);

struct TreeTabloid {
  Tabloid graph;
  int root = 0;
};

/// Wrap a tabloid as a tree tabloid, checking connectivity and acyclicity.
TreeTabloid as_tree_tabloid(Tabloid t, int root);

/// Tree of walks from `from` of length <= depth with labels copied through
/// the terminal-node projection (returned as second component).
std::pair<TreeTabloid, std::vector<int>> unravel(const Tabloid& t, int from, int depth);

/// The structure decoded from a tree tabloid: elements are equivalence
/// classes [v,c] of node-constant pairs joined along constant-preserving
/// paths; facts are contributed by every node's type.
struct DecodeResult {
  Structure structure;
  std::map<std::pair<int, std::string>, int> class_of;  // (node, constant) -> element id
};
DecodeResult decode(const TreeTabloid& t);

/// File format: `const k1 k2 ...`, `sig NAME ARITY`, `node ID k_i,k_j,...`,
/// `fact ID R k_a k_b`, `edge ID ID`.
Tabloid parse_tabloid(const std::string& text);
std::string print_tabloid(const Tabloid& t);

/// The model-to-tabloid construction: one vertex per injection of each
/// guarded set of A into a pool of 2n constants, edges where the union of
/// two injections is an injective function.
struct ModelTabloid {
  Tabloid tabloid;
  // per node, the injection chi as (element id in A) -> constant, sorted
  std::vector<std::vector<std::pair<int, std::string>>> chi;
};
ModelTabloid tabloid_of_model(const Structure& a, size_t n);

/// Labels every vertex chi of the model tabloid with its phi-type: the pairs
/// (subformula index, eta) such that eta maps into K_chi and the subformula
/// holds in A under chi^-1 after eta. Subformulas with free fixpoint
/// variables carry no standalone truth value and are skipped.
LabelledGraph phi_label(const Structure& a, const FormulaPtr& f, const ModelTabloid& g);

/// True iff the subformula has an occurrence of a fixpoint variable not
/// bound within it.
bool has_free_fixvar(const FormulaPtr& f);

}  // namespace gfx
