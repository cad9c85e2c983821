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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gfx/logic.hpp"

namespace gfx {

/// Finite relational structure. Tables hold tuples of element ids (indices
/// into the universe). Closed world: absent tuples are false.
struct Structure {
  Signature sig;
  std::vector<std::string> universe;
  std::map<std::string, std::set<std::vector<int>>> tables;

  int elem_id(const std::string& name) const;
  const std::string& elem_name(int id) const { return universe[id]; }
  bool has_atom(const std::string& rel, const std::vector<int>& tuple) const;
  size_t atom_count() const;
  bool has_atoms() const { return atom_count() > 0; }
};

/// Parse the line-oriented structure format: `sig NAME ARITY`, `elem NAME`,
/// `atom REL e1 e2 ...`, `#` comments. Empty universes are rejected.
Structure parse_structure(const std::string& text);
std::string print_structure(const Structure& s);

/// All nonempty subsets of component-sets of single atoms.
std::set<std::set<std::string>> guarded_sets(const Structure& s);

/// Complete atomic type over an ordered carrier; facts are stored
/// positionally (indices into the carrier), so images under renamings
/// compare directly.
struct AtomicType {
  std::vector<std::string> carrier;
  std::set<std::pair<std::string, std::vector<int>>> facts;

  bool operator==(const AtomicType&) const = default;
  bool same_facts(const AtomicType& o) const { return facts == o.facts; }
};

/// Positive atoms of s lying entirely inside carrier (pairwise distinct
/// elements of the universe), rewritten over carrier positions.
AtomicType atomic_type(const Structure& s, const std::vector<std::string>& carrier);

using Valuation = std::map<std::string, std::string>;

/// Formula evaluation on one structure with fixpoint-relation caching.
/// Fixpoints are computed by Knaster-Tarski iteration from the empty (LFP)
/// or full (GFP) relation, inner fixpoints recomputed per outer round.
class Evaluator {
 public:
  explicit Evaluator(const Structure& s) : s_(s) {}
  bool eval(const FormulaPtr& f, const Valuation& v);

 private:
  using Tuple = std::vector<int>;
  using TupleSet = std::set<Tuple>;
  using Val = std::map<std::string, int>;
  using Env = std::map<std::string, std::shared_ptr<const TupleSet>>;

  const Structure& s_;
  std::map<std::string, std::shared_ptr<const TupleSet>> fix_cache_;

  bool ev(const FormulaPtr& f, const Val& val, Env& env);
  std::shared_ptr<const TupleSet> fixpoint(const FormulaPtr& f, const Val& val, Env& env);
};

bool evaluate(const Structure& s, const FormulaPtr& f, const Valuation& v);

/// Copy of s with every atom having more than n distinct components removed.
Structure normalize_width(const Structure& s, size_t n);

/// Stream of all structures with universe {1..k}, k <= max_size, over every
/// atom subset, deduplicated up to universe permutation. Deterministic order:
/// ascending k, then ascending atom bitmask of the canonical representative.
class StructureEnumerator {
 public:
  StructureEnumerator(Signature sig, int max_size);
  std::optional<Structure> next();

  /// Number of raw (non-deduplicated) structures for one universe size.
  static uint64_t raw_count(const Signature& sig, int k);

 private:
  Signature sig_;
  int max_size_;
  int k_ = 0;
  uint64_t mask_ = 0;
  uint64_t mask_count_ = 0;
  std::vector<std::pair<std::string, std::vector<int>>> atoms_;
  std::vector<std::vector<int>> perm_atom_maps_;  // atom index permutations

  void start_size(int k);
  bool is_canonical(uint64_t mask) const;
};

}  // namespace gfx
