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

/// Injective partial map between guarded subsets, stored as pairs sorted by
/// source element. Seeding guarantees it is a partial isomorphism.
struct PartialIso {
  std::vector<std::pair<std::string, std::string>> pairs;

  auto operator<=>(const PartialIso&) const = default;
  const std::string* image(const std::string& x) const;
  const std::string* preimage(const std::string& y) const;
};

struct GBisim {
  std::vector<PartialIso> maps;
  bool empty() const { return maps.empty(); }
};

/// Greatest set of type-preserving partial isomorphisms between guarded sets
/// closed under the back-and-forth conditions; computed by pruning from all
/// candidate seeds. May be empty.
GBisim max_guarded_bisim(const Structure& a, const Structure& b);

/// True iff the componentwise map atuple -> btuple extends to a member of the
/// maximal guarded bisimulation. Tuples may repeat elements; the underlying
/// sets must be guarded.
bool guarded_bisimilar(const Structure& a, const std::vector<std::string>& atuple,
                       const Structure& b, const std::vector<std::string>& btuple);

/// Coarsest label-respecting edge-back-and-forth relation, by partition
/// refinement on the disjoint union.
bool undirected_bisimilar(const LabelledGraph& g0, int v0, const LabelledGraph& g1, int v1);

}  // namespace gfx
