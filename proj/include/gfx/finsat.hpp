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

#include "gfx/compiler.hpp"
#include "gfx/structures.hpp"

namespace gfx {

enum class FinsatMode { Direct, ViaAutomaton };

/// Bounded search outcome. A missing model means "none up to the bound",
/// which is one-sided: it is not a proof of finite unsatisfiability.
struct FinSatVerdict {
  std::optional<Structure> model;
  int bound = 0;
  uint64_t candidates = 0;
  double elapsed_seconds = 0.0;
  bool found() const { return model.has_value(); }
};

/// Enumerate structures up to max_size (isomorphism-reduced) and return the
/// first model of f. Direct mode checks candidates with evaluate; automaton
/// mode runs the compiled pipeline on each candidate (atomless candidates
/// fall back to direct evaluation). Any returned model is re-verified with
/// evaluate before returning.
FinSatVerdict finsat_bounded(const FormulaPtr& f, const Signature& sig, int max_size,
                             FinsatMode mode, int threads = 1);

/// Width-normalize, build the model tabloid, label it and run the compiled
/// automaton from one node of G_phi. Requires the candidate to keep at least
/// one atom after normalization.
bool pipeline_accepts(const CompiledAutomaton& ca, const Structure& a, int from = 0);

/// Same, reporting the verdict for every start node of G_phi.
std::vector<char> pipeline_accepts_all(const CompiledAutomaton& ca, const Structure& a);

}  // namespace gfx
