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

#include "gfx/automata.hpp"
#include "gfx/logic.hpp"

namespace gfx {

/// Recorded bound: state count <= kStateBoundC * |phi| * (2n+1)^n * L, where
/// L is the number of ground signature literals over the 2n-constant pool.
constexpr int kStateBoundC = 4;

struct CompiledAutomaton {
  AlternatingAutomaton automaton;
  FormulaPtr formula;  // NNF source, defines the letter index space
  size_t width_n = 0;
  std::vector<std::string> pool;
  size_t state_count = 0;
  size_t ast_nodes = 0;
  size_t ground_literals = 0;  // L
  int bound_constant = kStateBoundC;
};

/// Compile a strict, NNF guarded fixpoint sentence of width n into an
/// alternating automaton over PhiType letters with a pool of 2n constants.
/// The automaton checks the start-node claim, audits letters for local and
/// cross-edge coherence, and verifies claims through the evaluation game;
/// LFP unfoldings carry odd ranks and GFP unfoldings even ones, outer
/// binders above inner ones.
CompiledAutomaton compile(const FormulaPtr& f);

/// Local coherence of a candidate letter: carrier deducible from the literal
/// pairs, complete and consistent atomic type over the carrier, pairwise
/// boolean closure, and no pairs for subformulas with free fixpoint
/// variables.
bool letter_check(const FormulaPtr& f, const std::vector<std::string>& pool,
                  const PhiType& candidate);

}  // namespace gfx
