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

#include "gfx/finsat.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "gfx/tabloids.hpp"

namespace gfx {

bool pipeline_accepts(const CompiledAutomaton& ca, const Structure& a, int from) {
  Structure an = normalize_width(a, ca.width_n);
  ModelTabloid mt = tabloid_of_model(an, ca.width_n);
  LabelledGraph gphi = phi_label(an, ca.formula, mt);
  return accepts(ca.automaton, gphi, from);
}

std::vector<char> pipeline_accepts_all(const CompiledAutomaton& ca, const Structure& a) {
  Structure an = normalize_width(a, ca.width_n);
  ModelTabloid mt = tabloid_of_model(an, ca.width_n);
  LabelledGraph gphi = phi_label(an, ca.formula, mt);
  return accepts_all(ca.automaton, gphi);
}

FinSatVerdict finsat_bounded(const FormulaPtr& f, const Signature& sig, int max_size,
                             FinsatMode mode, int threads) {
  auto start = std::chrono::steady_clock::now();
  auto report = validate_guarded(f, /*strict=*/true);
  if (!report.ok())
    throw std::invalid_argument("finsat: formula is not strictly guarded: " +
                                report.diagnostics.front().message);
  if (!free_vars(f).empty()) throw std::invalid_argument("finsat: formula must be a sentence");

  FormulaPtr fc = nnf(f);
  std::optional<CompiledAutomaton> compiled;
  if (mode == FinsatMode::ViaAutomaton && width(fc) >= 1) compiled = compile(fc);

  std::vector<Structure> candidates;
  {
    StructureEnumerator en(sig, max_size);
    while (auto s = en.next()) candidates.push_back(std::move(*s));
  }

  auto check_one = [&](const Structure& a) -> bool {
    if (mode == FinsatMode::Direct || !compiled) return evaluate(a, f, {});
    Structure an = normalize_width(a, compiled->width_n);
    if (!an.has_atoms()) return evaluate(a, f, {});
    return pipeline_accepts(*compiled, a, 0);
  };

  int64_t found = -1;
  uint64_t examined = 0;
  if (threads <= 1) {
    for (size_t i = 0; i < candidates.size(); ++i) {
      examined++;
      if (check_one(candidates[i])) {
        found = static_cast<int64_t>(i);
        break;
      }
    }
  } else {
    std::atomic<int64_t> best{static_cast<int64_t>(candidates.size())};
    std::atomic<uint64_t> count{0};
    auto worker = [&](int tid) {
      for (size_t i = tid; i < candidates.size(); i += threads) {
        if (static_cast<int64_t>(i) >= best.load(std::memory_order_relaxed)) break;
        count.fetch_add(1, std::memory_order_relaxed);
        if (check_one(candidates[i])) {
          int64_t cur = best.load();
          while (static_cast<int64_t>(i) < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
    examined = count.load();
    if (best.load() < static_cast<int64_t>(candidates.size())) found = best.load();
  }

  FinSatVerdict v;
  v.bound = max_size;
  v.candidates = examined;
  if (found >= 0) {
    const Structure& a = candidates[found];
    if (!evaluate(a, f, {}))
      throw std::logic_error("finsat: candidate accepted by the pipeline fails re-verification");
    v.model = a;
  }
  v.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

}  // namespace gfx
