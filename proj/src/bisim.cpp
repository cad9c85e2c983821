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

#include "gfx/bisim.hpp"

#include <algorithm>
#include <numeric>

namespace gfx {

const std::string* PartialIso::image(const std::string& x) const {
  for (const auto& [s, t] : pairs)
    if (s == x) return &t;
  return nullptr;
}

const std::string* PartialIso::preimage(const std::string& y) const {
  for (const auto& [s, t] : pairs)
    if (t == y) return &s;
  return nullptr;
}

namespace {

// All type-preserving bijections between two equal-sized guarded sets.
void seed_maps(const Structure& a, const std::vector<std::string>& ga, const Structure& b,
               const std::vector<std::string>& gb, std::vector<PartialIso>& out) {
  std::vector<int> perm(gb.size());
  std::iota(perm.begin(), perm.end(), 0);
  AtomicType ta = atomic_type(a, ga);
  do {
    std::vector<std::string> image(ga.size());
    for (size_t i = 0; i < ga.size(); ++i) image[i] = gb[perm[i]];
    AtomicType tb = atomic_type(b, image);
    if (ta.same_facts(tb)) {
      PartialIso iso;
      for (size_t i = 0; i < ga.size(); ++i) iso.pairs.push_back({ga[i], image[i]});
      std::sort(iso.pairs.begin(), iso.pairs.end());
      out.push_back(std::move(iso));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

bool agrees_forward(const PartialIso& alpha, const PartialIso& gamma) {
  for (const auto& [x, y] : alpha.pairs) {
    const std::string* g = gamma.image(x);
    if (g && *g != y) return false;
  }
  return true;
}

bool agrees_backward(const PartialIso& alpha, const PartialIso& gamma) {
  for (const auto& [x, y] : alpha.pairs) {
    const std::string* g = gamma.preimage(y);
    if (g && *g != x) return false;
  }
  return true;
}

bool covers_domain(const PartialIso& gamma, const std::set<std::string>& s) {
  for (const auto& x : s)
    if (!gamma.image(x)) return false;
  return true;
}

bool covers_range(const PartialIso& gamma, const std::set<std::string>& s) {
  for (const auto& y : s)
    if (!gamma.preimage(y)) return false;
  return true;
}

}  // namespace

GBisim max_guarded_bisim(const Structure& a, const Structure& b) {
  if (a.sig.relations != b.sig.relations)
    throw std::invalid_argument("max_guarded_bisim: signature mismatch");

  auto gsa = guarded_sets(a);
  auto gsb = guarded_sets(b);
  std::vector<PartialIso> maps;
  for (const auto& sa : gsa)
    for (const auto& sb : gsb) {
      if (sa.size() != sb.size()) continue;
      std::vector<std::string> va(sa.begin(), sa.end()), vb(sb.begin(), sb.end());
      seed_maps(a, va, b, vb, maps);
    }

  std::vector<std::set<std::string>> gsav(gsa.begin(), gsa.end()), gsbv(gsb.begin(), gsb.end());
  bool changed = true;
  while (changed) {
    changed = false;
    // per guarded set, which surviving maps cover it
    std::vector<std::vector<int>> cover_dom(gsav.size()), cover_rng(gsbv.size());
    for (size_t m = 0; m < maps.size(); ++m) {
      for (size_t i = 0; i < gsav.size(); ++i)
        if (covers_domain(maps[m], gsav[i])) cover_dom[i].push_back(static_cast<int>(m));
      for (size_t i = 0; i < gsbv.size(); ++i)
        if (covers_range(maps[m], gsbv[i])) cover_rng[i].push_back(static_cast<int>(m));
    }
    std::vector<PartialIso> kept;
    kept.reserve(maps.size());
    for (const auto& alpha : maps) {
      bool ok = true;
      for (size_t i = 0; i < gsav.size() && ok; ++i) {
        bool found = false;
        for (int m : cover_dom[i])
          if (agrees_forward(alpha, maps[m])) {
            found = true;
            break;
          }
        if (!found) ok = false;
      }
      for (size_t i = 0; i < gsbv.size() && ok; ++i) {
        bool found = false;
        for (int m : cover_rng[i])
          if (agrees_backward(alpha, maps[m])) {
            found = true;
            break;
          }
        if (!found) ok = false;
      }
      if (ok) kept.push_back(alpha);
      else changed = true;
    }
    maps = std::move(kept);
  }
  return GBisim{std::move(maps)};
}

bool guarded_bisimilar(const Structure& a, const std::vector<std::string>& atuple,
                       const Structure& b, const std::vector<std::string>& btuple) {
  if (atuple.size() != btuple.size())
    throw std::invalid_argument("guarded_bisimilar: tuple length mismatch");
  std::set<std::string> sa(atuple.begin(), atuple.end()), sb(btuple.begin(), btuple.end());
  if (!guarded_sets(a).count(sa) || !guarded_sets(b).count(sb))
    throw std::invalid_argument("guarded_bisimilar: tuple not guarded");
  // the componentwise assignment must itself be a well-defined injection
  std::map<std::string, std::string> fwd, bwd;
  for (size_t i = 0; i < atuple.size(); ++i) {
    auto [it, fresh] = fwd.insert({atuple[i], btuple[i]});
    if (!fresh && it->second != btuple[i]) return false;
    auto [jt, fresh2] = bwd.insert({btuple[i], atuple[i]});
    if (!fresh2 && jt->second != atuple[i]) return false;
  }
  GBisim z = max_guarded_bisim(a, b);
  for (const auto& alpha : z.maps) {
    bool ok = true;
    for (const auto& [x, y] : fwd) {
      const std::string* im = alpha.image(x);
      if (!im || *im != y) { ok = false; break; }
    }
    if (ok) return true;
  }
  return false;
}

bool undirected_bisimilar(const LabelledGraph& g0, int v0, const LabelledGraph& g1, int v1) {
  int n0 = static_cast<int>(g0.size());
  int n = n0 + static_cast<int>(g1.size());
  if (v0 < 0 || v0 >= n0 || v1 < 0 || v1 >= static_cast<int>(g1.size()))
    throw std::invalid_argument("undirected_bisimilar: node out of range");

  auto label = [&](int v) {
    return v < n0 ? g0.labels[v].render() : g1.labels[v - n0].render();
  };
  auto neighbours = [&](int v) {
    std::vector<int> out;
    if (v < n0)
      for (int w : g0.adj[v]) out.push_back(w);
    else
      for (int w : g1.adj[v - n0]) out.push_back(w + n0);
    return out;
  };

  std::vector<int> block(n);
  {
    std::map<std::string, int> by_label;
    for (int v = 0; v < n; ++v) {
      auto [it, fresh] = by_label.insert({label(v), static_cast<int>(by_label.size())});
      block[v] = it->second;
    }
  }
  while (true) {
    std::map<std::pair<int, std::set<int>>, int> sig_ids;
    std::vector<int> next(n);
    for (int v = 0; v < n; ++v) {
      std::set<int> nb;
      for (int w : neighbours(v)) nb.insert(block[w]);
      auto key = std::make_pair(block[v], std::move(nb));
      auto [it, fresh] = sig_ids.insert({key, static_cast<int>(sig_ids.size())});
      next[v] = it->second;
    }
    if (next == block) break;
    block = std::move(next);
  }
  return block[v0] == block[n0 + v1];
}

}  // namespace gfx
