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

#include <algorithm>
#include <numeric>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "gfx/structures.hpp"

using namespace gfx;

TEST_CASE("structure parsing") {
  auto s = parse_structure("sig E 2\nelem a\nelem b\natom E a b\n");
  CHECK(s.universe.size() == 2);
  CHECK(s.atom_count() == 1);
  CHECK(s.has_atom("E", {0, 1}));

  auto empty = parse_structure("sig E 2\nelem a\n");
  CHECK(empty.atom_count() == 0);

  CHECK_THROWS_AS(parse_structure("sig E 2\nelem a\natom E a c\n"), ParseError);
  CHECK_THROWS_AS(parse_structure("sig E 2\n"), ParseError);  // empty universe
  CHECK_THROWS_AS(parse_structure("sig E 2\nelem a\natom F a a\n"), ParseError);
  CHECK_THROWS_AS(parse_structure("sig E 2\nelem a\natom E a\n"), ParseError);

  auto back = parse_structure(print_structure(s));
  CHECK(print_structure(back) == print_structure(s));
}

TEST_CASE("guarded sets") {
  auto gs1 = guarded_sets(corpus::one_edge());
  CHECK(gs1 == std::set<std::set<std::string>>{{"a"}, {"b"}, {"a", "b"}});

  auto gs2 = guarded_sets(corpus::self_loop());
  CHECK(gs2 == std::set<std::set<std::string>>{{"a"}});

  auto gs3 = guarded_sets(corpus::chain2());
  CHECK(gs3 ==
        std::set<std::set<std::string>>{{"a"}, {"b"}, {"c"}, {"a", "b"}, {"b", "c"}});
}

TEST_CASE("atomic types") {
  auto s = corpus::one_edge();
  auto t = atomic_type(s, {"a", "b"});
  CHECK(t.facts == std::set<std::pair<std::string, std::vector<int>>>{{"E", {0, 1}}});
  auto t2 = atomic_type(s, {"b", "a"});
  CHECK(t2.facts == std::set<std::pair<std::string, std::vector<int>>>{{"E", {1, 0}}});
  auto t3 = atomic_type(s, {"a"});
  CHECK(t3.facts.empty());
  CHECK_THROWS_AS(atomic_type(s, {"a", "a"}), std::invalid_argument);
}

TEST_CASE("evaluate on the spec examples") {
  auto loop = corpus::self_loop();
  CHECK(evaluate(loop, parse_formula("exists x y . (E(x,y) & true)", corpus::sig_e()), {}));
  CHECK_FALSE(evaluate(loop, corpus::f_inf(), {}));

  auto chain = corpus::one_edge();
  auto lfp = parse_formula("[lfp Z(z) . forall v . (E(v,z) -> Z(v))](x)", corpus::sig_e());
  CHECK(evaluate(chain, lfp, {{"x", "a"}}));
  CHECK(evaluate(chain, lfp, {{"x", "b"}}));
  CHECK_FALSE(evaluate(loop, lfp, {{"x", "a"}}));
}

TEST_CASE("evaluate requires a complete valuation") {
  auto s = corpus::one_edge();
  auto f = parse_formula("E(x,y)", corpus::sig_e());
  CHECK_THROWS_AS(evaluate(s, f, {{"x", "a"}}), std::invalid_argument);
  CHECK(evaluate(s, f, {{"x", "a"}, {"y", "b"}}));
}

TEST_CASE("evaluate is isomorphism invariant") {
  std::mt19937 rng(3);
  auto formulas = corpus::sentences();
  auto open = corpus::open_formulas();
  for (int round = 0; round < 20; ++round) {
    auto s = corpus::random_structure(rng, corpus::sig_e(), 4, false);
    std::vector<int> perm(s.universe.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto sp = corpus::permuted(s, perm);
    for (const auto& f : formulas) CHECK(evaluate(s, f, {}) == evaluate(sp, f, {}));
    // open formulas under the permuted valuation
    for (const auto& f : open) {
      auto fv = free_vars(f);
      Valuation v, vp;
      size_t i = 0;
      for (const auto& x : fv) {
        int elem = static_cast<int>(i++ % s.universe.size());
        v[x] = s.universe[elem];
        vp[x] = s.universe[elem];  // permuted() keeps element names
      }
      CHECK(evaluate(s, f, v) == evaluate(sp, f, vp));
    }
  }
}

TEST_CASE("one-step fixpoint operators are monotone") {
  // the body of the infinity axiom's LFP, with the fixpoint variable
  // replaced by an explicit unary relation
  Signature sig;
  sig.add("E", 2);
  sig.add("ZR", 1);
  auto body = parse_formula("forall v . (E(v,z) -> ZR(v))", sig);

  std::mt19937 rng(17);
  for (int round = 0; round < 60; ++round) {
    auto s = corpus::random_structure(rng, corpus::sig_e(), 4, false);
    Structure base;
    base.sig = sig;
    base.universe = s.universe;
    base.tables = s.tables;
    int n = static_cast<int>(s.universe.size());
    // random S subset of S'
    std::set<std::vector<int>> small, big;
    for (int e = 0; e < n; ++e) {
      int r = std::uniform_int_distribution<int>(0, 2)(rng);
      if (r == 2) { small.insert({e}); big.insert({e}); }
      else if (r == 1) big.insert({e});
    }
    Structure s_small = base, s_big = base;
    s_small.tables["ZR"] = small;
    s_big.tables["ZR"] = big;
    for (int e = 0; e < n; ++e) {
      Valuation v{{"z", base.universe[e]}};
      bool step_small = evaluate(s_small, body, v);
      bool step_big = evaluate(s_big, body, v);
      if (step_small) CHECK(step_big);  // monotone
    }
  }
}

TEST_CASE("LFP and GFP are dual under negation") {
  auto lfp = parse_formula("[lfp Z(z) . forall v . (E(v,z) -> Z(v))](x)", corpus::sig_e());
  auto dual = nnf_neg(lfp);
  REQUIRE(dual->kind == FKind::Gfp);
  for (const auto& [name, s] : corpus::structures()) {
    for (const auto& e : s.universe) {
      Valuation v{{"x", e}};
      CHECK(evaluate(s, lfp, v) == !evaluate(s, dual, v));
    }
  }
}

TEST_CASE("nnf preserves evaluation across the corpus") {
  std::mt19937 rng(23);
  std::vector<FormulaPtr> formulas = corpus::sentences();
  for (int i = 0; i < 25; ++i) formulas.push_back(corpus::random_sentence(rng, 25));
  std::vector<Structure> structs;
  for (const auto& [name, s] : corpus::structures()) structs.push_back(s);
  for (int i = 0; i < 10; ++i)
    structs.push_back(corpus::random_structure(rng, corpus::sig_ep(), 3, false));
  for (const auto& f : formulas)
    for (const auto& s : structs) {
      bool covered = true;
      for (const auto& [rel, arity] : relations_of(f))
        if (!s.sig.has(rel)) covered = false;
      if (!covered) continue;
      bool direct = evaluate(s, f, {});
      CHECK(evaluate(s, nnf(f), {}) == direct);
      CHECK(evaluate(s, nnf_neg(f), {}) == !direct);
    }
}

TEST_CASE("normalize_width drops only wide atoms") {
  Signature s3;
  s3.add("R", 3);
  Structure s;
  s.sig = s3;
  s.universe = {"a", "b", "c"};
  s.tables["R"].insert({0, 1, 2});
  s.tables["R"].insert({0, 0, 1});
  auto n2 = normalize_width(s, 2);
  CHECK(n2.atom_count() == 1);
  CHECK(n2.has_atom("R", {0, 0, 1}));
  auto n3 = normalize_width(s, 3);
  CHECK(n3.atom_count() == 2);

  // preserves evaluation for width-bounded formulas
  auto f = parse_formula("exists x y . (R(x,x,y) & true)", s3);
  REQUIRE(width(f) == 2);
  CHECK(evaluate(s, f, {}) == evaluate(n2, f, {}));
}

TEST_CASE("structure enumeration counts") {
  {
    StructureEnumerator en(corpus::sig_e(), 1);
    int count = 0;
    while (en.next()) count++;
    CHECK(count == 2);
  }
  {
    StructureEnumerator en(corpus::sig_e(), 2);
    int count = 0, size2 = 0;
    while (auto s = en.next()) {
      count++;
      if (s->universe.size() == 2) size2++;
    }
    CHECK(size2 == 10);  // Burnside: (16 + 4) / 2
    CHECK(count == 12);
  }
  CHECK(StructureEnumerator::raw_count(corpus::sig_e(), 1) == 2);
  CHECK(StructureEnumerator::raw_count(corpus::sig_e(), 2) == 16);  // raw, before dedup

  // representatives are canonical: no two enumerated structures isomorphic
  {
    StructureEnumerator en(corpus::sig_e(), 3);
    std::vector<Structure> all;
    while (auto s = en.next()) all.push_back(std::move(*s));
    // spot-check: applying any permutation never yields a *different*
    // enumerated structure
    std::set<std::string> prints;
    for (const auto& s : all) prints.insert(print_structure(s));
    CHECK(prints.size() == all.size());
  }
}

TEST_CASE("enumeration matches a brute-force isomorphism count") {
  // independent oracle: dedup all 2^9 size-3 structures by the minimum
  // permuted rendering
  std::set<std::string> classes;
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  for (int mask = 0; mask < (1 << 9); ++mask) {
    std::string best;
    for (const auto& p : perms) {
      // rename elements through p, then render
      Structure s;
      s.sig = corpus::sig_e();
      s.universe = {"1", "2", "3"};
      for (int i = 0; i < 9; ++i)
        if (mask & (1 << i)) s.tables["E"].insert({p[i / 3], p[i % 3]});
      std::string r = print_structure(s);
      if (best.empty() || r < best) best = r;
    }
    classes.insert(best);
  }
  int size3 = 0;
  StructureEnumerator en(corpus::sig_e(), 3);
  while (auto s = en.next())
    if (s->universe.size() == 3) size3++;
  CHECK(static_cast<size_t>(size3) == classes.size());
  // Burnside over S3: (2^9 + 3*2^5 + 2*2^3) / 6
  CHECK(size3 == 104);
}

TEST_CASE("enumeration counts at size 4 match the orbit count") {
  // Burnside over S4: (2^16 + 6*2^10 + 8*2^6 + 3*2^8 + 6*2^4) / 24 = 3044
  StructureEnumerator en(corpus::sig_e(), 4);
  int total = 0, size4 = 0;
  while (auto s = en.next()) {
    total++;
    if (s->universe.size() == 4) size4++;
  }
  CHECK(size4 == 3044);
  CHECK(total == 2 + 10 + 104 + 3044);
}

TEST_CASE("enumeration order is deterministic") {
  StructureEnumerator a(corpus::sig_e(), 2), b(corpus::sig_e(), 2);
  while (true) {
    auto x = a.next();
    auto y = b.next();
    CHECK(x.has_value() == y.has_value());
    if (!x) break;
    CHECK(print_structure(*x) == print_structure(*y));
  }
}
