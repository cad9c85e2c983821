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

#include <functional>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "gfx/logic.hpp"

using namespace gfx;

TEST_CASE("parse builds the expected tree") {
  Signature se = corpus::sig_e();
  auto f = parse_formula("exists x y . (E(x,y) & true)", se);
  REQUIRE(f->kind == FKind::Exists);
  CHECK(f->vars == std::vector<std::string>{"x", "y"});
  CHECK(f->left->kind == FKind::RelAtom);
  CHECK(f->left->name == "E");
  CHECK(f->right->kind == FKind::TruthConst);
  CHECK(f->right->truth);
}

TEST_CASE("the infinity axiom parses with a single LFP binder") {
  auto f = corpus::f_inf();
  int lfp_count = 0;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (!g) return;
    if (g->kind == FKind::Lfp) lfp_count++;
    walk(g->left);
    walk(g->right);
  };
  walk(f);
  CHECK(lfp_count == 1);
  CHECK(free_vars(f).empty());
}

TEST_CASE("parse errors") {
  Signature se = corpus::sig_e();
  CHECK_THROWS_AS(parse_formula("E(x)", se), ParseError);            // arity
  CHECK_THROWS_AS(parse_formula("F(x,y)", se), ParseError);          // unknown relation
  CHECK_THROWS_AS(parse_formula("Z(x)", se), ParseError);            // unbound fixpoint var
  CHECK_THROWS_AS(parse_formula("exists x . (E(x,x) & x = x)", se), ParseError);  // no equality
  CHECK_THROWS_AS(parse_formula("[lfp E(z) . E(z,z)](x)", se), ParseError);  // shadows relation
  CHECK_THROWS_AS(parse_formula("exists x . (E(x,x) &", se), ParseError);
}

TEST_CASE("print-parse roundtrip is the identity on corpus and random formulas") {
  Signature se = corpus::sig_e();
  for (const auto& f : corpus::sentences()) {
    auto back = parse_formula(print_formula(f), se);
    CHECK(equal(f, back));
  }
  for (const auto& f : corpus::open_formulas()) {
    auto back = parse_formula(print_formula(f), se);
    CHECK(equal(f, back));
  }
  std::mt19937 rng(7);
  Signature sep = corpus::sig_ep();
  for (int i = 0; i < 50; ++i) {
    auto f = corpus::random_sentence(rng, 25);
    auto back = parse_formula(print_formula(f), sep);
    CHECK(equal(f, back));
    auto again = parse_formula(print_formula(back), sep);
    CHECK(equal(back, again));
  }
}

TEST_CASE("validate_guarded accepts the infinity axiom, strictly too") {
  CHECK(validate_guarded(corpus::f_inf()).ok());
  CHECK(validate_guarded(corpus::f_inf(), /*strict=*/true).ok());
}

TEST_CASE("validate_guarded rejects the three seeded violations") {
  Signature se = corpus::sig_e();

  // fixpoint variable as a guard
  auto fixguard =
      parse_formula("[lfp Z(z) . exists x y . (Z(x,y) & true) | E(z,z)](u)", se);
  // the parser accepts the shape; validation must flag the guard
  auto rep1 = validate_guarded(fixguard);
  bool saw_fixguard = false;
  for (const auto& d : rep1.diagnostics)
    if (d.kind == ViolationKind::FixpointGuard) saw_fixguard = true;
  CHECK_FALSE(rep1.ok());
  CHECK(saw_fixguard);

  // positivity
  auto neg = parse_formula("[lfp Z(z) . !Z(z)](x)", se);
  auto rep2 = validate_guarded(neg);
  bool saw_neg = false;
  for (const auto& d : rep2.diagnostics)
    if (d.kind == ViolationKind::NegativeFixpointVar) saw_neg = true;
  CHECK_FALSE(rep2.ok());
  CHECK(saw_neg);

  // guard not covering a free variable of the body
  auto uncovered = parse_formula("exists x . (E(x,x) & E(x,y))", se);
  auto rep3 = validate_guarded(uncovered);
  bool saw_cover = false;
  for (const auto& d : rep3.diagnostics)
    if (d.kind == ViolationKind::GuardNotCoveringBody) saw_cover = true;
  CHECK_FALSE(rep3.ok());
  CHECK(saw_cover);
}

TEST_CASE("strict mode requires explicitly guarded parameters") {
  Signature se = corpus::sig_e();
  // body 'true' has no guard for z
  auto f = parse_formula("exists x . (E(x,x) & [lfp Z(z) . true | E(z,z)](x))", se);
  CHECK(validate_guarded(f).ok());
  auto rep = validate_guarded(f, /*strict=*/true);
  bool saw = false;
  for (const auto& d : rep.diagnostics)
    if (d.kind == ViolationKind::ParamsNotGuarded) saw = true;
  CHECK(saw);
}

TEST_CASE("width") {
  Signature se = corpus::sig_e();
  CHECK(width(parse_formula("exists x y . (E(x,y) & true)", se)) == 2);
  CHECK(width(corpus::f_inf()) == 2);
  Signature s3;
  s3.add("R", 3);
  CHECK(width(parse_formula("exists x y z . (R(x,y,z) & true)", s3)) == 3);

  // oracle: exhaustive scan over subformula occurrences
  std::function<size_t(const FormulaPtr&)> scan = [&](const FormulaPtr& g) -> size_t {
    size_t w = free_vars(g).size();
    if (g->left) w = std::max(w, scan(g->left));
    if (g->right) w = std::max(w, scan(g->right));
    return w;
  };
  for (const auto& f : corpus::sentences()) CHECK(width(f) == scan(f));
}

TEST_CASE("free variables") {
  Signature se = corpus::sig_e();
  auto atom = parse_formula("E(x,y)", se);
  CHECK(free_vars(atom) == std::set<std::string>{"x", "y"});
  CHECK(free_vars(corpus::f_inf()).empty());
  auto lfp = parse_formula("[lfp Z(z) . forall v . (E(v,z) -> Z(v))](x)", se);
  CHECK(free_vars(lfp) == std::set<std::string>{"x"});
}

TEST_CASE("nnf pushes negations to atoms and dualizes binders") {
  Signature se = corpus::sig_e();
  auto f = parse_formula("!(exists x y . (E(x,y) & !E(y,x)))", se);
  auto g = nnf(f);
  CHECK(equal(g, parse_formula("forall x y . (E(x,y) -> E(y,x))", se)));

  auto lfp = parse_formula("[lfp Z(z) . forall v . (E(v,z) -> Z(v))](x)", se);
  auto dual = nnf(mk_neg(lfp));
  CHECK(equal(dual, parse_formula("[gfp Z(z) . exists v . (E(v,z) & Z(v))](x)", se)));
}

TEST_CASE("nnf is idempotent and preserves width on the corpus") {
  std::mt19937 rng(11);
  std::vector<FormulaPtr> all = corpus::sentences();
  for (int i = 0; i < 40; ++i) all.push_back(corpus::random_sentence(rng, 25));
  for (const auto& f : all) {
    auto once = nnf(f);
    CHECK(equal(once, nnf(once)));
    CHECK(width(once) == width(f));
    auto neg = nnf_neg(f);
    CHECK(equal(neg, nnf(neg)));
    CHECK(width(neg) == width(f));
  }
}

TEST_CASE("subformulas") {
  Signature se = corpus::sig_e();
  auto t = parse_formula("true", se);
  auto subs_t = subformulas(t);
  REQUIRE(subs_t.size() == 1);
  CHECK(equal(subs_t[0], t));

  auto f = parse_formula("exists x y . (E(x,y) & true)", se);
  auto subs = subformulas(f);
  auto contains = [&](const FormulaPtr& g) {
    for (const auto& s : subs)
      if (equal(s, g)) return true;
    return false;
  };
  CHECK(contains(f));
  CHECK(contains(parse_formula("E(x,y)", se)));
  CHECK(contains(parse_formula("true", se)));
  CHECK(contains(parse_formula("E(y,x)", se)));          // literal over {x,y}
  CHECK(contains(parse_formula("!E(x,x)", se)));         // negative literal
  CHECK(equal(subs[0], f));                               // root first

  // golden count for the infinity axiom: 12 distinct tree subformulas plus
  // 2*5*5 literals over vars {v,w,x,y,z}, 3 positives already in the tree
  auto fi = subformulas(corpus::f_inf());
  CHECK(fi.size() == 59);

  // stable across runs
  auto fi2 = subformulas(corpus::f_inf());
  REQUIRE(fi.size() == fi2.size());
  for (size_t i = 0; i < fi.size(); ++i) CHECK(equal(fi[i], fi2[i]));
}

TEST_CASE("formula files carry their signature") {
  auto ff = parse_formula_file("sig E 2\n# comment\nexists x y . (E(x,y) & true)\n");
  CHECK(ff.sig.has("E"));
  CHECK(ff.formula->kind == FKind::Exists);
  CHECK_THROWS_AS(parse_formula_file("exists x y . (E(x,y) & true)\n"), ParseError);
}
