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

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfx {

/// Relational signature: relation name -> arity (>= 1).
struct Signature {
  std::map<std::string, int> relations;

  bool has(const std::string& name) const { return relations.count(name) > 0; }
  int arity(const std::string& name) const { return relations.at(name); }
  void add(const std::string& name, int arity);
};

enum class FKind {
  RelAtom,     // R(x1,...,xk)
  FixVarAtom,  // Z(x1,...,xk)
  Conj,
  Disj,
  Neg,
  TruthConst,  // true / false
  Exists,      // exists y1..yk . (guard & body)
  Forall,      // forall y1..yk . (guard -> body)
  Lfp,         // [lfp Z(z1..zk) . body](x1..xk)
  Gfp,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula tree. Field use depends on kind:
///   RelAtom/FixVarAtom: name + vars (arguments)
///   Conj/Disj: left, right
///   Neg: left
///   TruthConst: truth
///   Exists/Forall: vars (bound vars), left = guard atom, right = body
///   Lfp/Gfp: name (fixpoint variable), vars (parameters), left = body,
///            args (application arguments)
struct Formula {
  FKind kind;
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::string> args;
  bool truth = false;
  FormulaPtr left, right;
};

FormulaPtr mk_rel(std::string name, std::vector<std::string> vars);
FormulaPtr mk_fixvar(std::string name, std::vector<std::string> vars);
FormulaPtr mk_conj(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_disj(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_neg(FormulaPtr a);
FormulaPtr mk_truth(bool b);
FormulaPtr mk_exists(std::vector<std::string> bound, FormulaPtr guard, FormulaPtr body);
FormulaPtr mk_forall(std::vector<std::string> bound, FormulaPtr guard, FormulaPtr body);
FormulaPtr mk_lfp(std::string var, std::vector<std::string> params, FormulaPtr body,
                  std::vector<std::string> args);
FormulaPtr mk_gfp(std::string var, std::vector<std::string> params, FormulaPtr body,
                  std::vector<std::string> args);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
size_t formula_hash(const FormulaPtr& f);

/// Number of AST nodes.
size_t ast_size(const FormulaPtr& f);

/// Free first-order variables, sorted.
std::set<std::string> free_vars(const FormulaPtr& f);

/// All variable names appearing anywhere in f (free, bound, parameters).
std::set<std::string> all_vars(const FormulaPtr& f);

/// Relations occurring in f with their arities (arity taken from use).
std::map<std::string, int> relations_of(const FormulaPtr& f);

/// Max number of free variables over all subformula occurrences.
size_t width(const FormulaPtr& f);

/// Canonical text rendering; parse(print(f)) is structurally f.
std::string print_formula(const FormulaPtr& f);

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg);
};

/// Parse a formula in the workbench syntax against a signature.
/// Throws ParseError on bad syntax, unknown relations, arity mismatches
/// and unbound fixpoint variables.
FormulaPtr parse_formula(const std::string& text, const Signature& sig);

/// A formula file: `sig NAME ARITY` directive lines followed by (or mixed
/// with) the formula text itself.
struct FormulaFile {
  Signature sig;
  FormulaPtr formula;
};
FormulaFile parse_formula_file(const std::string& text);

enum class ViolationKind {
  FixpointGuard,          // guard names an enclosing fixpoint variable
  NonAtomicGuard,         // guard node is not a relational atom
  GuardNotCoveringBody,   // guard variables do not cover free vars of body
  BoundVarNotInGuard,     // bound variable missing from guard atom
  NegativeFixpointVar,    // fixpoint variable under an odd number of negations
  UnboundFixpointVar,     // no enclosing binder
  ParamCountMismatch,     // Z applied with wrong number of arguments
  ParamsNotGuarded,       // strict: z-parameters not explicitly guarded in body
  BodyFreeVarsBeyondParams,  // strict: fixpoint body has free vars outside z
};

struct Violation {
  ViolationKind kind;
  std::string path;  // dotted child indices from the root, "" = root
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Check the guarded-syntax invariants. In strict mode additionally require
/// explicitly guarded fixpoint parameters and parameter-closed bodies.
ValidationReport validate_guarded(const FormulaPtr& f, bool strict = false);

/// Negation normal form: negations pushed onto relational atoms, LFP/GFP and
/// the guarded quantifiers exchanged under negation.
FormulaPtr nnf(const FormulaPtr& f);

/// NNF of the negation of f.
FormulaPtr nnf_neg(const FormulaPtr& f);

/// All distinct subformulas in deterministic (preorder, dedup-keep-first)
/// order, followed by the positive and negative literals over the relations
/// of f and the variables appearing in f.
std::vector<FormulaPtr> subformulas(const FormulaPtr& f);

}  // namespace gfx
