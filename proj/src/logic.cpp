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

#include "gfx/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace gfx {

void Signature::add(const std::string& name, int arity) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0])))
    throw std::invalid_argument("relation names must start with an uppercase letter: " + name);
  if (arity < 1) throw std::invalid_argument("relation arity must be >= 1: " + name);
  auto it = relations.find(name);
  if (it != relations.end() && it->second != arity)
    throw std::invalid_argument("relation redeclared with different arity: " + name);
  relations[name] = arity;
}

namespace {

FormulaPtr mk(FKind k) {
  auto f = std::make_shared<Formula>();
  const_cast<Formula&>(*f).kind = k;
  return f;
}

Formula& mut(const FormulaPtr& f) { return const_cast<Formula&>(*f); }

}  // namespace

FormulaPtr mk_rel(std::string name, std::vector<std::string> vars) {
  auto f = mk(FKind::RelAtom);
  mut(f).name = std::move(name);
  mut(f).vars = std::move(vars);
  return f;
}

FormulaPtr mk_fixvar(std::string name, std::vector<std::string> vars) {
  auto f = mk(FKind::FixVarAtom);
  mut(f).name = std::move(name);
  mut(f).vars = std::move(vars);
  return f;
}

FormulaPtr mk_conj(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FKind::Conj);
  mut(f).left = std::move(a);
  mut(f).right = std::move(b);
  return f;
}

FormulaPtr mk_disj(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FKind::Disj);
  mut(f).left = std::move(a);
  mut(f).right = std::move(b);
  return f;
}

FormulaPtr mk_neg(FormulaPtr a) {
  auto f = mk(FKind::Neg);
  mut(f).left = std::move(a);
  return f;
}

FormulaPtr mk_truth(bool b) {
  auto f = mk(FKind::TruthConst);
  mut(f).truth = b;
  return f;
}

FormulaPtr mk_exists(std::vector<std::string> bound, FormulaPtr guard, FormulaPtr body) {
  auto f = mk(FKind::Exists);
  mut(f).vars = std::move(bound);
  mut(f).left = std::move(guard);
  mut(f).right = std::move(body);
  return f;
}

FormulaPtr mk_forall(std::vector<std::string> bound, FormulaPtr guard, FormulaPtr body) {
  auto f = mk(FKind::Forall);
  mut(f).vars = std::move(bound);
  mut(f).left = std::move(guard);
  mut(f).right = std::move(body);
  return f;
}

FormulaPtr mk_lfp(std::string var, std::vector<std::string> params, FormulaPtr body,
                  std::vector<std::string> args) {
  auto f = mk(FKind::Lfp);
  mut(f).name = std::move(var);
  mut(f).vars = std::move(params);
  mut(f).left = std::move(body);
  mut(f).args = std::move(args);
  return f;
}

FormulaPtr mk_gfp(std::string var, std::vector<std::string> params, FormulaPtr body,
                  std::vector<std::string> args) {
  auto f = mk_lfp(std::move(var), std::move(params), std::move(body), std::move(args));
  mut(f).kind = FKind::Gfp;
  return f;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->vars != b->vars || a->args != b->args ||
      a->truth != b->truth)
    return false;
  return equal(a->left, b->left) && equal(a->right, b->right);
}

size_t formula_hash(const FormulaPtr& f) {
  if (!f) return 0x9e3779b9;
  size_t h = static_cast<size_t>(f->kind) * 1099511628211ULL;
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(std::hash<std::string>{}(f->name));
  for (const auto& v : f->vars) mix(std::hash<std::string>{}(v));
  mix(0xabcd);
  for (const auto& v : f->args) mix(std::hash<std::string>{}(v));
  mix(f->truth ? 7 : 3);
  mix(formula_hash(f->left));
  mix(formula_hash(f->right));
  return h;
}

size_t ast_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + ast_size(f->left) + ast_size(f->right);
}

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  switch (f->kind) {
    case FKind::RelAtom:
    case FKind::FixVarAtom:
      out.insert(f->vars.begin(), f->vars.end());
      break;
    case FKind::Conj:
    case FKind::Disj: {
      out = free_vars(f->left);
      auto r = free_vars(f->right);
      out.insert(r.begin(), r.end());
      break;
    }
    case FKind::Neg:
      out = free_vars(f->left);
      break;
    case FKind::TruthConst:
      break;
    case FKind::Exists:
    case FKind::Forall: {
      out = free_vars(f->left);
      auto r = free_vars(f->right);
      out.insert(r.begin(), r.end());
      for (const auto& v : f->vars) out.erase(v);
      break;
    }
    case FKind::Lfp:
    case FKind::Gfp: {
      out = free_vars(f->left);
      for (const auto& v : f->vars) out.erase(v);
      out.insert(f->args.begin(), f->args.end());
      break;
    }
  }
  return out;
}

std::set<std::string> all_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (!g) return;
    out.insert(g->vars.begin(), g->vars.end());
    out.insert(g->args.begin(), g->args.end());
    walk(g->left);
    walk(g->right);
  };
  walk(f);
  return out;
}

std::map<std::string, int> relations_of(const FormulaPtr& f) {
  std::map<std::string, int> out;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (!g) return;
    if (g->kind == FKind::RelAtom && !out.count(g->name))
      out[g->name] = static_cast<int>(g->vars.size());
    walk(g->left);
    walk(g->right);
  };
  walk(f);
  return out;
}

size_t width(const FormulaPtr& f) {
  size_t w = free_vars(f).size();
  if (f->left) w = std::max(w, width(f->left));
  if (f->right) w = std::max(w, width(f->right));
  return w;
}

namespace {

int prec(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Disj: return 1;
    case FKind::Conj: return 2;
    default: return 3;
  }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::RelAtom:
    case FKind::FixVarAtom:
      return f->name + "(" + join(f->vars, ",") + ")";
    case FKind::TruthConst:
      return f->truth ? "true" : "false";
    case FKind::Neg: {
      const auto& c = f->left;
      if (prec(c) == 3 && c->kind != FKind::Neg && c->kind != FKind::Exists &&
          c->kind != FKind::Forall && c->kind != FKind::Lfp && c->kind != FKind::Gfp)
        return "!" + print_formula(c);
      return "!(" + print_formula(c) + ")";
    }
    case FKind::Conj: {
      std::string l = prec(f->left) < 2 ? "(" + print_formula(f->left) + ")" : print_formula(f->left);
      std::string r =
          prec(f->right) <= 2 ? "(" + print_formula(f->right) + ")" : print_formula(f->right);
      return l + " & " + r;
    }
    case FKind::Disj: {
      std::string l = print_formula(f->left);
      std::string r =
          prec(f->right) <= 1 ? "(" + print_formula(f->right) + ")" : print_formula(f->right);
      return l + " | " + r;
    }
    case FKind::Exists:
      return "exists " + join(f->vars, " ") + " . (" + print_formula(f->left) + " & " +
             print_formula(f->right) + ")";
    case FKind::Forall:
      return "forall " + join(f->vars, " ") + " . (" + print_formula(f->left) + " -> " +
             print_formula(f->right) + ")";
    case FKind::Lfp:
      return "[lfp " + f->name + "(" + join(f->vars, ",") + ") . " + print_formula(f->left) +
             "](" + join(f->args, ",") + ")";
    case FKind::Gfp:
      return "[gfp " + f->name + "(" + join(f->vars, ",") + ") . " + print_formula(f->left) +
             "](" + join(f->args, ",") + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ParseError::ParseError(int line_, int col_, const std::string& msg)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                         ": " + msg),
      line(line_),
      col(col_) {}

namespace {

enum class Tok {
  LParen, RParen, LBrack, RBrack, Dot, Comma, Amp, Pipe, Bang, Arrow,
  Exists, Forall, Lfp, Gfp, True, False, LIdent, UIdent, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (text[i + j] == '\n') { line++; col = 1; }
      else col++;
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') bump(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) { bump(1); continue; }
    int tl = line, tc = col;
    auto push = [&](Tok k, std::string s) { out.push_back({k, std::move(s), tl, tc}); };
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') { push(Tok::Arrow, "->"); bump(2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, "("); bump(1); continue;
      case ')': push(Tok::RParen, ")"); bump(1); continue;
      case '[': push(Tok::LBrack, "["); bump(1); continue;
      case ']': push(Tok::RBrack, "]"); bump(1); continue;
      case '.': push(Tok::Dot, "."); bump(1); continue;
      case ',': push(Tok::Comma, ","); bump(1); continue;
      case '&': push(Tok::Amp, "&"); bump(1); continue;
      case '|': push(Tok::Pipe, "|"); bump(1); continue;
      case '!': push(Tok::Bang, "!"); bump(1); continue;
      case '=': throw ParseError(tl, tc, "equality is not part of the guarded syntax");
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        j++;
      std::string word = text.substr(i, j - i);
      bump(j - i);
      if (word == "exists") push(Tok::Exists, word);
      else if (word == "forall") push(Tok::Forall, word);
      else if (word == "lfp") push(Tok::Lfp, word);
      else if (word == "gfp") push(Tok::Gfp, word);
      else if (word == "true") push(Tok::True, word);
      else if (word == "false") push(Tok::False, word);
      else if (std::isupper(static_cast<unsigned char>(word[0]))) push(Tok::UIdent, word);
      else push(Tok::LIdent, word);
      continue;
    }
    throw ParseError(tl, tc, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig) : toks_(std::move(toks)), sig_(sig) {}

  FormulaPtr parse() {
    auto f = disj();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  std::vector<Token> toks_;
  const Signature& sig_;
  size_t pos_ = 0;
  // innermost-last scope of fixpoint variables with their parameter counts
  std::vector<std::pair<std::string, int>> scope_;

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token eat() { return toks_[pos_++]; }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) throw ParseError(cur().line, cur().col, "expected " + what);
    return eat();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur().line, cur().col, msg);
  }

  const int* lookup_fixvar(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  FormulaPtr disj() {
    auto f = conj();
    while (at(Tok::Pipe)) {
      eat();
      f = mk_disj(f, conj());
    }
    return f;
  }

  FormulaPtr conj() {
    auto f = unary();
    while (at(Tok::Amp)) {
      eat();
      f = mk_conj(f, unary());
    }
    return f;
  }

  FormulaPtr unary() {
    if (at(Tok::Bang)) {
      eat();
      return mk_neg(unary());
    }
    return primary();
  }

  std::vector<std::string> var_list_until_dot() {
    std::vector<std::string> vars;
    while (at(Tok::LIdent)) vars.push_back(eat().text);
    if (vars.empty()) fail("expected at least one bound variable");
    expect(Tok::Dot, "'.'");
    return vars;
  }

  std::vector<std::string> paren_var_list() {
    expect(Tok::LParen, "'('");
    std::vector<std::string> vars;
    vars.push_back(expect(Tok::LIdent, "a first-order variable").text);
    while (at(Tok::Comma)) {
      eat();
      vars.push_back(expect(Tok::LIdent, "a first-order variable").text);
    }
    expect(Tok::RParen, "')'");
    return vars;
  }

  // Uppercase applied atom. In guard position a fixpoint variable is accepted
  // here and rejected by validate_guarded, so the violation is reportable.
  FormulaPtr atom(bool guard_position) {
    Token name = expect(Tok::UIdent, "a relation atom");
    std::vector<std::string> args;
    expect(Tok::LParen, "'('");
    args.push_back(expect(Tok::LIdent, "a first-order variable").text);
    while (at(Tok::Comma)) {
      eat();
      args.push_back(expect(Tok::LIdent, "a first-order variable").text);
    }
    expect(Tok::RParen, "')'");
    if (const int* params = lookup_fixvar(name.text)) {
      if (guard_position) return mk_rel(name.text, args);  // flagged by validation
      if (static_cast<int>(args.size()) != *params)
        throw ParseError(name.line, name.col,
                         "arity mismatch: fixpoint variable " + name.text + " takes " +
                             std::to_string(*params) + " argument(s)");
      return mk_fixvar(name.text, args);
    }
    if (!sig_.has(name.text))
      throw ParseError(name.line, name.col,
                       "unknown relation or unbound fixpoint variable: " + name.text);
    if (static_cast<int>(args.size()) != sig_.arity(name.text))
      throw ParseError(name.line, name.col,
                       "arity mismatch: relation " + name.text + " has arity " +
                           std::to_string(sig_.arity(name.text)));
    return mk_rel(name.text, args);
  }

  FormulaPtr fixpoint() {
    expect(Tok::LBrack, "'['");
    bool least = at(Tok::Lfp);
    if (!least && !at(Tok::Gfp)) fail("expected 'lfp' or 'gfp'");
    eat();
    Token name = expect(Tok::UIdent, "a fixpoint variable");
    if (sig_.has(name.text))
      throw ParseError(name.line, name.col,
                       "fixpoint variable shadows relation: " + name.text);
    auto params = paren_var_list();
    for (size_t i = 0; i < params.size(); ++i)
      for (size_t j = i + 1; j < params.size(); ++j)
        if (params[i] == params[j])
          throw ParseError(name.line, name.col, "repeated fixpoint parameter: " + params[i]);
    expect(Tok::Dot, "'.'");
    scope_.emplace_back(name.text, static_cast<int>(params.size()));
    auto body = disj();
    scope_.pop_back();
    expect(Tok::RBrack, "']'");
    auto args = paren_var_list();
    if (args.size() != params.size())
      throw ParseError(name.line, name.col,
                       "arity mismatch: fixpoint " + name.text + " takes " +
                           std::to_string(params.size()) + " argument(s)");
    return least ? mk_lfp(name.text, params, body, args) : mk_gfp(name.text, params, body, args);
  }

  FormulaPtr primary() {
    switch (cur().kind) {
      case Tok::LParen: {
        eat();
        auto f = disj();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::True: eat(); return mk_truth(true);
      case Tok::False: eat(); return mk_truth(false);
      case Tok::Exists: {
        eat();
        auto vars = var_list_until_dot();
        expect(Tok::LParen, "'('");
        auto guard = atom(/*guard_position=*/true);
        expect(Tok::Amp, "'&'");
        auto body = disj();
        expect(Tok::RParen, "')'");
        return mk_exists(vars, guard, body);
      }
      case Tok::Forall: {
        eat();
        auto vars = var_list_until_dot();
        expect(Tok::LParen, "'('");
        auto guard = atom(/*guard_position=*/true);
        expect(Tok::Arrow, "'->'");
        auto body = disj();
        expect(Tok::RParen, "')'");
        return mk_forall(vars, guard, body);
      }
      case Tok::LBrack: return fixpoint();
      case Tok::UIdent: return atom(/*guard_position=*/false);
      default: fail("expected a formula");
    }
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
  return Parser(tokenize(text), sig).parse();
}

FormulaFile parse_formula_file(const std::string& text) {
  FormulaFile out;
  std::istringstream in(text);
  std::string line, body;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "sig") {
      std::string name;
      int arity;
      if (!(ls >> name >> arity)) throw ParseError(lineno, 1, "expected: sig NAME ARITY");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, 1, "trailing tokens after sig directive");
      try {
        out.sig.add(name, arity);
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, 1, e.what());
      }
      body += "\n";  // keep line numbers aligned
    } else {
      body += line;
      body += "\n";
    }
  }
  out.formula = parse_formula(body, out.sig);
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

struct BinderInfo {
  std::string name;
  int params;
  bool parity_at_entry;  // negation parity where the binder was entered
};

struct Validator {
  std::vector<Violation>* out;
  bool strict;
  std::vector<BinderInfo> binders;

  void report(ViolationKind k, const std::string& path, std::string msg) {
    out->push_back({k, path, std::move(msg)});
  }

  const BinderInfo* lookup(const std::string& name) const {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  // Does f contain a positive relational guard covering all of params?
  // Disjunctions require it on both sides, conjunctions on either.
  bool explicitly_guarded(const FormulaPtr& f, const std::vector<std::string>& params) const {
    auto covers = [&](const std::vector<std::string>& guard_vars) {
      for (const auto& p : params)
        if (std::find(guard_vars.begin(), guard_vars.end(), p) == guard_vars.end()) return false;
      return true;
    };
    switch (f->kind) {
      case FKind::Conj: return explicitly_guarded(f->left, params) || explicitly_guarded(f->right, params);
      case FKind::Disj: return explicitly_guarded(f->left, params) && explicitly_guarded(f->right, params);
      case FKind::RelAtom: return covers(f->vars);
      case FKind::Exists:
      case FKind::Forall: return f->left->kind == FKind::RelAtom && covers(f->left->vars);
      default: return false;
    }
  }

  void walk(const FormulaPtr& f, const std::string& path, bool parity) {
    auto child = [&](int i) { return path.empty() ? std::to_string(i) : path + "." + std::to_string(i); };
    switch (f->kind) {
      case FKind::RelAtom:
      case FKind::TruthConst:
        return;
      case FKind::FixVarAtom: {
        const BinderInfo* b = lookup(f->name);
        if (!b) {
          report(ViolationKind::UnboundFixpointVar, path, "unbound fixpoint variable " + f->name);
          return;
        }
        if (b->params != static_cast<int>(f->vars.size()))
          report(ViolationKind::ParamCountMismatch, path,
                 f->name + " applied to " + std::to_string(f->vars.size()) + " argument(s), expected " +
                     std::to_string(b->params));
        if (parity != b->parity_at_entry)
          report(ViolationKind::NegativeFixpointVar, path,
                 f->name + " occurs under an odd number of negations");
        return;
      }
      case FKind::Conj:
      case FKind::Disj:
        walk(f->left, child(0), parity);
        walk(f->right, child(1), parity);
        return;
      case FKind::Neg:
        walk(f->left, child(0), !parity);
        return;
      case FKind::Exists:
      case FKind::Forall: {
        const auto& guard = f->left;
        if (guard->kind == FKind::RelAtom) {
          if (lookup(guard->name))
            report(ViolationKind::FixpointGuard, child(0),
                   "fixpoint variable " + guard->name + " may not act as a guard");
        } else {
          report(guard->kind == FKind::FixVarAtom ? ViolationKind::FixpointGuard
                                                  : ViolationKind::NonAtomicGuard,
                 child(0), "guard must be a relational atom");
        }
        if (guard->kind == FKind::RelAtom || guard->kind == FKind::FixVarAtom) {
          std::set<std::string> gv(guard->vars.begin(), guard->vars.end());
          for (const auto& v : free_vars(f->right))
            if (!gv.count(v)) {
              report(ViolationKind::GuardNotCoveringBody, path,
                     "free variable " + v + " of the body is not covered by the guard");
              break;
            }
          for (const auto& v : f->vars)
            if (!gv.count(v)) {
              report(ViolationKind::BoundVarNotInGuard, path,
                     "bound variable " + v + " does not occur in the guard");
              break;
            }
        }
        walk(f->right, child(1), parity);
        return;
      }
      case FKind::Lfp:
      case FKind::Gfp: {
        if (f->args.size() != f->vars.size())
          report(ViolationKind::ParamCountMismatch, path,
                 f->name + " applied to " + std::to_string(f->args.size()) +
                     " argument(s), expected " + std::to_string(f->vars.size()));
        if (strict) {
          std::set<std::string> ps(f->vars.begin(), f->vars.end());
          for (const auto& v : free_vars(f->left))
            if (!ps.count(v)) {
              report(ViolationKind::BodyFreeVarsBeyondParams, path,
                     "fixpoint body of " + f->name + " has free variable " + v +
                         " outside the parameter tuple");
              break;
            }
          if (!explicitly_guarded(f->left, f->vars))
            report(ViolationKind::ParamsNotGuarded, path,
                   "parameters of " + f->name + " are not explicitly guarded in the body");
        }
        binders.push_back({f->name, static_cast<int>(f->vars.size()), parity});
        walk(f->left, child(0), parity);
        binders.pop_back();
        return;
      }
    }
  }
};

}  // namespace

ValidationReport validate_guarded(const FormulaPtr& f, bool strict) {
  ValidationReport report;
  Validator v{&report.diagnostics, strict, {}};
  v.walk(f, "", false);
  return report;
}

// ---------------------------------------------------------------------------
// Negation normal form
// ---------------------------------------------------------------------------

namespace {

// flipped[Z] records whether occurrences of Z currently stand for the
// dualized binder; under positivity the produced atoms stay positive.
FormulaPtr nnf_pos(const FormulaPtr& f, std::map<std::string, bool>& flipped);
FormulaPtr nnf_dual(const FormulaPtr& f, std::map<std::string, bool>& flipped);

template <typename Fn>
FormulaPtr with_flip(const std::string& name, bool value, std::map<std::string, bool>& flipped,
                     Fn&& fn) {
  auto it = flipped.find(name);
  bool had = it != flipped.end();
  bool old = had ? it->second : false;
  flipped[name] = value;
  FormulaPtr out = fn();
  if (had) flipped[name] = old;
  else flipped.erase(name);
  return out;
}

FormulaPtr nnf_pos(const FormulaPtr& f, std::map<std::string, bool>& flipped) {
  switch (f->kind) {
    case FKind::RelAtom:
    case FKind::TruthConst:
      return f;
    case FKind::FixVarAtom: {
      auto it = flipped.find(f->name);
      bool flip = it != flipped.end() && it->second;
      return flip ? mk_neg(f) : f;
    }
    case FKind::Neg: return nnf_dual(f->left, flipped);
    case FKind::Conj: return mk_conj(nnf_pos(f->left, flipped), nnf_pos(f->right, flipped));
    case FKind::Disj: return mk_disj(nnf_pos(f->left, flipped), nnf_pos(f->right, flipped));
    case FKind::Exists: return mk_exists(f->vars, f->left, nnf_pos(f->right, flipped));
    case FKind::Forall: return mk_forall(f->vars, f->left, nnf_pos(f->right, flipped));
    case FKind::Lfp:
      return mk_lfp(f->name, f->vars,
                    with_flip(f->name, false, flipped, [&] { return nnf_pos(f->left, flipped); }),
                    f->args);
    case FKind::Gfp:
      return mk_gfp(f->name, f->vars,
                    with_flip(f->name, false, flipped, [&] { return nnf_pos(f->left, flipped); }),
                    f->args);
  }
  return f;
}

FormulaPtr nnf_dual(const FormulaPtr& f, std::map<std::string, bool>& flipped) {
  switch (f->kind) {
    case FKind::RelAtom: return mk_neg(f);
    case FKind::TruthConst: return mk_truth(!f->truth);
    case FKind::FixVarAtom: {
      auto it = flipped.find(f->name);
      bool flip = it != flipped.end() && it->second;
      return flip ? f : mk_neg(f);
    }
    case FKind::Neg: return nnf_pos(f->left, flipped);
    case FKind::Conj: return mk_disj(nnf_dual(f->left, flipped), nnf_dual(f->right, flipped));
    case FKind::Disj: return mk_conj(nnf_dual(f->left, flipped), nnf_dual(f->right, flipped));
    case FKind::Exists: return mk_forall(f->vars, f->left, nnf_dual(f->right, flipped));
    case FKind::Forall: return mk_exists(f->vars, f->left, nnf_dual(f->right, flipped));
    case FKind::Lfp:
      return mk_gfp(f->name, f->vars,
                    with_flip(f->name, true, flipped, [&] { return nnf_dual(f->left, flipped); }),
                    f->args);
    case FKind::Gfp:
      return mk_lfp(f->name, f->vars,
                    with_flip(f->name, true, flipped, [&] { return nnf_dual(f->left, flipped); }),
                    f->args);
  }
  return f;
}

}  // namespace

FormulaPtr nnf(const FormulaPtr& f) {
  std::map<std::string, bool> flipped;
  return nnf_pos(f, flipped);
}

FormulaPtr nnf_neg(const FormulaPtr& f) {
  std::map<std::string, bool> flipped;
  return nnf_dual(f, flipped);
}

// ---------------------------------------------------------------------------
// Subformula enumeration
// ---------------------------------------------------------------------------

namespace {

struct PtrHash {
  size_t operator()(const FormulaPtr& f) const { return formula_hash(f); }
};
struct PtrEq {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const { return equal(a, b); }
};

}  // namespace

std::vector<FormulaPtr> subformulas(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  std::unordered_set<FormulaPtr, PtrHash, PtrEq> seen;
  auto add = [&](const FormulaPtr& g) {
    if (seen.insert(g).second) out.push_back(g);
  };
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (!g) return;
    add(g);
    walk(g->left);
    walk(g->right);
  };
  walk(f);

  auto rels = relations_of(f);
  auto varset = all_vars(f);
  std::vector<std::string> vars(varset.begin(), varset.end());
  for (const auto& [rel, arity] : rels) {
    if (vars.empty()) break;
    std::vector<size_t> idx(arity, 0);
    while (true) {
      std::vector<std::string> tuple;
      tuple.reserve(arity);
      for (int i = 0; i < arity; ++i) tuple.push_back(vars[idx[i]]);
      auto pos = mk_rel(rel, tuple);
      add(pos);
      add(mk_neg(pos));
      int i = arity - 1;
      for (; i >= 0; --i) {
        if (++idx[i] < vars.size()) break;
        idx[i] = 0;
      }
      if (i < 0) break;
    }
  }
  return out;
}

}  // namespace gfx
