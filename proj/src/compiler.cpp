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

#include "gfx/compiler.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "gfx/tabloids.hpp"

namespace gfx {

namespace {

using Binding = std::vector<std::pair<std::string, std::string>>;  // var -> const, sorted

bool is_literal(const FormulaPtr& f) {
  return f->kind == FKind::RelAtom ||
         (f->kind == FKind::Neg && f->left->kind == FKind::RelAtom);
}

struct Node {
  FormulaPtr formula;
  int tree;            // 0 original, 1 dual
  std::vector<int> children;
  int binder = -1;     // FixVarAtom: node id of the binder
  int depth = 0;       // binder nesting depth
  int fixrank = 0;     // binders only
  std::vector<std::string> free;  // sorted
};

struct Compilation {
  FormulaPtr fc, fd;
  std::vector<std::string> pool;
  size_t n = 0;

  std::vector<FormulaPtr> subs;
  std::vector<int> sub_rep;          // subformula index -> representative node (tree 0), -1 for
                                     // appended literals
  std::vector<Node> nodes;
  int root_c = -1, root_d = -1;
  std::map<int, int> dual_of;        // tree-0 node -> tree-1 node

  // ground literal machinery
  std::map<std::string, int> rels;   // relation -> arity
  // (rel, tuple, sign) -> canonical denoting pair, when denotable
  std::map<std::tuple<std::string, std::vector<std::string>, bool>, PhiPair> canon;

  AlternatingAutomaton aut;
  int q_init = -1, q_audit = -1, q_accept = -1, q_reject = -1;
  std::map<std::pair<int, Binding>, int> eval_state;   // (node, eta) -> state
  std::vector<std::pair<std::pair<int, Binding>, int>> eval_worklist;
  std::map<std::tuple<std::string, std::vector<std::string>, bool>, int> lit_state;
  std::map<std::tuple<std::string, std::vector<std::string>, bool>, int> carry_state;
};

std::string binding_str(const Binding& b) {
  std::string out;
  for (const auto& [v, k] : b) out += v + "=" + k + ",";
  return out;
}

int build_tree(Compilation& c, const FormulaPtr& f, int tree,
               std::vector<std::pair<std::string, int>>& binders, int depth) {
  int id = static_cast<int>(c.nodes.size());
  c.nodes.push_back({});
  {
    // scope the reference: recursive calls below may reallocate c.nodes
    Node& self = c.nodes[id];
    self.formula = f;
    self.tree = tree;
    self.depth = depth;
    auto fv = free_vars(f);
    self.free.assign(fv.begin(), fv.end());
  }
  if (is_literal(f) || f->kind == FKind::TruthConst) return id;
  switch (f->kind) {
    case FKind::Conj:
    case FKind::Disj: {
      int l = build_tree(c, f->left, tree, binders, depth);
      int r = build_tree(c, f->right, tree, binders, depth);
      c.nodes[id].children = {l, r};
      break;
    }
    case FKind::Exists:
    case FKind::Forall: {
      int b = build_tree(c, f->right, tree, binders, depth);
      c.nodes[id].children = {b};
      break;
    }
    case FKind::Lfp:
    case FKind::Gfp: {
      binders.push_back({f->name, id});
      int b = build_tree(c, f->left, tree, binders, depth + 1);
      binders.pop_back();
      c.nodes[id].children = {b};
      break;
    }
    case FKind::FixVarAtom: {
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        if (it->first == f->name) {
          c.nodes[id].binder = it->second;
          break;
        }
      if (c.nodes[id].binder < 0)
        throw std::invalid_argument("compile: unbound fixpoint variable " + f->name);
      break;
    }
    default:
      throw std::invalid_argument("compile: formula not in negation normal form");
  }
  return id;
}

// lockstep walk of the original tree and its dual, recording correspondence
void pair_duals(Compilation& c, int u, int v) {
  c.dual_of[u] = v;
  const auto& cu = c.nodes[u].children;
  const auto& cv = c.nodes[v].children;
  if (cu.size() != cv.size()) throw std::logic_error("compile: dual trees out of step");
  for (size_t i = 0; i < cu.size(); ++i) pair_duals(c, cu[i], cv[i]);
}

void assign_fixranks(Compilation& c, int root) {
  int maxdepth = 0;
  std::function<void(int)> scan = [&](int u) {
    const Node& nd = c.nodes[u];
    if (nd.formula->kind == FKind::Lfp || nd.formula->kind == FKind::Gfp)
      maxdepth = std::max(maxdepth, nd.depth);
    for (int ch : nd.children) scan(ch);
  };
  scan(root);
  std::function<void(int)> put = [&](int u) {
    Node& nd = c.nodes[u];
    if (nd.formula->kind == FKind::Lfp || nd.formula->kind == FKind::Gfp) {
      int base = 2 * (maxdepth - nd.depth) + 2;
      nd.fixrank = nd.formula->kind == FKind::Lfp ? base + 1 : base;
    }
    for (int ch : nd.children) put(ch);
  };
  put(root);
}

// canonical denoting letter pair for a ground literal: the first literal
// pattern in the subformula index whose variable equalities refine the tuple
std::optional<PhiPair> make_canon(const Compilation& c, const std::string& rel,
                                  const std::vector<std::string>& tuple, bool positive) {
  for (size_t i = 0; i < c.subs.size(); ++i) {
    const FormulaPtr& s = c.subs[i];
    const Formula* atom = nullptr;
    if (positive && s->kind == FKind::RelAtom) atom = s.get();
    else if (!positive && s->kind == FKind::Neg && s->left->kind == FKind::RelAtom)
      atom = s->left.get();
    if (!atom || atom->name != rel || atom->vars.size() != tuple.size()) continue;
    std::map<std::string, std::string> eta;
    bool ok = true;
    for (size_t j = 0; j < tuple.size() && ok; ++j) {
      auto [it, fresh] = eta.insert({atom->vars[j], tuple[j]});
      if (!fresh && it->second != tuple[j]) ok = false;
    }
    if (!ok) continue;
    PhiPair p;
    p.index = static_cast<int>(i);
    p.binding.assign(eta.begin(), eta.end());
    return p;
  }
  return std::nullopt;
}

std::vector<std::string> range_consts(const Binding& b) {
  std::vector<std::string> out;
  for (const auto& [v, k] : b) out.push_back(k);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Binding restrict_binding(const Binding& b, const std::vector<std::string>& vars) {
  Binding out;
  for (const auto& [v, k] : b)
    if (std::binary_search(vars.begin(), vars.end(), v)) out.push_back({v, k});
  return out;
}

struct StateGen {
  Compilation& c;

  Player owner_of(const Node& nd) const {
    switch (nd.formula->kind) {
      case FKind::Conj:
      case FKind::Forall: return Player::Forall;
      default: return Player::Exists;
    }
  }

  int rank_of(const Node& nd) const {
    if (nd.formula->kind == FKind::Exists) return 1;  // navigation must make progress
    if (nd.formula->kind == FKind::FixVarAtom) return c.nodes[nd.binder].fixrank;
    return 0;
  }

  int eval_state(int node, const Binding& eta) {
    auto key = std::make_pair(node, eta);
    auto it = c.eval_state.find(key);
    if (it != c.eval_state.end()) return it->second;
    const Node& nd = c.nodes[node];
    std::string name = "ev" + std::to_string(nd.tree) + "n" + std::to_string(node) + "[" +
                       binding_str(eta) + "]";
    int id = c.aut.add_state(std::move(name), owner_of(nd), rank_of(nd));
    c.eval_state[key] = id;
    c.eval_worklist.push_back({key, id});
    return id;
  }

  // resolve the position a transition should evaluate: literals go to ground
  // states, truth constants to the sinks
  int target(int node, const Binding& eta) {
    const Node& nd = c.nodes[node];
    const FormulaPtr& f = nd.formula;
    if (f->kind == FKind::TruthConst) return f->truth ? c.q_accept : c.q_reject;
    if (is_literal(f)) {
      const Formula* atom = f->kind == FKind::RelAtom ? f.get() : f->left.get();
      bool positive = f->kind == FKind::RelAtom;
      std::map<std::string, std::string> eta_map(eta.begin(), eta.end());
      std::vector<std::string> tuple;
      tuple.reserve(atom->vars.size());
      for (const auto& v : atom->vars) tuple.push_back(eta_map.at(v));
      auto key = std::make_tuple(atom->name, tuple, positive);
      auto it = c.lit_state.find(key);
      if (it == c.lit_state.end()) throw std::logic_error("compile: missing ground literal state");
      return it->second;
    }
    return eval_state(node, restrict_binding(eta, nd.free));
  }
};

void enumerate_bindings(const std::vector<std::string>& vars, const std::vector<std::string>& pool,
                        const std::function<void(const Binding&)>& fn) {
  if (!vars.empty() && pool.empty()) return;
  Binding b;
  b.reserve(vars.size());
  for (const auto& v : vars) b.push_back({v, ""});
  std::vector<size_t> choice(vars.size(), 0);
  while (true) {
    for (size_t i = 0; i < vars.size(); ++i) b[i].second = pool[choice[i]];
    fn(b);
    size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++choice[i] < pool.size()) break;
      choice[i] = 0;
    }
    if (i == vars.size() || vars.empty()) break;
  }
}

void emit_eval_rules(Compilation& c, StateGen& gen) {
  // states are created on demand; the worklist grows as targets appear
  for (size_t wi = 0; wi < c.eval_worklist.size(); ++wi) {
    {
      auto [key, state] = c.eval_worklist[wi];
      auto [node, eta] = key;
      const Node& nd = c.nodes[node];
      const FormulaPtr& f = nd.formula;
      LetterPattern guard;
      guard.require_consts = range_consts(eta);
      std::map<std::string, std::string> eta_map(eta.begin(), eta.end());
      switch (f->kind) {
        case FKind::Conj:
        case FKind::Disj: {
          for (int ch : nd.children)
            c.aut.add_rule(state, guard, Move::Stay, gen.target(ch, eta));
          break;
        }
        case FKind::Exists:
        case FKind::Forall: {
          c.aut.add_rule(state, guard, Move::MoveEdge, state);
          const FormulaPtr& g = f->left;  // guard atom
          std::vector<std::string> bound = f->vars;
          std::sort(bound.begin(), bound.end());
          bound.erase(std::unique(bound.begin(), bound.end()), bound.end());
          enumerate_bindings(bound, c.pool, [&](const Binding& yb) {
            std::map<std::string, std::string> mu = eta_map;
            for (const auto& [v, k] : yb) mu[v] = k;
            std::vector<std::string> tuple;
            tuple.reserve(g->vars.size());
            for (const auto& v : g->vars) {
              auto it = mu.find(v);
              if (it == mu.end()) return;  // unguarded variable; rejected by validation
              tuple.push_back(it->second);
            }
            auto canon_it = c.canon.find({g->name, tuple, true});
            if (canon_it == c.canon.end()) return;
            LetterPattern p;
            Binding mu_b(mu.begin(), mu.end());
            p.require_consts = range_consts(mu_b);
            p.require_pairs.push_back(canon_it->second);
            c.aut.add_rule(state, std::move(p), Move::Stay, gen.target(nd.children[0], mu_b));
          });
          break;
        }
        case FKind::Lfp:
        case FKind::Gfp: {
          Binding mu;
          for (size_t j = 0; j < f->vars.size(); ++j)
            mu.push_back({f->vars[j], eta_map.at(f->args[j])});
          std::sort(mu.begin(), mu.end());
          c.aut.add_rule(state, guard, Move::Stay, gen.target(nd.children[0], mu));
          break;
        }
        case FKind::FixVarAtom: {
          const Node& b = c.nodes[nd.binder];
          Binding mu;
          for (size_t j = 0; j < b.formula->vars.size(); ++j)
            mu.push_back({b.formula->vars[j], eta_map.at(f->vars[j])});
          std::sort(mu.begin(), mu.end());
          c.aut.add_rule(state, guard, Move::Stay, gen.target(b.children[0], mu));
          break;
        }
        default:
          throw std::logic_error("compile: unexpected evaluation state kind");
      }
    }
  }
}

}  // namespace

CompiledAutomaton compile(const FormulaPtr& f) {
  auto report = validate_guarded(f, /*strict=*/true);
  if (!report.ok())
    throw std::invalid_argument("compile: formula is not strictly guarded: " +
                                report.diagnostics.front().message);
  if (!free_vars(f).empty()) throw std::invalid_argument("compile: open formula");
  {
    std::function<void(const FormulaPtr&)> chk = [&](const FormulaPtr& g) {
      if (!g) return;
      if (g->kind == FKind::Neg && g->left->kind != FKind::RelAtom)
        throw std::invalid_argument("compile: formula not in negation normal form");
      chk(g->left);
      chk(g->right);
    };
    chk(f);
  }

  Compilation c;
  c.fc = f;
  c.fd = nnf_neg(f);
  c.n = width(f);
  if (c.n == 0)
    throw std::invalid_argument("compile: width-0 sentence has no relational content");
  for (size_t i = 1; i <= 2 * c.n; ++i) c.pool.push_back("k" + std::to_string(i));

  c.subs = subformulas(f);
  c.rels = relations_of(f);

  std::vector<std::pair<std::string, int>> binders;
  c.root_c = build_tree(c, c.fc, 0, binders, 0);
  c.root_d = build_tree(c, c.fd, 1, binders, 0);
  pair_duals(c, c.root_c, c.root_d);
  assign_fixranks(c, c.root_c);
  assign_fixranks(c, c.root_d);

  // representative tree-0 node for each structural subformula
  c.sub_rep.assign(c.subs.size(), -1);
  {
    std::map<size_t, std::vector<int>> by_hash;
    std::function<void(int)> index_nodes = [&](int u) {
      by_hash[formula_hash(c.nodes[u].formula)].push_back(u);
      for (int ch : c.nodes[u].children) index_nodes(ch);
    };
    index_nodes(c.root_c);
    for (size_t i = 0; i < c.subs.size(); ++i) {
      auto it = by_hash.find(formula_hash(c.subs[i]));
      if (it == by_hash.end()) continue;
      for (int u : it->second)
        if (equal(c.nodes[u].formula, c.subs[i])) {
          c.sub_rep[i] = u;
          break;
        }
    }
  }

  // ground literals and their canonical denoting pairs
  size_t ground_literals = 0;
  for (const auto& [rel, arity] : c.rels) {
    std::vector<std::string> tuple(arity);
    std::vector<size_t> choice(arity, 0);
    while (true) {
      for (int i = 0; i < arity; ++i) tuple[i] = c.pool[choice[i]];
      for (bool positive : {true, false}) {
        ground_literals++;
        auto p = make_canon(c, rel, tuple, positive);
        if (p) c.canon[{rel, tuple, positive}] = *p;
      }
      int i = 0;
      for (; i < arity; ++i) {
        if (++choice[i] < c.pool.size()) break;
        choice[i] = 0;
      }
      if (i == arity) break;
    }
  }

  // fixed states
  c.aut.structural = true;
  c.aut.pool = c.pool;
  c.aut.formula_index_count = static_cast<int>(c.subs.size());
  c.q_init = c.aut.add_state("q_init", Player::Forall, 0);
  c.q_audit = c.aut.add_state("q_audit", Player::Forall, 0);
  c.q_accept = c.aut.add_state("q_accept", Player::Forall, 0);
  c.q_reject = c.aut.add_state("q_reject", Player::Exists, 0);
  c.aut.initial = c.q_init;

  // ground literal and carry states
  for (const auto& [key, pair] : c.canon) {
    auto [rel, tuple, positive] = key;
    std::string base = rel + "(";
    for (size_t i = 0; i < tuple.size(); ++i) base += (i ? "," : "") + tuple[i];
    base += ")";
    int lit = c.aut.add_state(std::string("lit[") + (positive ? "+" : "-") + base + "]",
                              Player::Exists, 0);
    c.lit_state[key] = lit;
    LetterPattern lp;
    lp.require_pairs.push_back(pair);
    c.aut.add_rule(lit, std::move(lp), Move::Stay, c.q_accept);

    int carry = c.aut.add_state("carry[" + base + "=" + (positive ? "1" : "0") + "]",
                                Player::Exists, 0);
    c.carry_state[key] = carry;
    LetterPattern cp;
    cp.require_pairs.push_back(pair);
    c.aut.add_rule(carry, std::move(cp), Move::Stay, c.q_accept);
    std::vector<std::string> distinct(tuple.begin(), tuple.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (const auto& k : distinct) {
      LetterPattern vac;
      vac.forbid_consts.push_back(k);
      c.aut.add_rule(carry, std::move(vac), Move::Stay, c.q_accept);
    }
  }

  StateGen gen{c};

  // q_init: the letter must claim the sentence; Forall also opens the audit
  {
    PhiPair claim;
    claim.index = 0;  // preorder puts the root first
    if (!equal(c.subs[0], f)) throw std::logic_error("compile: root is not subformula 0");
    LetterPattern has;
    has.require_pairs.push_back(claim);
    c.aut.add_rule(c.q_init, has, Move::Stay, gen.target(c.root_c, {}));
    c.aut.add_rule(c.q_init, has, Move::Stay, c.q_audit);
    LetterPattern lacks;
    lacks.forbid_pairs.push_back(claim);
    c.aut.add_rule(c.q_init, std::move(lacks), Move::Stay, c.q_reject);
  }

  // audit rules: verify claimed pairs, refute coherent absent pairs, carry
  // ground facts across edges, and keep walking
  for (size_t i = 0; i < c.subs.size(); ++i) {
    const FormulaPtr& psi = c.subs[i];
    if (has_free_fixvar(psi)) continue;
    auto fv = free_vars(psi);
    std::vector<std::string> fvars(fv.begin(), fv.end());
    enumerate_bindings(fvars, c.pool, [&](const Binding& eta) {
      PhiPair pp;
      pp.index = static_cast<int>(i);
      pp.binding = eta;
      // claimed pair: Exists must be able to defend it
      int claimed_target;
      int dual_target;
      if (psi->kind == FKind::TruthConst) {
        claimed_target = psi->truth ? c.q_accept : c.q_reject;
        dual_target = psi->truth ? c.q_reject : c.q_accept;
      } else if (is_literal(psi)) {
        const Formula* atom = psi->kind == FKind::RelAtom ? psi.get() : psi->left.get();
        bool positive = psi->kind == FKind::RelAtom;
        std::map<std::string, std::string> em(eta.begin(), eta.end());
        std::vector<std::string> tuple;
        for (const auto& v : atom->vars) tuple.push_back(em.at(v));
        auto pos_it = c.lit_state.find({atom->name, tuple, positive});
        auto neg_it = c.lit_state.find({atom->name, tuple, !positive});
        if (pos_it == c.lit_state.end() || neg_it == c.lit_state.end())
          throw std::logic_error("compile: literal pair without ground state");
        claimed_target = pos_it->second;
        dual_target = neg_it->second;
      } else {
        int rep = c.sub_rep[i];
        if (rep < 0) throw std::logic_error("compile: non-literal subformula without tree node");
        claimed_target = gen.target(rep, eta);
        dual_target = gen.target(c.dual_of.at(rep), eta);
      }
      LetterPattern claimed;
      claimed.require_pairs.push_back(pp);
      c.aut.add_rule(c.q_audit, claimed, Move::Stay, claimed_target);
      // a claim whose constants are not carried is malformed
      for (const auto& k : range_consts(eta)) {
        LetterPattern bad;
        bad.require_pairs.push_back(pp);
        bad.forbid_consts.push_back(k);
        c.aut.add_rule(c.q_audit, std::move(bad), Move::Stay, c.q_reject);
      }
      LetterPattern absent;
      absent.forbid_pairs.push_back(pp);
      absent.require_consts = range_consts(eta);
      c.aut.add_rule(c.q_audit, std::move(absent), Move::Stay, dual_target);
    });
  }
  for (const auto& [key, carry] : c.carry_state) {
    LetterPattern spawn;
    spawn.require_pairs.push_back(c.canon.at(key));
    c.aut.add_rule(c.q_audit, std::move(spawn), Move::MoveEdge, carry);
  }
  c.aut.add_rule(c.q_audit, LetterPattern::any(), Move::MoveEdge, c.q_audit);

  emit_eval_rules(c, gen);

  CompiledAutomaton out;
  out.formula = f;
  out.width_n = c.n;
  out.pool = c.pool;
  out.ast_nodes = ast_size(f);
  out.ground_literals = ground_literals;
  out.state_count = c.aut.size();
  out.automaton = std::move(c.aut);

  double bound = static_cast<double>(kStateBoundC) * static_cast<double>(out.ast_nodes);
  for (size_t i = 0; i < c.n; ++i) bound *= static_cast<double>(2 * c.n + 1);
  bound *= static_cast<double>(out.ground_literals);
  if (static_cast<double>(out.state_count) > bound)
    throw std::logic_error("compile: state count exceeds the recorded bound");
  return out;
}

// ---------------------------------------------------------------------------
// Letter coherence
// ---------------------------------------------------------------------------

bool letter_check(const FormulaPtr& f, const std::vector<std::string>& pool,
                  const PhiType& candidate) {
  auto subs = subformulas(f);
  auto in_carrier = [&](const std::string& k) { return candidate.has_const(k); };
  auto in_pool = [&](const std::string& k) {
    return std::find(pool.begin(), pool.end(), k) != pool.end();
  };
  for (const auto& k : candidate.carrier)
    if (!in_pool(k)) return false;

  std::set<std::string> deduced;
  for (const auto& p : candidate.pairs) {
    if (p.index < 0 || p.index >= static_cast<int>(subs.size())) return false;
    const FormulaPtr& psi = subs[p.index];
    if (has_free_fixvar(psi)) return false;
    auto fv = free_vars(psi);
    if (p.binding.size() != fv.size()) return false;
    for (const auto& [v, k] : p.binding) {
      if (!fv.count(v)) return false;
      if (!in_carrier(k)) return false;
    }
    if (is_literal(psi))
      for (const auto& [v, k] : p.binding) deduced.insert(k);
  }
  {
    std::set<std::string> declared(candidate.carrier.begin(), candidate.carrier.end());
    if (deduced != declared) return false;
  }

  // atomic type over the carrier: complete, consistent, and denotable
  auto rels = relations_of(f);
  std::map<int, const Formula*> pos_patterns, neg_patterns;
  for (size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->kind == FKind::RelAtom) pos_patterns[static_cast<int>(i)] = subs[i].get();
    else if (subs[i]->kind == FKind::Neg && subs[i]->left->kind == FKind::RelAtom)
      neg_patterns[static_cast<int>(i)] = subs[i]->left.get();
  }
  for (const auto& [rel, arity] : rels) {
    if (candidate.carrier.empty()) break;
    std::vector<size_t> choice(arity, 0);
    while (true) {
      std::vector<std::string> tuple(arity);
      for (int i = 0; i < arity; ++i) tuple[i] = candidate.carrier[choice[i]];
      // presence votes: every denoting pattern pair must be decided and all
      // decisions must agree on the fact's truth
      int truth = -1;
      bool denotable = false, fine = true;
      auto scan = [&](const std::map<int, const Formula*>& patterns, bool positive) {
        for (const auto& [idx, atom] : patterns) {
          if (!fine) return;
          if (atom->name != rel || static_cast<int>(atom->vars.size()) != arity) continue;
          std::map<std::string, std::string> eta;
          bool ok = true;
          for (int j = 0; j < arity && ok; ++j) {
            auto [it, fresh] = eta.insert({atom->vars[j], tuple[j]});
            if (!fresh && it->second != tuple[j]) ok = false;
          }
          if (!ok) continue;
          denotable = true;
          PhiPair pp;
          pp.index = idx;
          pp.binding.assign(eta.begin(), eta.end());
          if (!candidate.has(pp)) continue;
          int value = positive ? 1 : 0;
          if (truth == -1) truth = value;
          else if (truth != value) fine = false;
        }
      };
      scan(pos_patterns, true);
      scan(neg_patterns, false);
      if (!denotable || !fine || truth == -1) return false;
      // and every denoting pair of the agreeing sign must actually be present
      auto verify = [&](const std::map<int, const Formula*>& patterns, bool positive) {
        for (const auto& [idx, atom] : patterns) {
          if (atom->name != rel || static_cast<int>(atom->vars.size()) != arity) continue;
          std::map<std::string, std::string> eta;
          bool ok = true;
          for (int j = 0; j < arity && ok; ++j) {
            auto [it, fresh] = eta.insert({atom->vars[j], tuple[j]});
            if (!fresh && it->second != tuple[j]) ok = false;
          }
          if (!ok) continue;
          PhiPair pp;
          pp.index = idx;
          pp.binding.assign(eta.begin(), eta.end());
          if (candidate.has(pp) != (positive == (truth == 1))) return false;
        }
        return true;
      };
      if (!verify(pos_patterns, true) || !verify(neg_patterns, false)) return false;
      int i = 0;
      for (; i < arity; ++i) {
        if (++choice[i] < candidate.carrier.size()) break;
        choice[i] = 0;
      }
      if (i == arity) break;
    }
  }

  // boolean closure
  std::map<size_t, std::vector<int>> by_hash;
  for (size_t i = 0; i < subs.size(); ++i) by_hash[formula_hash(subs[i])].push_back(static_cast<int>(i));
  auto index_of = [&](const FormulaPtr& g) -> int {
    auto it = by_hash.find(formula_hash(g));
    if (it == by_hash.end()) return -1;
    for (int i : it->second)
      if (equal(subs[i], g)) return i;
    return -1;
  };
  auto present_for = [&](int idx, const Binding& eta) {
    PhiPair pp;
    pp.index = idx;
    const FormulaPtr& psi = subs[idx];
    auto fv = free_vars(psi);
    for (const auto& [v, k] : eta)
      if (fv.count(v)) pp.binding.push_back({v, k});
    return candidate.has(pp);
  };
  bool ok = true;
  for (size_t i = 0; i < subs.size() && ok; ++i) {
    const FormulaPtr& psi = subs[i];
    if (has_free_fixvar(psi)) continue;
    if (psi->kind == FKind::TruthConst) {
      PhiPair pp;
      pp.index = static_cast<int>(i);
      if (candidate.has(pp) != psi->truth) ok = false;
      continue;
    }
    if (psi->kind != FKind::Conj && psi->kind != FKind::Disj) continue;
    int li = index_of(psi->left), ri = index_of(psi->right);
    if (li < 0 || ri < 0) return false;
    auto fv = free_vars(psi);
    std::vector<std::string> fvars(fv.begin(), fv.end());
    enumerate_bindings(fvars, candidate.carrier, [&](const Binding& eta) {
      if (!ok) return;
      bool self = present_for(static_cast<int>(i), eta);
      bool l = present_for(li, eta);
      bool r = present_for(ri, eta);
      bool expect = psi->kind == FKind::Conj ? (l && r) : (l || r);
      if (self != expect) ok = false;
    });
  }
  return ok;
}

}  // namespace gfx
