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

#include "gfx/structures.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gfx {

int Structure::elem_id(const std::string& name) const {
  for (size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == name) return static_cast<int>(i);
  return -1;
}

bool Structure::has_atom(const std::string& rel, const std::vector<int>& tuple) const {
  auto it = tables.find(rel);
  return it != tables.end() && it->second.count(tuple) > 0;
}

size_t Structure::atom_count() const {
  size_t n = 0;
  for (const auto& [rel, tuples] : tables) n += tuples.size();
  return n;
}

Structure parse_structure(const std::string& text) {
  Structure s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "sig") {
      std::string name;
      int arity;
      if (!(ls >> name >> arity)) throw ParseError(lineno, 0, "expected: sig NAME ARITY");
      try {
        s.sig.add(name, arity);
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, 0, e.what());
      }
    } else if (kw == "elem") {
      std::string name;
      if (!(ls >> name)) throw ParseError(lineno, 0, "expected: elem NAME");
      if (s.elem_id(name) >= 0) throw ParseError(lineno, 0, "element redeclared: " + name);
      s.universe.push_back(name);
    } else if (kw == "atom") {
      std::string rel;
      if (!(ls >> rel)) throw ParseError(lineno, 0, "expected: atom REL e1 e2 ...");
      if (!s.sig.has(rel)) throw ParseError(lineno, 0, "unknown relation: " + rel);
      std::vector<int> tuple;
      std::string e;
      while (ls >> e) {
        int id = s.elem_id(e);
        if (id < 0) throw ParseError(lineno, 0, "element used before declaration: " + e);
        tuple.push_back(id);
      }
      if (static_cast<int>(tuple.size()) != s.sig.arity(rel))
        throw ParseError(lineno, 0, "arity mismatch for relation " + rel);
      s.tables[rel].insert(tuple);
    } else {
      throw ParseError(lineno, 0, "unknown directive: " + kw);
    }
  }
  if (s.universe.empty()) throw ParseError(lineno, 0, "structure must have at least one element");
  return s;
}

std::string print_structure(const Structure& s) {
  std::ostringstream out;
  for (const auto& [name, arity] : s.sig.relations) out << "sig " << name << " " << arity << "\n";
  for (const auto& e : s.universe) out << "elem " << e << "\n";
  for (const auto& [rel, tuples] : s.tables)
    for (const auto& t : tuples) {
      out << "atom " << rel;
      for (int id : t) out << " " << s.universe[id];
      out << "\n";
    }
  return out.str();
}

std::set<std::set<std::string>> guarded_sets(const Structure& s) {
  std::set<std::set<std::string>> out;
  for (const auto& [rel, tuples] : s.tables)
    for (const auto& t : tuples) {
      std::set<int> comps(t.begin(), t.end());
      std::vector<int> v(comps.begin(), comps.end());
      // all nonempty subsets
      for (uint32_t mask = 1; mask < (1u << v.size()); ++mask) {
        std::set<std::string> sub;
        for (size_t i = 0; i < v.size(); ++i)
          if (mask & (1u << i)) sub.insert(s.universe[v[i]]);
        out.insert(std::move(sub));
      }
    }
  return out;
}

AtomicType atomic_type(const Structure& s, const std::vector<std::string>& carrier) {
  AtomicType t;
  t.carrier = carrier;
  std::map<int, int> pos;  // element id -> carrier position
  for (size_t i = 0; i < carrier.size(); ++i) {
    int id = s.elem_id(carrier[i]);
    if (id < 0) throw std::invalid_argument("carrier element not in universe: " + carrier[i]);
    if (pos.count(id)) throw std::invalid_argument("duplicate element in carrier: " + carrier[i]);
    pos[id] = static_cast<int>(i);
  }
  for (const auto& [rel, tuples] : s.tables)
    for (const auto& tup : tuples) {
      std::vector<int> rewritten;
      rewritten.reserve(tup.size());
      bool inside = true;
      for (int id : tup) {
        auto it = pos.find(id);
        if (it == pos.end()) { inside = false; break; }
        rewritten.push_back(it->second);
      }
      if (inside) t.facts.insert({rel, rewritten});
    }
  return t;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

bool Evaluator::eval(const FormulaPtr& f, const Valuation& v) {
  Val val;
  for (const auto& [var, elem] : v) {
    int id = s_.elem_id(elem);
    if (id < 0) throw std::invalid_argument("valuation maps " + var + " to unknown element " + elem);
    val[var] = id;
  }
  for (const auto& x : free_vars(f))
    if (!val.count(x)) throw std::invalid_argument("incomplete valuation: variable " + x);
  Env env;
  return ev(f, val, env);
}

bool Evaluator::ev(const FormulaPtr& f, const Val& val, Env& env) {
  switch (f->kind) {
    case FKind::RelAtom: {
      auto it = s_.tables.find(f->name);
      std::vector<int> tuple;
      tuple.reserve(f->vars.size());
      for (const auto& x : f->vars) {
        auto v = val.find(x);
        if (v == val.end()) throw std::invalid_argument("incomplete valuation: variable " + x);
        tuple.push_back(v->second);
      }
      return it != s_.tables.end() && it->second.count(tuple) > 0;
    }
    case FKind::FixVarAtom: {
      auto it = env.find(f->name);
      if (it == env.end())
        throw std::invalid_argument("unbound fixpoint variable in evaluation: " + f->name);
      Tuple tuple;
      tuple.reserve(f->vars.size());
      for (const auto& x : f->vars) {
        auto v = val.find(x);
        if (v == val.end()) throw std::invalid_argument("incomplete valuation: variable " + x);
        tuple.push_back(v->second);
      }
      return it->second->count(tuple) > 0;
    }
    case FKind::Conj: return ev(f->left, val, env) && ev(f->right, val, env);
    case FKind::Disj: return ev(f->left, val, env) || ev(f->right, val, env);
    case FKind::Neg: return !ev(f->left, val, env);
    case FKind::TruthConst: return f->truth;
    case FKind::Exists:
    case FKind::Forall: {
      const auto& guard = f->left;
      if (guard->kind != FKind::RelAtom)
        throw std::invalid_argument("guard is not a relational atom");
      auto table = s_.tables.find(guard->name);
      std::set<std::string> bound(f->vars.begin(), f->vars.end());
      bool is_exists = f->kind == FKind::Exists;
      if (table == s_.tables.end()) return !is_exists;
      Val base = val;
      for (const auto& b : f->vars) base.erase(b);
      for (const auto& tuple : table->second) {
        Val ext = base;
        bool match = true;
        for (size_t i = 0; i < guard->vars.size() && match; ++i) {
          const std::string& w = guard->vars[i];
          auto it = ext.find(w);
          if (it != ext.end()) {
            if (it->second != tuple[i]) match = false;
          } else if (bound.count(w)) {
            ext[w] = tuple[i];
          } else {
            throw std::invalid_argument("incomplete valuation: variable " + w);
          }
        }
        if (!match) continue;
        bool body = ev(f->right, ext, env);
        if (is_exists && body) return true;
        if (!is_exists && !body) return false;
      }
      return !is_exists;
    }
    case FKind::Lfp:
    case FKind::Gfp: {
      auto rel = fixpoint(f, val, env);
      Tuple tuple;
      tuple.reserve(f->args.size());
      for (const auto& x : f->args) {
        auto v = val.find(x);
        if (v == val.end()) throw std::invalid_argument("incomplete valuation: variable " + x);
        tuple.push_back(v->second);
      }
      return rel->count(tuple) > 0;
    }
  }
  return false;
}

std::shared_ptr<const Evaluator::TupleSet> Evaluator::fixpoint(const FormulaPtr& f, const Val& val,
                                                               Env& env) {
  // Cache key: binder identity plus the ambient bindings its body can see.
  std::ostringstream key;
  key << f.get();
  auto body_free = free_vars(f->left);
  std::set<std::string> params(f->vars.begin(), f->vars.end());
  for (const auto& x : body_free)
    if (!params.count(x)) {
      auto it = val.find(x);
      if (it == val.end()) throw std::invalid_argument("incomplete valuation: variable " + x);
      key << ";" << x << "=" << it->second;
    }
  for (const auto& [z, rel] : env) key << ";" << z << "@" << rel.get();
  std::string k = key.str();
  auto hit = fix_cache_.find(k);
  if (hit != fix_cache_.end()) return hit->second;

  size_t arity = f->vars.size();
  size_t n = s_.universe.size();
  std::vector<Tuple> space;
  {
    Tuple t(arity, 0);
    while (true) {
      space.push_back(t);
      size_t i = arity;
      while (i > 0) {
        if (++t[i - 1] < static_cast<int>(n)) break;
        t[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }

  bool least = f->kind == FKind::Lfp;
  auto current = std::make_shared<TupleSet>();
  if (!least) current->insert(space.begin(), space.end());

  Val base = val;
  for (const auto& p : f->vars) base.erase(p);

  while (true) {
    auto next = std::make_shared<TupleSet>();
    env[f->name] = current;
    for (const auto& t : space) {
      Val ext = base;
      for (size_t i = 0; i < arity; ++i) ext[f->vars[i]] = t[i];
      if (ev(f->left, ext, env)) next->insert(t);
    }
    env.erase(f->name);
    if (*next == *current) break;
    current = next;
  }
  fix_cache_[k] = current;
  return current;
}

bool evaluate(const Structure& s, const FormulaPtr& f, const Valuation& v) {
  Evaluator e(s);
  return e.eval(f, v);
}

Structure normalize_width(const Structure& s, size_t n) {
  Structure out;
  out.sig = s.sig;
  out.universe = s.universe;
  for (const auto& [rel, tuples] : s.tables)
    for (const auto& t : tuples) {
      std::set<int> distinct(t.begin(), t.end());
      if (distinct.size() <= n) out.tables[rel].insert(t);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism-reduced enumeration
// ---------------------------------------------------------------------------

StructureEnumerator::StructureEnumerator(Signature sig, int max_size)
    : sig_(std::move(sig)), max_size_(max_size) {
  if (max_size_ < 1) throw std::invalid_argument("enumeration size must be >= 1");
  start_size(1);
}

uint64_t StructureEnumerator::raw_count(const Signature& sig, int k) {
  uint64_t atoms = 0;
  for (const auto& [rel, arity] : sig.relations) {
    uint64_t a = 1;
    for (int i = 0; i < arity; ++i) a *= static_cast<uint64_t>(k);
    atoms += a;
  }
  if (atoms >= 63) throw std::invalid_argument("signature too large for enumeration");
  return 1ull << atoms;
}

void StructureEnumerator::start_size(int k) {
  k_ = k;
  atoms_.clear();
  for (const auto& [rel, arity] : sig_.relations) {
    std::vector<int> t(arity, 0);
    while (true) {
      atoms_.push_back({rel, t});
      int i = arity;
      while (i > 0) {
        if (++t[i - 1] < k) break;
        t[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
  if (atoms_.size() >= 63) throw std::invalid_argument("signature too large for enumeration");
  mask_ = 0;
  mask_count_ = 1ull << atoms_.size();

  // For each universe permutation, where each atom index goes.
  perm_atom_maps_.clear();
  std::map<std::pair<std::string, std::vector<int>>, int> atom_index;
  for (size_t i = 0; i < atoms_.size(); ++i) atom_index[atoms_[i]] = static_cast<int>(i);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> amap(atoms_.size());
    for (size_t i = 0; i < atoms_.size(); ++i) {
      auto t = atoms_[i].second;
      for (auto& c : t) c = perm[c];
      amap[i] = atom_index.at({atoms_[i].first, t});
    }
    perm_atom_maps_.push_back(std::move(amap));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

bool StructureEnumerator::is_canonical(uint64_t mask) const {
  for (const auto& amap : perm_atom_maps_) {
    uint64_t image = 0;
    uint64_t m = mask;
    while (m) {
      int i = __builtin_ctzll(m);
      m &= m - 1;
      image |= 1ull << amap[i];
    }
    if (image < mask) return false;
  }
  return true;
}

std::optional<Structure> StructureEnumerator::next() {
  while (true) {
    if (mask_ >= mask_count_) {
      if (k_ >= max_size_) return std::nullopt;
      start_size(k_ + 1);
      continue;
    }
    uint64_t mask = mask_++;
    if (!is_canonical(mask)) continue;
    Structure s;
    s.sig = sig_;
    for (int i = 1; i <= k_; ++i) s.universe.push_back(std::to_string(i));
    uint64_t m = mask;
    while (m) {
      int i = __builtin_ctzll(m);
      m &= m - 1;
      s.tables[atoms_[i].first].insert(atoms_[i].second);
    }
    return s;
  }
}

}  // namespace gfx
