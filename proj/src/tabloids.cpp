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

#include "gfx/tabloids.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace gfx {

int Tabloid::add_node(std::string name, std::vector<std::string> constants, AtomicType type) {
  std::sort(constants.begin(), constants.end());
  node_names.push_back(std::move(name));
  constants_of.push_back(std::move(constants));
  type_of.push_back(std::move(type));
  adj.emplace_back();
  return static_cast<int>(node_names.size()) - 1;
}

void Tabloid::add_edge(int a, int b) {
  if (a == b) throw std::invalid_argument("tabloids are simple graphs: no self-loops");
  adj[a].insert(b);
  adj[b].insert(a);
}

int Tabloid::node_id(const std::string& name) const {
  for (size_t i = 0; i < node_names.size(); ++i)
    if (node_names[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

// truth of ground fact rel(consts...) in a node's type, by name
bool type_has_fact(const AtomicType& t, const std::string& rel, const std::vector<std::string>& cs) {
  std::vector<int> pos(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    auto it = std::find(t.carrier.begin(), t.carrier.end(), cs[i]);
    if (it == t.carrier.end()) return false;
    pos[i] = static_cast<int>(it - t.carrier.begin());
  }
  return t.facts.count({rel, pos}) > 0;
}

// all tuples over a carrier, by positions
std::vector<std::vector<int>> tuples_over(size_t carrier, int arity) {
  std::vector<std::vector<int>> out;
  if (carrier == 0) return out;
  std::vector<int> t(arity, 0);
  while (true) {
    out.push_back(t);
    int i = arity;
    while (i > 0) {
      if (++t[i - 1] < static_cast<int>(carrier)) break;
      t[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

}  // namespace

TabloidReport validate_tabloid(const Tabloid& t) {
  TabloidReport rep;
  for (size_t v = 0; v < t.size(); ++v) {
    const auto& type = t.type_of[v];
    if (type.carrier != t.constants_of[v])
      rep.problems.push_back("node " + t.node_names[v] + ": type carrier differs from constant set");
    for (const auto& [rel, pos] : type.facts) {
      if (!t.sig.has(rel) || t.sig.arity(rel) != static_cast<int>(pos.size()))
        rep.problems.push_back("node " + t.node_names[v] + ": fact with unknown relation or bad arity");
      for (int p : pos)
        if (p < 0 || p >= static_cast<int>(type.carrier.size()))
          rep.problems.push_back("node " + t.node_names[v] + ": fact position outside carrier");
    }
    for (const auto& c : t.constants_of[v])
      if (std::find(t.pool.begin(), t.pool.end(), c) == t.pool.end())
        rep.problems.push_back("node " + t.node_names[v] + ": constant " + c + " not in pool");
  }
  for (size_t v = 0; v < t.size(); ++v)
    for (int w : t.adj[v]) {
      if (static_cast<int>(v) > w) continue;
      std::vector<std::string> shared;
      std::set_intersection(t.constants_of[v].begin(), t.constants_of[v].end(),
                            t.constants_of[w].begin(), t.constants_of[w].end(),
                            std::back_inserter(shared));
      for (const auto& [rel, arity] : t.sig.relations) {
        for (const auto& tup : tuples_over(shared.size(), arity)) {
          std::vector<std::string> cs(tup.size());
          for (size_t i = 0; i < tup.size(); ++i) cs[i] = shared[tup[i]];
          if (type_has_fact(t.type_of[v], rel, cs) != type_has_fact(t.type_of[w], rel, cs)) {
            std::string atom = rel + "(";
            for (size_t i = 0; i < cs.size(); ++i) atom += (i ? "," : "") + cs[i];
            atom += ")";
            rep.problems.push_back("edge {" + t.node_names[v] + "," + t.node_names[w] +
                                   "}: types disagree on " + atom);
          }
        }
      }
    }
  return rep;
}

TreeTabloid as_tree_tabloid(Tabloid t, int root) {
  size_t edges = 0;
  for (const auto& a : t.adj) edges += a.size();
  edges /= 2;
  // connected + |E| = |V|-1 <=> tree
  std::vector<char> seen(t.size(), 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : t.adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        count++;
        stack.push_back(w);
      }
  }
  if (count != t.size() || edges != t.size() - 1)
    throw std::invalid_argument("tabloid is not a tree");
  return TreeTabloid{std::move(t), root};
}

std::pair<TreeTabloid, std::vector<int>> unravel(const Tabloid& t, int from, int depth) {
  if (from < 0 || from >= static_cast<int>(t.size()))
    throw std::invalid_argument("unravel: node not in tabloid");
  Tabloid out;
  out.pool = t.pool;
  out.sig = t.sig;
  std::vector<int> pi;
  out.add_node("w0", t.constants_of[from], t.type_of[from]);
  pi.push_back(from);
  std::vector<int> level{0}, next;
  for (int d = 0; d < depth; ++d) {
    next.clear();
    for (int wn : level)
      for (int nb : t.adj[pi[wn]]) {
        int id = out.add_node("w" + std::to_string(out.size()), t.constants_of[nb], t.type_of[nb]);
        pi.push_back(nb);
        out.add_edge(wn, id);
        next.push_back(id);
      }
    level = next;
  }
  return {TreeTabloid{std::move(out), 0}, pi};
}

DecodeResult decode(const TreeTabloid& tt) {
  const Tabloid& t = tt.graph;
  auto rep = validate_tabloid(t);
  if (!rep.ok()) throw std::invalid_argument("decode: invalid tabloid: " + rep.problems.front());

  // union-find over (node, constant) pairs, joined along edges sharing the constant
  std::vector<std::pair<int, std::string>> items;
  std::map<std::pair<int, std::string>, int> index;
  for (size_t v = 0; v < t.size(); ++v)
    for (const auto& c : t.constants_of[v]) {
      index[{static_cast<int>(v), c}] = static_cast<int>(items.size());
      items.push_back({static_cast<int>(v), c});
    }
  std::vector<int> parent(items.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  };
  for (size_t v = 0; v < t.size(); ++v)
    for (int w : t.adj[v]) {
      if (static_cast<int>(v) > w) continue;
      for (const auto& c : t.constants_of[v])
        if (std::binary_search(t.constants_of[w].begin(), t.constants_of[w].end(), c))
          unite(index.at({static_cast<int>(v), c}), index.at({w, c}));
    }

  DecodeResult out;
  out.structure.sig = t.sig;
  std::map<int, int> root_to_elem;
  for (size_t i = 0; i < items.size(); ++i) {
    int r = find(static_cast<int>(i));
    auto [it, fresh] = root_to_elem.insert({r, static_cast<int>(root_to_elem.size())});
    if (fresh)
      out.structure.universe.push_back("e" + std::to_string(it->second) + "_" + items[r].second);
    out.class_of[items[i]] = it->second;
  }
  for (size_t v = 0; v < t.size(); ++v) {
    const auto& type = t.type_of[v];
    for (const auto& [rel, pos] : type.facts) {
      std::vector<int> tuple(pos.size());
      for (size_t i = 0; i < pos.size(); ++i)
        tuple[i] = out.class_of.at({static_cast<int>(v), type.carrier[pos[i]]});
      out.structure.tables[rel].insert(tuple);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

Tabloid parse_tabloid(const std::string& text) {
  Tabloid t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> pending_nodes;  // facts arrive after nodes
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto fail = [&](const std::string& msg) -> ParseError { return ParseError(lineno, 0, msg); };
    if (kw == "const") {
      std::string k;
      while (ls >> k) t.pool.push_back(k);
    } else if (kw == "sig") {
      std::string name;
      int arity;
      if (!(ls >> name >> arity)) throw fail("expected: sig NAME ARITY");
      t.sig.add(name, arity);
    } else if (kw == "node") {
      std::string id, consts;
      if (!(ls >> id)) throw fail("expected: node ID k1,k2,...");
      if (t.node_id(id) >= 0) throw fail("duplicate node " + id);
      std::vector<std::string> cs;
      if (ls >> consts) {
        size_t pos = 0;
        while (pos < consts.size()) {
          auto comma = consts.find(',', pos);
          std::string k =
              consts.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
          if (!k.empty()) cs.push_back(k);
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
      }
      for (const auto& k : cs)
        if (std::find(t.pool.begin(), t.pool.end(), k) == t.pool.end())
          throw fail("constant not in pool: " + k);
      std::sort(cs.begin(), cs.end());
      if (std::adjacent_find(cs.begin(), cs.end()) != cs.end())
        throw fail("repeated constant in node " + id);
      AtomicType type;
      type.carrier = cs;
      t.add_node(id, cs, std::move(type));
    } else if (kw == "fact") {
      std::string id, rel;
      if (!(ls >> id >> rel)) throw fail("expected: fact ID R k1 k2 ...");
      int v = t.node_id(id);
      if (v < 0) throw fail("unknown node " + id);
      if (!t.sig.has(rel)) throw fail("unknown relation " + rel);
      std::vector<int> pos;
      std::string k;
      while (ls >> k) {
        auto it = std::find(t.constants_of[v].begin(), t.constants_of[v].end(), k);
        if (it == t.constants_of[v].end()) throw fail("constant " + k + " not at node " + id);
        pos.push_back(static_cast<int>(it - t.constants_of[v].begin()));
      }
      if (static_cast<int>(pos.size()) != t.sig.arity(rel)) throw fail("arity mismatch for " + rel);
      const_cast<AtomicType&>(t.type_of[v]).facts.insert({rel, pos});
    } else if (kw == "edge") {
      std::string a, b;
      if (!(ls >> a >> b)) throw fail("expected: edge A B");
      int ia = t.node_id(a), ib = t.node_id(b);
      if (ia < 0 || ib < 0) throw fail("edge references unknown node");
      if (ia == ib) throw fail("self-loops are not allowed");
      t.add_edge(ia, ib);
    } else {
      throw fail("unknown directive: " + kw);
    }
  }
  if (t.size() == 0) throw ParseError(lineno, 0, "tabloid has no nodes");
  return t;
}

std::string print_tabloid(const Tabloid& t) {
  std::ostringstream out;
  out << "const";
  for (const auto& k : t.pool) out << " " << k;
  out << "\n";
  for (const auto& [name, arity] : t.sig.relations) out << "sig " << name << " " << arity << "\n";
  for (size_t v = 0; v < t.size(); ++v) {
    out << "node " << t.node_names[v] << " ";
    for (size_t i = 0; i < t.constants_of[v].size(); ++i)
      out << (i ? "," : "") << t.constants_of[v][i];
    out << "\n";
  }
  for (size_t v = 0; v < t.size(); ++v)
    for (const auto& [rel, pos] : t.type_of[v].facts) {
      out << "fact " << t.node_names[v] << " " << rel;
      for (int p : pos) out << " " << t.type_of[v].carrier[p];
      out << "\n";
    }
  for (size_t v = 0; v < t.size(); ++v)
    for (int w : t.adj[v])
      if (static_cast<int>(v) < w)
        out << "edge " << t.node_names[v] << " " << t.node_names[w] << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Model-to-tabloid construction and phi-type labelling
// ---------------------------------------------------------------------------

ModelTabloid tabloid_of_model(const Structure& a, size_t n) {
  if (n < 1) throw std::invalid_argument("tabloid_of_model: width must be >= 1");
  if (!a.has_atoms()) throw std::invalid_argument("tabloid_of_model: structure has no atoms");
  auto gsets = guarded_sets(a);
  for (const auto& s : gsets)
    if (s.size() > n)
      throw std::invalid_argument("tabloid_of_model: structure not width-normalized");

  ModelTabloid out;
  Tabloid& t = out.tabloid;
  t.sig = a.sig;
  for (size_t i = 1; i <= 2 * n; ++i) t.pool.push_back("k" + std::to_string(i));

  // one vertex per injection of each guarded set into the pool
  for (const auto& gs : gsets) {
    std::vector<std::string> elems(gs.begin(), gs.end());
    size_t sz = elems.size();
    std::vector<int> choice(sz, 0);
    // choice as an odometer over pool indices, skipping non-injective picks
    while (true) {
      bool injective = true;
      for (size_t i = 0; i < sz && injective; ++i)
        for (size_t j = i + 1; j < sz; ++j)
          if (choice[i] == choice[j]) { injective = false; break; }
      if (injective) {
        std::vector<std::pair<int, std::string>> chi;
        std::vector<std::string> consts;
        std::string name;
        for (size_t i = 0; i < sz; ++i) {
          chi.push_back({a.elem_id(elems[i]), t.pool[choice[i]]});
          consts.push_back(t.pool[choice[i]]);
          name += (i ? "." : "") + elems[i] + "=" + t.pool[choice[i]];
        }
        std::sort(chi.begin(), chi.end());
        // type: image of the guarded set's atomic type under chi
        AtomicType src = atomic_type(a, elems);
        std::vector<std::string> sorted_consts = consts;
        std::sort(sorted_consts.begin(), sorted_consts.end());
        AtomicType img;
        img.carrier = sorted_consts;
        for (const auto& [rel, pos] : src.facts) {
          std::vector<int> ipos(pos.size());
          for (size_t i = 0; i < pos.size(); ++i) {
            const std::string& k = consts[pos[i]];
            ipos[i] = static_cast<int>(
                std::find(sorted_consts.begin(), sorted_consts.end(), k) - sorted_consts.begin());
          }
          img.facts.insert({rel, ipos});
        }
        t.add_node(name, sorted_consts, std::move(img));
        out.chi.push_back(std::move(chi));
      }
      size_t i = 0;
      for (; i < sz; ++i) {
        if (++choice[i] < static_cast<int>(t.pool.size())) break;
        choice[i] = 0;
      }
      if (i == sz) break;
    }
  }

  // adjacency: the union of two injections is an injective function
  for (size_t v = 0; v < t.size(); ++v)
    for (size_t w = v + 1; w < t.size(); ++w) {
      bool functional = true, injective = true;
      std::map<int, std::string> merged;
      std::map<std::string, int> inverse;
      for (const auto& [e, k] : out.chi[v]) {
        merged[e] = k;
        inverse[k] = e;
      }
      for (const auto& [e, k] : out.chi[w]) {
        auto it = merged.find(e);
        if (it != merged.end()) {
          if (it->second != k) { functional = false; break; }
          continue;
        }
        auto jt = inverse.find(k);
        if (jt != inverse.end()) { injective = false; break; }
        merged[e] = k;
        inverse[k] = e;
      }
      if (functional && injective) t.add_edge(static_cast<int>(v), static_cast<int>(w));
    }
  return out;
}

bool has_free_fixvar(const FormulaPtr& f) {
  std::function<bool(const FormulaPtr&, std::set<std::string>&)> walk =
      [&](const FormulaPtr& g, std::set<std::string>& bound) -> bool {
    if (!g) return false;
    switch (g->kind) {
      case FKind::FixVarAtom: return !bound.count(g->name);
      case FKind::Lfp:
      case FKind::Gfp: {
        bool had = bound.count(g->name) > 0;
        bound.insert(g->name);
        bool r = walk(g->left, bound);
        if (!had) bound.erase(g->name);
        return r;
      }
      default: return walk(g->left, bound) || walk(g->right, bound);
    }
  };
  std::set<std::string> bound;
  return walk(f, bound);
}

LabelledGraph phi_label(const Structure& a, const FormulaPtr& f, const ModelTabloid& g) {
  auto subs = subformulas(f);
  Evaluator ev(a);

  LabelledGraph out;
  const Tabloid& t = g.tabloid;
  for (size_t v = 0; v < t.size(); ++v) {
    PhiType phi;
    phi.carrier = t.constants_of[v];
    // chi^-1: constant -> element name
    std::map<std::string, std::string> inv;
    for (const auto& [e, k] : g.chi[v]) inv[k] = a.elem_name(e);

    for (size_t idx = 0; idx < subs.size(); ++idx) {
      const auto& psi = subs[idx];
      if (has_free_fixvar(psi)) continue;
      auto fv = free_vars(psi);
      std::vector<std::string> fvars(fv.begin(), fv.end());
      std::vector<size_t> choice(fvars.size(), 0);
      const auto& kv = t.constants_of[v];
      if (!fvars.empty() && kv.empty()) continue;
      while (true) {
        Valuation val;
        PhiPair pair;
        pair.index = static_cast<int>(idx);
        for (size_t i = 0; i < fvars.size(); ++i) {
          const std::string& k = kv[choice[i]];
          pair.binding.push_back({fvars[i], k});
          val[fvars[i]] = inv.at(k);
        }
        if (ev.eval(psi, val)) phi.pairs.push_back(std::move(pair));
        size_t i = 0;
        for (; i < fvars.size(); ++i) {
          if (++choice[i] < kv.size()) break;
          choice[i] = 0;
        }
        if (i == fvars.size() || fvars.empty()) break;
      }
    }
    phi.canonicalize();
    out.add_node(t.node_names[v], Letter::make(std::move(phi)));
  }
  for (size_t v = 0; v < t.size(); ++v)
    for (int w : t.adj[v])
      if (static_cast<int>(v) < w) out.add_edge(static_cast<int>(v), w);
  if (out.size() > 0) out.start = 0;
  return out;
}

}  // namespace gfx
