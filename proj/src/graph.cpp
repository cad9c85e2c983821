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

#include "gfx/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gfx {

std::string PhiPair::render() const {
  std::string out = "(" + std::to_string(index) + "|";
  for (size_t i = 0; i < binding.size(); ++i) {
    if (i) out += ",";
    out += binding[i].first + "=" + binding[i].second;
  }
  out += ")";
  return out;
}

PhiPair PhiPair::parse(const std::string& text) {
  if (text.size() < 3 || text.front() != '(' || text.back() != ')')
    throw std::runtime_error("bad pair rendering: " + text);
  auto bar = text.find('|');
  if (bar == std::string::npos) throw std::runtime_error("bad pair rendering: " + text);
  PhiPair p;
  p.index = std::stoi(text.substr(1, bar - 1));
  std::string rest = text.substr(bar + 1, text.size() - bar - 2);
  size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad binding in pair: " + text);
    p.binding.push_back({item.substr(0, eq), item.substr(eq + 1)});
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  std::sort(p.binding.begin(), p.binding.end());
  return p;
}

void PhiType::canonicalize() {
  std::sort(carrier.begin(), carrier.end());
  carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
  for (auto& p : pairs) std::sort(p.binding.begin(), p.binding.end());
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

bool PhiType::has(const PhiPair& p) const {
  return std::binary_search(pairs.begin(), pairs.end(), p);
}

bool PhiType::has_const(const std::string& k) const {
  return std::binary_search(carrier.begin(), carrier.end(), k);
}

std::string PhiType::render() const {
  std::string out = "{";
  for (size_t i = 0; i < carrier.size(); ++i) {
    if (i) out += ",";
    out += carrier[i];
  }
  out += "}:{";
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ";";
    out += pairs[i].render();
  }
  out += "}";
  return out;
}

PhiType PhiType::parse(const std::string& text) {
  auto mid = text.find("}:{");
  if (text.empty() || text.front() != '{' || text.back() != '}' || mid == std::string::npos)
    throw std::runtime_error("bad phi-type rendering: " + text);
  PhiType t;
  std::string cs = text.substr(1, mid - 1);
  size_t pos = 0;
  while (pos < cs.size()) {
    auto comma = cs.find(',', pos);
    std::string k = cs.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!k.empty()) t.carrier.push_back(k);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  std::string ps = text.substr(mid + 3, text.size() - mid - 4);
  pos = 0;
  while (pos < ps.size()) {
    auto semi = ps.find(';', pos);
    std::string item = ps.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
    if (!item.empty()) t.pairs.push_back(PhiPair::parse(item));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  t.canonicalize();
  return t;
}

std::string Letter::render() const {
  if (is_explicit()) return "letter:" + *name;
  return phi->render();
}

Letter Letter::parse(const std::string& text) {
  if (text.rfind("letter:", 0) == 0) return make(text.substr(7));
  return make(PhiType::parse(text));
}

std::string letter_hash(const std::string& rendered) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : rendered) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  snprintf(buf, sizeof(buf), "h%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int LabelledGraph::add_node(std::string name, Letter label) {
  node_names.push_back(std::move(name));
  labels.push_back(std::move(label));
  adj.emplace_back();
  return static_cast<int>(node_names.size()) - 1;
}

void LabelledGraph::add_edge(int a, int b) {
  adj[a].insert(b);
  adj[b].insert(a);
}

int LabelledGraph::node_id(const std::string& name) const {
  for (size_t i = 0; i < node_names.size(); ++i)
    if (node_names[i] == name) return static_cast<int>(i);
  return -1;
}

bool LabelledGraph::has_self_loop() const {
  for (size_t v = 0; v < adj.size(); ++v)
    if (adj[v].count(static_cast<int>(v))) return true;
  return false;
}

LabelledGraph parse_labelled_graph(const std::string& text) {
  LabelledGraph g;
  std::map<std::string, Letter> dict;
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
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
    };
    if (kw == "label") {
      std::string id, rendering;
      if (!(ls >> id >> rendering)) throw fail("expected: label HASH RENDERING");
      dict[id] = Letter::parse(rendering);
    } else if (kw == "node") {
      std::string id, ref;
      if (!(ls >> id >> ref)) throw fail("expected: node ID LABEL");
      if (g.node_id(id) >= 0) throw fail("duplicate node " + id);
      if (ref.rfind("letter:", 0) == 0) {
        g.add_node(id, Letter::make(ref.substr(7)));
      } else {
        auto it = dict.find(ref);
        if (it == dict.end()) throw fail("unknown label " + ref);
        g.add_node(id, it->second);
      }
    } else if (kw == "edge") {
      std::string a, b;
      if (!(ls >> a >> b)) throw fail("expected: edge A B");
      int ia = g.node_id(a), ib = g.node_id(b);
      if (ia < 0 || ib < 0) throw fail("edge references unknown node");
      g.add_edge(ia, ib);
    } else if (kw == "start") {
      std::string id;
      if (!(ls >> id)) throw fail("expected: start ID");
      g.start = g.node_id(id);
      if (g.start < 0) throw fail("unknown start node " + id);
    } else {
      throw fail("unknown directive " + kw);
    }
  }
  if (g.size() == 0) throw std::runtime_error("labelled graph has no nodes");
  return g;
}

std::string print_labelled_graph(const LabelledGraph& g) {
  std::ostringstream out;
  std::map<std::string, std::string> dict;  // hash -> rendering
  std::vector<std::string> refs(g.size());
  for (size_t v = 0; v < g.size(); ++v) {
    if (g.labels[v].is_explicit()) {
      refs[v] = g.labels[v].render();
    } else {
      std::string r = g.labels[v].render();
      std::string h = letter_hash(r);
      dict[h] = r;
      refs[v] = h;
    }
  }
  for (const auto& [h, r] : dict) out << "label " << h << " " << r << "\n";
  for (size_t v = 0; v < g.size(); ++v) out << "node " << g.node_names[v] << " " << refs[v] << "\n";
  for (size_t v = 0; v < g.size(); ++v)
    for (int w : g.adj[v])
      if (static_cast<int>(v) <= w) out << "edge " << g.node_names[v] << " " << g.node_names[w] << "\n";
  if (g.start >= 0) out << "start " << g.node_names[g.start] << "\n";
  return out.str();
}

std::pair<LabelledGraph, std::vector<int>> unravel_graph(const LabelledGraph& g, int from,
                                                         int depth) {
  if (from < 0 || from >= static_cast<int>(g.size()))
    throw std::invalid_argument("unravel_graph: node not in graph");
  LabelledGraph t;
  std::vector<int> pi;
  std::vector<int> parent;
  // BFS over walks; node i of t is a walk, pi[i] its terminal node
  t.add_node("w0", g.labels[from]);
  pi.push_back(from);
  parent.push_back(-1);
  std::vector<int> level{0}, next;
  for (int d = 0; d < depth; ++d) {
    next.clear();
    for (int wn : level) {
      for (int nb : g.adj[pi[wn]]) {
        int id = t.add_node("w" + std::to_string(t.size()), g.labels[nb]);
        pi.push_back(nb);
        parent.push_back(wn);
        t.add_edge(wn, id);
        next.push_back(id);
      }
    }
    level = next;
  }
  t.start = 0;
  return {t, pi};
}

}  // namespace gfx
