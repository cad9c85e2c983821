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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfx/automata.hpp"
#include "gfx/bisim.hpp"
#include "gfx/compiler.hpp"
#include "gfx/finsat.hpp"
#include "gfx/tabloids.hpp"

namespace {

using nlohmann::json;
using namespace gfx;

// exit codes: 0 positive verdict / success, 1 negative verdict, 2 usage or
// format error
constexpr int kOk = 0, kNegative = 1, kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

int worker_threads() {
  const char* env = std::getenv("GFX_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

struct Output {
  bool as_json = false;
  void emit(const json& j, const std::string& text) const {
    if (as_json) std::cout << j.dump() << "\n";
    else std::cout << text << "\n";
  }
};

// reparent parse failures with the offending file path
template <typename Fn>
auto parse_in(const std::string& path, Fn&& fn) {
  try {
    return fn(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ":" + std::to_string(e.line) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

FormulaFile load_formula(const std::string& path) {
  return parse_in(path, [](const std::string& t) { return parse_formula_file(t); });
}
Structure load_structure(const std::string& path) {
  return parse_in(path, [](const std::string& t) { return parse_structure(t); });
}
Tabloid load_tabloid(const std::string& path) {
  return parse_in(path, [](const std::string& t) { return parse_tabloid(t); });
}
LabelledGraph load_graph(const std::string& path) {
  return parse_in(path, [](const std::string& t) { return parse_labelled_graph(t); });
}
AlternatingAutomaton load_automaton(const std::string& path) {
  return parse_in(path, [](const std::string& t) { return parse_automaton(t); });
}
ParityGame load_game(const std::string& path) {
  return parse_in(path, [](const std::string& t) { return parse_game(t); });
}

void require_sentence(const FormulaPtr& f) {
  auto fv = free_vars(f);
  if (!fv.empty()) {
    std::string vars;
    for (const auto& v : fv) vars += (vars.empty() ? "" : ", ") + v;
    throw std::invalid_argument("formula must be a sentence; free variables: " + vars);
  }
}

void require_valid(const FormulaPtr& f, bool strict) {
  auto rep = validate_guarded(f, strict);
  if (!rep.ok())
    throw std::invalid_argument("formula fails " + std::string(strict ? "strict " : "") +
                                "guarded validation: " + rep.diagnostics.front().message);
}

// structure signature must cover the formula's declared signature
void check_signatures(const Signature& formula_sig, const Structure& s) {
  for (const auto& [name, arity] : formula_sig.relations) {
    if (!s.sig.has(name))
      throw std::invalid_argument("structure lacks relation " + name + " used by the formula");
    if (s.sig.arity(name) != arity)
      throw std::invalid_argument("arity mismatch for relation " + name +
                                  " between formula and structure");
  }
}

int cmd_check(const Output& out, const std::string& formula_path, bool strict) {
  auto ff = load_formula(formula_path);
  auto rep = validate_guarded(ff.formula, strict);
  auto fv = free_vars(ff.formula);
  bool sentence = fv.empty();
  if (rep.ok() && sentence) {
    size_t w = width(ff.formula);
    out.emit(json{{"cmd", "check"}, {"verdict", "ok"}, {"width", w}},
             "ok, width " + std::to_string(w));
    return kOk;
  }
  json diags = json::array();
  std::ostringstream text;
  text << "failed";
  if (!sentence) {
    text << "\n  not a sentence: free variables";
    for (const auto& v : fv) text << " " << v;
    diags.push_back({{"kind", "not-a-sentence"}});
  }
  for (const auto& d : rep.diagnostics) {
    text << "\n  at [" << (d.path.empty() ? "root" : d.path) << "]: " << d.message;
    diags.push_back({{"path", d.path}, {"message", d.message}});
  }
  out.emit(json{{"cmd", "check"}, {"verdict", "failed"}, {"diagnostics", diags}}, text.str());
  return kNegative;
}

int cmd_mc(const Output& out, const std::string& formula_path, const std::string& structure_path) {
  auto ff = load_formula(formula_path);
  require_valid(ff.formula, false);
  require_sentence(ff.formula);
  auto s = load_structure(structure_path);
  check_signatures(ff.sig, s);
  bool verdict = evaluate(s, ff.formula, {});
  out.emit(json{{"cmd", "mc"}, {"verdict", verdict}}, verdict ? "true" : "false");
  return verdict ? kOk : kNegative;
}

int cmd_bisim(const Output& out, const std::string& a_path, const std::string& b_path,
              const std::string& tuple_spec) {
  auto a = load_structure(a_path);
  auto b = load_structure(b_path);
  if (tuple_spec.empty()) {
    auto z = max_guarded_bisim(a, b);
    out.emit(json{{"cmd", "bisim"}, {"verdict", !z.empty()}, {"maps", z.maps.size()}},
             (z.empty() ? "not bisimilar: no partial isomorphisms survive"
                        : "bisimilar: " + std::to_string(z.maps.size()) +
                              " maps in the maximal guarded bisimulation"));
    return z.empty() ? kNegative : kOk;
  }
  auto colon = tuple_spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--tuple expects a1,a2:b1,b2");
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= s.size()) {
      auto comma = s.find(',', pos);
      parts.push_back(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return parts;
  };
  auto ta = split(tuple_spec.substr(0, colon));
  auto tb = split(tuple_spec.substr(colon + 1));
  bool verdict = guarded_bisimilar(a, ta, b, tb);
  out.emit(json{{"cmd", "bisim"}, {"verdict", verdict}},
           verdict ? "guarded bisimilar" : "not guarded bisimilar");
  return verdict ? kOk : kNegative;
}

int cmd_tabloid(const Output& out, const std::string& structure_path,
                const std::string& formula_path, const std::string& out_path,
                const std::string& tabloid_out) {
  auto ff = load_formula(formula_path);
  require_valid(ff.formula, true);
  require_sentence(ff.formula);
  auto s = load_structure(structure_path);
  check_signatures(ff.sig, s);
  FormulaPtr fc = nnf(ff.formula);
  size_t n = width(fc);
  if (n == 0) throw std::invalid_argument("formula has width 0; no tabloid to build");
  auto norm = normalize_width(s, n);
  if (!norm.has_atoms())
    throw std::invalid_argument("structure has no atoms after width normalization");
  auto mt = tabloid_of_model(norm, n);
  auto g = phi_label(norm, fc, mt);
  write_file(out_path, print_labelled_graph(g));
  if (!tabloid_out.empty()) write_file(tabloid_out, print_tabloid(mt.tabloid));
  out.emit(json{{"cmd", "tabloid"},
                {"vertices", mt.tabloid.size()},
                {"width", n},
                {"output", out_path}},
           "wrote G_phi with " + std::to_string(mt.tabloid.size()) + " vertices to " + out_path);
  return kOk;
}

int cmd_unravel(const Output& out, const std::string& tabloid_path, const std::string& from,
                int depth, const std::string& out_path) {
  auto t = load_tabloid(tabloid_path);
  int v = t.node_id(from);
  if (v < 0) throw std::invalid_argument("unknown node: " + from);
  auto [tree, pi] = unravel(t, v, depth);
  std::ostringstream dump;
  dump << print_tabloid(tree.graph);
  for (size_t w = 0; w < pi.size(); ++w)
    dump << "# pi " << tree.graph.node_names[w] << " -> " << t.node_names[pi[w]] << "\n";
  if (out_path.empty()) std::cout << dump.str();
  else write_file(out_path, dump.str());
  out.emit(json{{"cmd", "unravel"}, {"nodes", tree.graph.size()}, {"depth", depth}},
           "unravelled tree has " + std::to_string(tree.graph.size()) + " nodes");
  return kOk;
}

int cmd_compile(const Output& out, const std::string& formula_path, const std::string& out_path) {
  auto ff = load_formula(formula_path);
  require_valid(ff.formula, true);
  require_sentence(ff.formula);
  auto ca = compile(nnf(ff.formula));
  std::ostringstream dump;
  dump << "# compiled from " << formula_path << "\n";
  dump << "# width " << ca.width_n << ", ast nodes " << ca.ast_nodes << ", ground literals "
       << ca.ground_literals << ", bound constant " << ca.bound_constant << "\n";
  dump << print_automaton(ca.automaton);
  write_file(out_path, dump.str());
  out.emit(json{{"cmd", "compile"},
                {"states", ca.state_count},
                {"width", ca.width_n},
                {"output", out_path}},
           "compiled automaton with " + std::to_string(ca.state_count) + " states to " + out_path);
  return kOk;
}

int cmd_accept(const Output& out, const std::string& automaton_path, const std::string& graph_path,
               const std::string& from) {
  auto a = load_automaton(automaton_path);
  auto g = load_graph(graph_path);
  int v = from.empty() ? g.start : g.node_id(from);
  if (v < 0)
    throw std::invalid_argument(from.empty() ? "graph has no start node; pass --from"
                                             : "unknown node: " + from);
  bool verdict = accepts(a, g, v);
  out.emit(json{{"cmd", "accept"}, {"verdict", verdict}}, verdict ? "accepted" : "rejected");
  return verdict ? kOk : kNegative;
}

int cmd_finsat(const Output& out, const std::string& formula_path, int max_size,
               const std::string& mode_name) {
  auto ff = load_formula(formula_path);
  FinsatMode mode;
  if (mode_name == "direct") mode = FinsatMode::Direct;
  else if (mode_name == "automaton") mode = FinsatMode::ViaAutomaton;
  else throw std::invalid_argument("unknown mode: " + mode_name);
  auto v = finsat_bounded(ff.formula, ff.sig, max_size, mode, worker_threads());
  json j{{"cmd", "finsat"},
         {"mode", mode_name},
         {"bound", v.bound},
         {"candidates", v.candidates},
         {"elapsed_seconds", v.elapsed_seconds}};
  if (v.found()) {
    j["verdict"] = "model-found";
    j["model"] = print_structure(*v.model);
    std::ostringstream text;
    text << "model found (" << v.model->universe.size() << " element(s), " << v.candidates
         << " candidate(s) examined):\n"
         << print_structure(*v.model);
    out.emit(j, text.str());
    return kOk;
  }
  j["verdict"] = "none-up-to-bound";
  out.emit(j, "no model found up to size " + std::to_string(v.bound) + " (" +
                  std::to_string(v.candidates) +
                  " candidates examined; bounded search, not a proof of finite unsatisfiability)");
  return kNegative;
}

int cmd_games_solve(const Output& out, const std::string& game_path) {
  auto g = load_game(game_path);
  auto sol = solve(g);
  size_t exists_region = 0;
  for (auto w : sol.winner)
    if (w == Player::Exists) exists_region++;
  bool verdict = sol.winner[g.initial] == Player::Exists;
  std::ostringstream text;
  text << "winner at initial position: " << (verdict ? "exists" : "forall") << "\n";
  text << "exists wins " << exists_region << "/" << g.size() << " positions";
  auto name = [&](int v) {
    return (v < static_cast<int>(g.names.size()) && !g.names[v].empty()) ? g.names[v]
                                                                         : "p" + std::to_string(v);
  };
  for (size_t v = 0; v < g.size(); ++v)
    if (sol.strategy[v] >= 0)
      text << "\nstrategy " << name(static_cast<int>(v)) << " -> " << name(sol.strategy[v]);
  out.emit(json{{"cmd", "games"},
                {"verdict", verdict ? "exists" : "forall"},
                {"exists_region", exists_region},
                {"positions", g.size()}},
           text.str());
  return verdict ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gfx: a workbench for guarded fixpoint logic on finite structures"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.as_json, "emit one JSON object per result line");

  std::string formula_path, structure_path, out_path, tabloid_out, a_path, b_path, tuple_spec;
  std::string graph_path, automaton_path, from, mode = "direct", game_path;
  int depth = 2, max_size = 4;
  bool strict = false;

  auto* c_check = app.add_subcommand("check", "parse and validate a formula file");
  c_check->add_option("formula", formula_path, "formula file")->required();
  c_check->add_flag("--strict", strict, "require explicitly guarded fixpoint parameters");

  auto* c_mc = app.add_subcommand("mc", "model-check a sentence on a finite structure");
  c_mc->add_option("-f,--formula", formula_path)->required();
  c_mc->add_option("-s,--structure", structure_path)->required();

  auto* c_bisim = app.add_subcommand("bisim", "guarded bisimulation between two structures");
  c_bisim->add_option("-a", a_path, "first structure")->required();
  c_bisim->add_option("-b", b_path, "second structure")->required();
  c_bisim->add_option("--tuple", tuple_spec, "a1,a2:b1,b2 tuple pair to relate");

  auto* c_tab = app.add_subcommand("tabloid", "build and label the model tabloid G_phi");
  c_tab->add_option("-s,--structure", structure_path)->required();
  c_tab->add_option("-f,--formula", formula_path)->required();
  c_tab->add_option("-o,--output", out_path)->required();
  c_tab->add_option("--tabloid-out", tabloid_out, "also dump the unlabelled tabloid");

  auto* c_unr = app.add_subcommand("unravel", "unravel a tabloid from a node");
  c_unr->add_option("-g,--graph", graph_path, "tabloid file")->required();
  c_unr->add_option("--from", from)->required();
  c_unr->add_option("--depth", depth)->required();
  c_unr->add_option("-o,--output", out_path);

  auto* c_comp = app.add_subcommand("compile", "compile a sentence to an alternating automaton");
  c_comp->add_option("-f,--formula", formula_path)->required();
  c_comp->add_option("-o,--output", out_path)->required();

  auto* c_acc = app.add_subcommand("accept", "run an automaton on a labelled graph");
  c_acc->add_option("-a,--automaton", automaton_path)->required();
  c_acc->add_option("-g,--graph", graph_path)->required();
  c_acc->add_option("--from", from);

  auto* c_fin = app.add_subcommand("finsat", "bounded finite satisfiability search");
  c_fin->add_option("-f,--formula", formula_path)->required();
  c_fin->add_option("--max-size", max_size, "largest universe size (default 4)");
  c_fin->add_option("--mode", mode, "direct | automaton");

  auto* c_games = app.add_subcommand("games", "parity game utilities");
  auto* c_solve = c_games->add_subcommand("solve", "solve a parity game file");
  c_solve->add_option("game", game_path, "game file")->required();
  c_games->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_check) return cmd_check(out, formula_path, strict);
    if (*c_mc) return cmd_mc(out, formula_path, structure_path);
    if (*c_bisim) return cmd_bisim(out, a_path, b_path, tuple_spec);
    if (*c_tab) return cmd_tabloid(out, structure_path, formula_path, out_path, tabloid_out);
    if (*c_unr) return cmd_unravel(out, graph_path, from, depth, out_path);
    if (*c_comp) return cmd_compile(out, formula_path, out_path);
    if (*c_acc) return cmd_accept(out, automaton_path, graph_path, from);
    if (*c_fin) return cmd_finsat(out, formula_path, max_size, mode);
    if (*c_solve) return cmd_games_solve(out, game_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
