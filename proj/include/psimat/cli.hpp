#pragma once

// The process boundary: thirteen verbs wiring the line-oriented text formats
// to the library, deterministic byte for byte.  Exit statuses are a contract:
// 0 success, 1 negative verdict, 2 input error, 3 resource cap, 4 broken
// invariant.  `-` names standard input so verbs chain through pipes.

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "axioms.hpp"
#include "core.hpp"
#include "games.hpp"
#include "gf.hpp"
#include "graphs.hpp"
#include "io.hpp"
#include "matroid.hpp"
#include "selftest.hpp"
#include "tom.hpp"

namespace psimat::cli {

struct Invocation {
  std::vector<std::string> args;  // everything after the program name
  std::string stdin_text;         // consulted only when an input path is "-"
};

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

namespace detail {

using nlohmann::ordered_json;

inline std::string source_name(const std::string& path) {
  return path == "-" ? "stdin" : path;
}

inline std::string read_input(const std::string& path, const Invocation& inv) {
  if (path == "-") return inv.stdin_text;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error(path + ": cannot open the file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse a document out of a file, prefixing parse errors with the source so
// "line L, column C" points somewhere.
template <typename F>
auto parse_from(const std::string& path, const Invocation& inv, F f)
    -> decltype(f(std::string{})) {
  const std::string text = read_input(path, inv);
  try {
    return f(text);
  } catch (const input_error& e) {
    throw input_error(source_name(path) + ": " + e.what());
  }
}

inline LabelSet parse_list(const std::string& text) {
  LabelSet out;
  std::string cur;
  for (const char ch : text + " ") {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  return out;
}

inline std::vector<Label> parse_seq(const std::string& text) {
  std::vector<Label> out;
  std::string cur;
  for (const char ch : text + " ") {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  return out;
}

using games::player_name;

inline ordered_json json_matroid(const std::string& name, const Matroid& m) {
  ordered_json j;
  j["name"] = name;
  j["elements"] = m.ground().size();
  j["rank"] = m.rank();
  j["ground"] = m.ground();
  j["circuits"] = m.circuits();
  j["cocircuits"] = m.cocircuits();
  if (m.representation()) {
    const gf::Subspace& u = *m.representation();
    ordered_json rep;
    rep["field"] = u.p;
    rep["dimension"] = u.basis.size();
    std::vector<std::vector<int>> rows;
    for (const auto& v : u.basis) {
      std::vector<int> row;
      for (const auto& e : u.ambient) row.push_back(v.at(e));
      rows.push_back(std::move(row));
    }
    rep["rows"] = rows;
    j["representation"] = rep;
  }
  return j;
}

inline ordered_json json_axioms(const AxiomReport& rep) {
  ordered_json ax;
  for (const Axiom a : all_axioms()) ax[axiom_name(a)] = rep.passes(a);
  return ax;
}

inline ordered_json json_witnesses(const AxiomReport& rep) {
  ordered_json ws = ordered_json::array();
  for (const auto& w : rep.failures()) {
    ordered_json one;
    one["axiom"] = axiom_name(w.axiom);
    one["note"] = w.note;
    ws.push_back(std::move(one));
  }
  return ws;
}

inline int axioms_passed(const AxiomReport& rep) {
  int n = 0;
  for (const Axiom a : all_axioms())
    if (rep.passes(a)) ++n;
  return n;
}

inline void emit_json(Outcome& res, const ordered_json& j) { res.out += j.dump(2) + "\n"; }

// --- verbs ---------------------------------------------------------------------

inline void do_check_axioms(const Invocation& inv, Outcome& res, const std::string& path,
                            bool json) {
  const io::NamedSystem ns =
      parse_from(path, inv, [](const std::string& t) { return io::parse_system(t); });
  const AxiomReport rep = check_axioms(ns.system);
  const int passed = axioms_passed(rep);
  if (json) {
    ordered_json j;
    j["verb"] = "check-axioms";
    j["system"] = ns.name;
    j["passed"] = passed;
    j["total"] = 8;
    j["axioms"] = json_axioms(rep);
    j["witnesses"] = json_witnesses(rep);
    emit_json(res, j);
  } else if (rep.all_pass()) {
    res.out += "PASS (8/8)\n";
  } else {
    res.out += "FAIL (" + std::to_string(passed) + "/8)\n" + rep.summary() + "\n";
  }
  res.status = rep.all_pass() ? 0 : 1;
}

inline void do_reconstruct(const Invocation& inv, Outcome& res, const std::string& path,
                           bool json) {
  const io::NamedSystem ns =
      parse_from(path, inv, [](const std::string& t) { return io::parse_system(t); });
  const AxiomReport rep = check_axioms(ns.system);
  if (!rep.determines_matroid()) {
    const int passed = axioms_passed(rep);
    if (json) {
      ordered_json j;
      j["verb"] = "reconstruct";
      j["system"] = ns.name;
      j["passed"] = passed;
      j["total"] = 8;
      j["axioms"] = json_axioms(rep);
      j["witnesses"] = json_witnesses(rep);
      emit_json(res, j);
    } else {
      res.out += "FAIL (" + std::to_string(passed) + "/8)\n" + rep.summary() + "\n";
    }
    res.status = 1;
    return;
  }
  const Matroid m = reconstruct(ns.system);
  if (json) {
    ordered_json j;
    j["verb"] = "reconstruct";
    j["system"] = ns.name;
    j["matroid"] = json_matroid(ns.name, m);
    emit_json(res, j);
  } else {
    res.out += io::serialize_matroid(ns.name, m);
  }
}

inline void do_base_extend(const Invocation& inv, Outcome& res, const std::string& path,
                           const std::string& independent, const std::string& within,
                           const std::string& order, bool json) {
  const io::NamedSystem ns =
      parse_from(path, inv, [](const std::string& t) { return io::parse_system(t); });
  const BaseExtension ext =
      base_extend(ns.system, parse_list(independent), parse_list(within), parse_seq(order));
  if (json) {
    ordered_json j;
    j["verb"] = "base-extend";
    j["system"] = ns.name;
    j["independent"] = ext.i_inf;
    j["complement"] = ext.j_inf;
    emit_json(res, j);
  } else {
    res.out += "I: " + show_set(ext.i_inf) + "\nJ: " + show_set(ext.j_inf) + "\n";
  }
}

inline void do_matroid_info(const Invocation& inv, Outcome& res, const std::string& path,
                            bool dual, const std::string& contract, const std::string& remove,
                            bool json) {
  const io::NamedMatroid nm =
      parse_from(path, inv, [](const std::string& t) { return io::parse_matroid(t); });
  Matroid m = nm.matroid;
  std::string name = nm.name;
  const bool minored = !contract.empty() || !remove.empty();
  if (minored) {
    m = m.minor(parse_list(contract), parse_list(remove));
    name += "-minor";
  }
  if (dual) {
    m = m.dual();
    name += "*";
  }
  if (json) {
    ordered_json j;
    j["verb"] = "matroid-info";
    j["matroid"] = json_matroid(name, m);
    emit_json(res, j);
    return;
  }
  if (minored || dual) {
    res.out += io::serialize_matroid(name, m);  // a document, so verbs chain
    return;
  }
  res.out += "matroid: " + name + "\n";
  res.out += "elements: " + std::to_string(m.ground().size()) + "\n";
  res.out += "rank: " + std::to_string(m.rank()) + "\n";
  if (m.representation())
    res.out += "representation: GF(" + std::to_string(m.representation()->p) + "), dimension " +
               std::to_string(m.representation()->basis.size()) + "\n";
  res.out += "ground: " + join(m.ground()) + "\n";
  for (const auto& c : m.circuits()) res.out += "circuit: " + join(c) + "\n";
  for (const auto& d : m.cocircuits()) res.out += "cocircuit: " + join(d) + "\n";
}

inline void do_glue(const Invocation& inv, Outcome& res, const std::string& path1,
                    const std::string& path2, bool json) {
  const io::NamedMatroid a =
      parse_from(path1, inv, [](const std::string& t) { return io::parse_matroid(t); });
  const io::NamedMatroid b =
      parse_from(path2, inv, [](const std::string& t) { return io::parse_matroid(t); });
  for (const auto& nm : {a, b})
    if (!nm.matroid.representation())
      throw input_error("matroid '" + nm.name +
                        "' carries no representation; gluing needs represented inputs");
  const gf::Subspace glued =
      tom::delta_glue(*a.matroid.representation(), *b.matroid.representation());
  const Matroid m = Matroid::from_representation(glued);
  const std::string name = a.name + "-" + b.name;
  if (json) {
    ordered_json j;
    j["verb"] = "glue";
    j["matroid"] = json_matroid(name, m);
    emit_json(res, j);
  } else {
    res.out += io::serialize_matroid(name, m);
  }
}

struct Partition {
  LabelSet allowed;
  LabelSet forbidden;
};

// Real edges default to forbidden: the question is always "is there a
// Ψ-circuit through e inside {e} ∪ permitted".
inline Partition split_reals(const tom::TreePresentation& pres, const Label& edge,
                             const std::string& pco, const std::string& pde) {
  const LabelSet reals = games::real_edges(pres);
  const auto must_be_real = [&reals](const Label& x) {
    if (!reals.count(x))
      throw input_error("'" + x + "' is not a real edge; the presentation's real edges are " +
                        show_set(reals));
  };
  must_be_real(edge);
  Partition p;
  p.allowed = parse_list(pco);
  for (const auto& x : p.allowed) {
    must_be_real(x);
    if (x == edge) throw input_error("the focus edge '" + x + "' cannot be listed as permitted");
  }
  for (const auto& x : parse_list(pde)) {
    must_be_real(x);
    if (x == edge) throw input_error("the focus edge '" + x + "' cannot be listed as forbidden");
    if (p.allowed.count(x))
      throw input_error("'" + x + "' is listed as both permitted and forbidden");
  }
  p.forbidden = set_minus(set_minus(reals, LabelSet{edge}), p.allowed);
  return p;
}

inline void do_solve(const Invocation& inv, Outcome& res, const std::string& path,
                     const std::string& edge, const std::string& pco, const std::string& pde,
                     bool representable, bool witness, bool json) {
  const io::NamedPresentation np =
      parse_from(path, inv, [](const std::string& t) { return io::parse_presentation(t); });
  const Partition part = split_reals(np.presentation, edge, pco, pde);
  const LabelSet inside = set_with(part.allowed, edge);

  games::Player winner = games::Player::colin;
  std::string witness_doc;
  if (representable) {
    const games::RepresentedPresentation rp = games::represent(np.presentation);
    const games::VectorOutcome out =
        games::solve_vector_game(rp, edge, part.allowed, part.forbidden);
    winner = out.winner();
    if (witness && winner == games::Player::sarah)
      witness_doc = io::serialize_vector_witness(np.name, rp, out);
  } else {
    const games::GameOutcome out =
        games::solve_circuit_game(np.presentation, edge, part.allowed, part.forbidden);
    winner = out.winner();
    if (witness && winner == games::Player::sarah)
      witness_doc = io::serialize_witness(np.name, np.presentation, out);
  }

  const bool loop = winner == games::Player::sarah && part.allowed.empty();
  std::string report;
  if (loop)
    report = "winner: Sarah; " + edge + " is a Ψ-circuit (loop)";
  else if (winner == games::Player::sarah)
    report = "winner: Sarah; " + edge + " lies in a Ψ-circuit inside " + show_set(inside);
  else
    report = "winner: Colin; " + edge + " lies in no Ψ-circuit inside " + show_set(inside);

  if (json) {
    ordered_json j;
    j["verb"] = "solve";
    j["presentation"] = np.name;
    j["edge"] = edge;
    j["allowed"] = part.allowed;
    j["forbidden"] = part.forbidden;
    j["representable"] = representable;
    j["winner"] = player_name(winner);
    j["loop"] = loop;
    j["report"] = report;
    if (!witness_doc.empty()) j["witness"] = witness_doc;
    emit_json(res, j);
  } else {
    res.out += report + "\n";
    if (!witness_doc.empty()) res.out += witness_doc;
  }
  res.status = winner == games::Player::sarah ? 0 : 1;
}

inline void do_induced(const Invocation& inv, Outcome& res, const std::string& path,
                       std::size_t cap, bool json) {
  const io::NamedPresentation np =
      parse_from(path, inv, [](const std::string& t) { return io::parse_presentation(t); });
  const Matroid m = games::induced_matroid(np.presentation, cap);
  const std::string name = np.name + "-induced";
  if (json) {
    ordered_json j;
    j["verb"] = "induced";
    j["presentation"] = np.name;
    j["matroid"] = json_matroid(name, m);
    emit_json(res, j);
  } else {
    res.out += io::serialize_matroid(name, m);
  }
}

inline void do_duality_check(const Invocation& inv, Outcome& res, const std::string& path,
                             const std::string& edge, const std::string& pco,
                             const std::string& pde, bool json) {
  const io::NamedPresentation np =
      parse_from(path, inv, [](const std::string& t) { return io::parse_presentation(t); });
  const Partition part = split_reals(np.presentation, edge, pco, pde);
  const games::DualityReport rep =
      games::duality_check(np.presentation, edge, part.allowed, part.forbidden);
  if (json) {
    ordered_json j;
    j["verb"] = "duality-check";
    j["presentation"] = np.name;
    j["edge"] = edge;
    j["allowed"] = part.allowed;
    j["forbidden"] = part.forbidden;
    j["circuit_winner"] = player_name(rep.circuit_winner);
    j["cocircuit_winner"] = player_name(rep.cocircuit_winner);
    j["agree"] = rep.agree;
    emit_json(res, j);
  } else {
    res.out += "circuit game: " + player_name(rep.circuit_winner) +
               "; cocircuit game: " + player_name(rep.cocircuit_winner) +
               "; duality: " + (rep.agree ? "ok" : "VIOLATED") + "\n";
  }
  if (!rep.agree) res.status = 4;  // determinacy is an invariant, not a verdict
}

inline void do_tree_structure(const Invocation& inv, Outcome& res, const std::string& path,
                              const std::string& root, bool json) {
  const io::NamedGraph ng =
      parse_from(path, inv, [](const std::string& t) { return io::parse_graph(t); });
  const graphs::TreeOrder order = graphs::normal_spanning_tree(ng.graph, root);
  const graphs::TreeStructure ts = graphs::tree_structure_from_nst(ng.graph, order);
  if (json) {
    ordered_json j;
    j["verb"] = "tree-structure";
    j["graph"] = ng.name;
    j["root"] = root;
    ordered_json classes;
    for (const auto& [name, members] : ts.classes) classes[name] = members;
    j["classes"] = classes;
    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : ts.edges) edges.push_back({a, b});
    j["edges"] = edges;
    emit_json(res, j);
  } else {
    res.out += io::serialize_tree_structure(ts);
  }
}

inline void do_torso(const Invocation& inv, Outcome& res, const std::string& graph_path,
                     const std::string& structure_path, const std::string& cls, bool json) {
  const io::NamedGraph ng =
      parse_from(graph_path, inv, [](const std::string& t) { return io::parse_graph(t); });
  const io::ParsedStructure ps = parse_from(
      structure_path, inv, [](const std::string& t) { return io::parse_tree_structure(t); });
  const graphs::TreeStructure ts = io::realize(ps, ng.graph);
  const graphs::Torso torso = graphs::torso(ng.graph, ts, cls);
  if (json) {
    ordered_json j;
    j["verb"] = "torso";
    j["graph"] = ng.name;
    j["class"] = cls;
    j["vertices"] = torso.graph.vertices;
    ordered_json edges;
    for (const auto& [lbl, ends] : torso.graph.edges) edges[lbl] = {ends.first, ends.second};
    j["edges"] = edges;
    j["internal"] = torso.internal_edges;
    j["pendant"] = torso.pendant_edges;
    j["dummy"] = torso.dummy_edges;
    emit_json(res, j);
  } else {
    res.out += io::serialize_graph(cls + "-torso", torso.graph);
    res.out += "# internal: " + join(torso.internal_edges) + "\n";
    res.out += "# pendant: " + join(torso.pendant_edges) + "\n";
    res.out += "# dummy: " + join(torso.dummy_edges) + "\n";
  }
}

inline void do_undominate(const Invocation& inv, Outcome& res, const std::string& graph_path,
                          const std::string& tree_path, std::string root, bool json) {
  const io::NamedGraph ng =
      parse_from(graph_path, inv, [](const std::string& t) { return io::parse_graph(t); });
  const io::NamedGraph nt =
      parse_from(tree_path, inv, [](const std::string& t) { return io::parse_graph(t); });
  if (ng.graph.vertices.empty()) throw input_error("the graph has no vertices");
  if (root.empty()) root = *ng.graph.vertices.begin();
  LabelSet tree_edges;
  for (const auto& [lbl, ends] : nt.graph.edges) {
    (void)lbl;
    const auto in_g = ng.graph.edge_between(ends.first, ends.second);
    if (!in_g)
      throw input_error("the tree edge '" + ends.first + "'--'" + ends.second +
                        "' is not an edge of the graph");
    tree_edges.insert(*in_g);
  }
  const graphs::TreeOrder order = graphs::make_tree_order(ng.graph, root, tree_edges);
  const graphs::Graph u = graphs::undomination_graph(ng.graph, order);
  if (json) {
    ordered_json j;
    j["verb"] = "undominate";
    j["graph"] = ng.name;
    j["root"] = root;
    j["vertices"] = u.vertices;
    ordered_json edges;
    for (const auto& [lbl, ends] : u.edges) edges[lbl] = {ends.first, ends.second};
    j["edges"] = edges;
    emit_json(res, j);
  } else {
    res.out += io::serialize_graph(ng.name + "-u", u);
  }
}

inline void do_gen(const Invocation& inv, Outcome& res, const std::string& kind, int depth,
                   const std::string& psi, bool json) {
  (void)inv;
  std::string doc;
  if (kind == "tgame") {
    if (depth >= 0) throw input_error("the tgame generator takes no --depth");
    std::vector<int> prios;
    if (psi == "all")
      prios = {0, 0, 0, 0, 0, 0};
    else if (psi == "none")
      prios = {1, 1, 1, 1, 1, 1};
    else if (psi == "buchi")
      prios = {1, 1, 1, 1, 2, 1};
    else if (psi == "cobuchi")
      prios = {0, 0, 1, 0, 0, 0};
    else
      throw input_error("unknown end condition '" + psi +
                        "'; pick one of all, none, buchi, cobuchi");
    tom::TreePresentation pres = graphs::gen_tgame();
    for (std::size_t i = 0; i < pres.transitions.size(); ++i)
      pres.transitions[i].priority = prios[i];
    doc = io::serialize_presentation("tgame", pres);
  } else if (kind == "tk2") {
    if (psi != "all") throw input_error("--psi applies only to the tgame generator");
    if (depth < 0) depth = 8;
    if (depth < 1) throw input_error("--depth must be at least 1");
    if (depth > 16)
      throw resource_error("depth " + std::to_string(depth) + " exceeds the generator cap (16)");
    const graphs::Graph t = graphs::gen_degree_tree(depth);
    doc = io::serialize_graph("tk2", graphs::gen_t_k2(t, "w2", depth));
  } else {  // t2k3, guaranteed by the option check
    if (psi != "all") throw input_error("--psi applies only to the tgame generator");
    if (depth < 0) depth = 1;
    if (depth < 1) throw input_error("--depth must be at least 1");
    if (depth > 6)
      throw resource_error("depth " + std::to_string(depth) + " exceeds the generator cap (6)");
    const graphs::T2K3 tk = graphs::gen_t2_k3(depth);
    doc = io::serialize_graph("t2k3", tk.graph) + "\n" +
          io::serialize_tree_structure(tk.structure);
  }
  if (json) {
    ordered_json j;
    j["verb"] = "gen";
    j["kind"] = kind;
    if (kind == "tgame")
      j["psi"] = psi;
    else
      j["depth"] = depth;
    j["document"] = doc;
    emit_json(res, j);
  } else {
    res.out += doc;
  }
}

inline void do_selftest(const Invocation& inv, Outcome& res, int criterion, bool json) {
  (void)inv;
  std::optional<int> only;
  if (criterion > 0) only = criterion;
  const std::vector<selftest::Result> results = selftest::run_all(only);
  bool all = true;
  double total = 0.0;
  ordered_json arr = ordered_json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    total += r.seconds;
    if (json) {
      ordered_json one;
      one["criterion"] = r.criterion;
      one["name"] = r.name;
      one["pass"] = r.pass;
      one["detail"] = r.detail;
      arr.push_back(std::move(one));
    } else {
      res.out += "criterion " + std::to_string(r.criterion) + ": " +
                 (r.pass ? "PASS" : "FAIL") + "  " + r.name + "\n";
      if (!r.pass) res.out += "  " + r.detail + "\n";
    }
    // Timings vary run to run, so they go to stderr, never the report.
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(2);
    t << "criterion " << r.criterion << ": " << r.seconds << "s\n";
    res.err += t.str();
  }
  std::ostringstream t;
  t.setf(std::ios::fixed);
  t.precision(2);
  t << "total: " << total << "s\n";
  res.err += t.str();
  if (json) {
    ordered_json j;
    j["verb"] = "selftest";
    int passed = 0;
    for (const auto& r : results)
      if (r.pass) ++passed;
    j["passed"] = passed;
    j["total"] = results.size();
    j["results"] = arr;
    emit_json(res, j);
  }
  res.status = all ? 0 : 1;
}

}  // namespace detail

// Parse the arguments and run one verb.  Never throws: every outcome is a
// status plus the exact bytes for stdout and stderr.
inline Outcome run(const Invocation& inv) {
  Outcome res;
  CLI::App app{"matroid algebra, trees of matroids, and circuit/cocircuit games"};
  app.require_subcommand(0, 1);

  struct {
    std::string path;
    bool json = false;
  } ax, rec;
  struct {
    std::string path, independent, within, order;
    bool json = false;
  } ext;
  struct {
    std::string path, contract, remove;
    bool dual = false, json = false;
  } info;
  struct {
    std::string path1, path2;
    bool json = false;
  } glue;
  struct {
    std::string path, edge, pco, pde;
    bool representable = false, witness = false, json = false;
  } solve;
  struct {
    std::string path;
    std::size_t cap = 10;
    bool json = false;
  } induced;
  struct {
    std::string path, edge, pco, pde;
    bool json = false;
  } dua;
  struct {
    std::string path, root;
    bool json = false;
  } tstruct;
  struct {
    std::string graph_path, structure_path, cls;
    bool json = false;
  } torso;
  struct {
    std::string graph_path, tree_path, root;
    bool json = false;
  } undom;
  struct {
    std::string kind, psi = "all";
    int depth = -1;
    bool json = false;
  } gen;
  struct {
    int criterion = 0;
    bool json = false;
  } self;

  CLI::App* s = nullptr;

  s = app.add_subcommand("check-axioms",
                         "Check the eight circuit/cocircuit axioms of a system document");
  s->add_option("system", ax.path, "system document, or - for stdin")->required();
  s->add_flag("--json", ax.json, "emit the report as one JSON document");
  s->callback([&] { detail::do_check_axioms(inv, res, ax.path, ax.json); });

  s = app.add_subcommand("reconstruct",
                         "Rebuild the matroid a valid system determines, as a matroid document");
  s->add_option("system", rec.path, "system document, or - for stdin")->required();
  s->add_flag("--json", rec.json, "emit the matroid as one JSON document");
  s->callback([&] { detail::do_reconstruct(inv, res, rec.path, rec.json); });

  s = app.add_subcommand("base-extend",
                         "Extend an independent set to a maximal one inside a window");
  s->add_option("system", ext.path, "system document, or - for stdin")->required();
  s->add_option("--independent", ext.independent, "starting independent set, e.g. \"a b\"");
  s->add_option("--within", ext.within, "the window to extend inside")->required();
  s->add_option("--order", ext.order, "enumeration order of the window (default: sorted)");
  s->add_flag("--json", ext.json, "emit the result as one JSON document");
  s->callback([&] {
    detail::do_base_extend(inv, res, ext.path, ext.independent, ext.within, ext.order, ext.json);
  });

  s = app.add_subcommand("matroid-info",
                         "Describe a matroid document; --dual/--contract/--delete emit a new one");
  s->add_option("matroid", info.path, "matroid document, or - for stdin")->required();
  s->add_flag("--dual", info.dual, "emit the dual matroid as a document");
  s->add_option("--contract", info.contract, "elements to contract, e.g. \"a b\"");
  s->add_option("--delete", info.remove, "elements to delete");
  s->add_flag("--json", info.json, "emit the description as one JSON document");
  s->callback([&] {
    detail::do_matroid_info(inv, res, info.path, info.dual, info.contract, info.remove,
                            info.json);
  });

  s = app.add_subcommand("glue", "Glue two represented matroids across their shared elements");
  s->add_option("first", glue.path1, "matroid document with a representation")->required();
  s->add_option("second", glue.path2, "matroid document with a representation")->required();
  s->add_flag("--json", glue.json, "emit the glued matroid as one JSON document");
  s->callback([&] { detail::do_glue(inv, res, glue.path1, glue.path2, glue.json); });

  s = app.add_subcommand("solve",
                         "Play the circuit game: is there a Ψ-circuit through the edge?");
  s->add_option("presentation", solve.path, "presentation document, or - for stdin")->required();
  s->add_option("--edge", solve.edge, "the real edge in question")->required();
  s->add_option("--pco", solve.pco, "real edges the circuit may also use");
  s->add_option("--pde", solve.pde, "real edges denied to the circuit (the default for all)");
  s->add_flag("--representable", solve.representable,
              "play the vector game on the carried representations instead");
  s->add_flag("--witness", solve.witness, "append Sarah's frozen strategy when she wins");
  s->add_flag("--json", solve.json, "emit the verdict as one JSON document");
  s->callback([&] {
    detail::do_solve(inv, res, solve.path, solve.edge, solve.pco, solve.pde, solve.representable,
                     solve.witness, solve.json);
  });

  s = app.add_subcommand("induced", "Compute the matroid the presentation induces on its reals");
  s->add_option("presentation", induced.path, "presentation document, or - for stdin")
      ->required();
  s->add_option("--cap", induced.cap, "largest real-edge count to attempt (default 10)");
  s->add_flag("--json", induced.json, "emit the matroid as one JSON document");
  s->callback([&] { detail::do_induced(inv, res, induced.path, induced.cap, induced.json); });

  s = app.add_subcommand("duality-check",
                         "Play the circuit game and its cocircuit companion; exactly one wins");
  s->add_option("presentation", dua.path, "presentation document, or - for stdin")->required();
  s->add_option("--edge", dua.edge, "the real edge in question")->required();
  s->add_option("--pco", dua.pco, "real edges the circuit may also use");
  s->add_option("--pde", dua.pde, "real edges denied to the circuit (the default for all)");
  s->add_flag("--json", dua.json, "emit the verdict as one JSON document");
  s->callback(
      [&] { detail::do_duality_check(inv, res, dua.path, dua.edge, dua.pco, dua.pde, dua.json); });

  s = app.add_subcommand("tree-structure",
                         "Build the tree structure of a normal spanning tree's rays");
  s->add_option("graph", tstruct.path, "graph document, or - for stdin")->required();
  s->add_option("--root", tstruct.root, "root vertex of the normal spanning tree")->required();
  s->add_flag("--json", tstruct.json, "emit the structure as one JSON document");
  s->callback(
      [&] { detail::do_tree_structure(inv, res, tstruct.path, tstruct.root, tstruct.json); });

  s = app.add_subcommand("torso", "Extract one class's torso from a graph and its structure");
  s->add_option("graph", torso.graph_path, "graph document, or - for stdin")->required();
  s->add_option("structure", torso.structure_path, "tree-structure document (may be the same file)")
      ->required();
  s->add_option("--class", torso.cls, "the class whose torso to extract")->required();
  s->add_flag("--json", torso.json, "emit the torso as one JSON document");
  s->callback([&] {
    detail::do_torso(inv, res, torso.graph_path, torso.structure_path, torso.cls, torso.json);
  });

  s = app.add_subcommand("undominate",
                         "Expand a graph along a spanning tree so no vertex dominates");
  s->add_option("graph", undom.graph_path, "graph document, or - for stdin")->required();
  s->add_option("tree", undom.tree_path, "graph document listing the spanning tree's edges")
      ->required();
  s->add_option("--root", undom.root, "root vertex (default: the least vertex)");
  s->add_flag("--json", undom.json, "emit the expansion as one JSON document");
  s->callback([&] {
    detail::do_undominate(inv, res, undom.graph_path, undom.tree_path, undom.root, undom.json);
  });

  s = app.add_subcommand("gen", "Generate a built-in example document");
  s->add_option("kind", gen.kind, "tgame, tk2, or t2k3")
      ->required()
      ->check(CLI::IsMember({"tgame", "tk2", "t2k3"}));
  s->add_option("--depth", gen.depth, "truncation depth for tk2 (default 8) and t2k3 (default 1)");
  s->add_option("--psi", gen.psi, "end condition for tgame: all, none, buchi, cobuchi");
  s->add_flag("--json", gen.json, "wrap the document in JSON");
  s->callback([&] { detail::do_gen(inv, res, gen.kind, gen.depth, gen.psi, gen.json); });

  s = app.add_subcommand("selftest", "Run the twelve acceptance checks (timings on stderr)");
  s->add_option("--criterion", self.criterion, "run a single check, 1-12")
      ->check(CLI::Range(1, 12));
  s->add_flag("--json", self.json, "emit the results as one JSON document");
  s->callback([&] { detail::do_selftest(inv, res, self.criterion, self.json); });

  try {
    std::vector<std::string> reversed(inv.args.rbegin(), inv.args.rend());
    app.parse(reversed);
    if (app.get_subcommands().empty()) {
      res.out += app.help();
      return res;
    }
  } catch (const CLI::CallForHelp&) {
    res.out += app.help();
  } catch (const CLI::Success&) {
    // other success-class outcomes print nothing further
  } catch (const CLI::ParseError& e) {
    res.err += std::string("error: ") + e.what() + "\n";
    res.status = 2;
  } catch (const input_error& e) {
    res.err += std::string("error: ") + e.what() + "\n";
    res.status = 2;
  } catch (const resource_error& e) {
    res.err += std::string("error: ") + e.what() + "\n";
    res.status = 3;
  } catch (const internal_error& e) {
    res.err += std::string("error: ") + e.what() + "\n";
    res.status = 4;
  } catch (const std::exception& e) {
    res.err += std::string("error: ") + e.what() + "\n";
    res.status = 4;
  }
  return res;
}

}  // namespace psimat::cli
