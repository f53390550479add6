#pragma once

// Text formats for everything the library trades in: matroids, circuit /
// cocircuit set systems, graphs, tree structures, and tree presentations.
// Documents are line oriented; '#' starts a comment and blank lines are
// skipped, so any serialized form survives hand annotation.  Parse failures
// are input_errors prefixed "line L, column C:" with 1-based positions.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "axioms.hpp"
#include "core.hpp"
#include "games.hpp"
#include "gf.hpp"
#include "graphs.hpp"
#include "matroid.hpp"
#include "tom.hpp"

namespace psimat::io {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
};

namespace detail {

inline std::string at(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
}

inline std::string at(const Token& t) { return at(t.line, t.col); }

struct Line {
  std::size_t no = 0;
  std::vector<Token> tokens;

  const Token& head() const { return tokens.front(); }
  const std::string& keyword() const { return tokens.front().text; }
};

inline std::vector<Line> scan(const std::string& text) {
  std::vector<Line> out;
  std::size_t line_no = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    Line ln;
    ln.no = line_no;
    for (std::size_t i = start; i < end;) {
      const char c = text[i];
      if (c == '#') break;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < end && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '#') ++j;
      ln.tokens.push_back({text.substr(i, j - i), line_no, i - start + 1});
      i = j;
    }
    if (!ln.tokens.empty()) out.push_back(std::move(ln));
    if (end == text.size()) break;
    start = end + 1;
    ++line_no;
  }
  return out;
}

inline int number(const Token& t) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(t.text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (t.text.empty() || pos != t.text.size())
    throw input_error(at(t) + "expected a number, got '" + t.text + "'");
  return v;
}

inline bool numeric_line(const Line& ln) {
  for (const Token& t : ln.tokens) {
    if (t.text.empty()) return false;
    std::size_t i = t.text[0] == '-' ? 1 : 0;
    if (i == t.text.size()) return false;
    for (; i < t.text.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) return false;
  }
  return true;
}

inline bool top_header(const std::string& k) {
  return k == "matroid" || k == "system" || k == "graph" || k == "presentation";
}

// Tree structures are headerless, so their two keywords also open a block.
inline bool block_start(const std::string& k) {
  return top_header(k) || k == "class" || k == "tedge";
}

// Field tag of the shape GF(p).
inline int field_of(const Token& t) {
  const std::string& s = t.text;
  if (s.size() >= 5 && s.substr(0, 3) == "GF(" && s.back() == ')') {
    Token inner{s.substr(3, s.size() - 4), t.line, t.col + 3};
    if (!inner.text.empty() && inner.text[0] != '-') return number(inner);
  }
  throw input_error(at(t) + "expected a field tag GF(p), got '" + s + "'");
}

}  // namespace detail

// --- matroids -----------------------------------------------------------------

struct NamedMatroid {
  std::string name;
  Matroid matroid;
};

namespace detail {

// Parses the matroid block headed by lines[i]; returns it with the index of
// the first line past the block.  Shared with the presentation parser, so it
// stops quietly at any foreign keyword and lets the caller judge the rest.
inline std::pair<NamedMatroid, std::size_t> matroid_block(const std::vector<Line>& lines,
                                                          std::size_t i,
                                                          std::size_t ground_cap) {
  const Line& head = lines[i];
  if (head.tokens.size() != 2)
    throw input_error(at(head.head()) + "the matroid header needs exactly one name");
  const std::string name = head.tokens[1].text;
  std::optional<LabelSet> ground;
  SetFamily circuits;
  bool saw_circuit = false;
  std::optional<int> characteristic;
  std::vector<std::vector<int>> rows;
  std::size_t j = i + 1;
  for (; j < lines.size(); ++j) {
    const Line& ln = lines[j];
    const std::string& k = ln.keyword();
    if (k == "ground:") {
      if (ground)
        throw input_error(at(ln.head()) + "a second ground line in matroid '" + name + "'");
      LabelSet g;
      for (std::size_t t = 1; t < ln.tokens.size(); ++t) g.insert(ln.tokens[t].text);
      ground = std::move(g);
    } else if (k == "circuit:") {
      if (characteristic)
        throw input_error(at(ln.head()) + "matroid '" + name +
                          "' mixes circuit lines with a representation");
      if (!ground)
        throw input_error(at(ln.head()) + "matroid '" + name +
                          "' needs its ground line before circuits");
      LabelSet c;
      for (std::size_t t = 1; t < ln.tokens.size(); ++t) {
        if (!ground->count(ln.tokens[t].text))
          throw input_error(at(ln.tokens[t]) + "the circuit element '" + ln.tokens[t].text +
                            "' is outside the ground set of matroid '" + name + "'");
        c.insert(ln.tokens[t].text);
      }
      circuits.insert(std::move(c));
      saw_circuit = true;
    } else if (k == "rep") {
      if (saw_circuit)
        throw input_error(at(ln.head()) + "matroid '" + name +
                          "' mixes circuit lines with a representation");
      if (characteristic)
        throw input_error(at(ln.head()) + "a second rep line in matroid '" + name + "'");
      if (!ground)
        throw input_error(at(ln.head()) + "matroid '" + name +
                          "' needs its ground line before the representation");
      if (ln.tokens.size() != 2) throw input_error(at(ln.head()) + "expected 'rep GF(p)'");
      characteristic = field_of(ln.tokens[1]);
    } else if (characteristic && numeric_line(ln)) {
      if (ln.tokens.size() != ground->size())
        throw input_error(at(ln.head()) + "the generator row has " +
                          std::to_string(ln.tokens.size()) + " entries for " +
                          std::to_string(ground->size()) + " ground elements");
      std::vector<int> row;
      for (const Token& t : ln.tokens) {
        const int v = number(t);
        if (v < 0 || v >= *characteristic)
          throw input_error(at(t) + "the entry " + t.text + " is not a residue mod " +
                            std::to_string(*characteristic));
        row.push_back(v);
      }
      rows.push_back(std::move(row));
    } else {
      break;
    }
  }
  if (!ground)
    throw input_error(at(head.head()) + "matroid '" + name + "' has no ground line");
  try {
    if (characteristic) {
      const std::vector<Label> order(ground->begin(), ground->end());
      std::vector<gf::Vec> gens;
      for (const std::vector<int>& row : rows) {
        gf::Vec v = gf::Vec::zero(*characteristic, *ground);
        for (std::size_t t = 0; t < order.size(); ++t)
          if (row[t] != 0) v.set(order[t], row[t]);
        gens.push_back(std::move(v));
      }
      const gf::Subspace u = gf::span(gens, *characteristic, *ground);
      return {{name, Matroid::from_representation(u, ground_cap)}, j};
    }
    return {{name, Matroid::from_circuits(*ground, circuits, ground_cap)}, j};
  } catch (const input_error& err) {
    throw input_error(at(head.head()) + "in matroid '" + name + "': " + err.what());
  }
}

inline void reject_trailing(const std::vector<Line>& lines, std::size_t next,
                            const std::string& what, const std::string& name) {
  if (next < lines.size() && !block_start(lines[next].keyword()))
    throw input_error(at(lines[next].head()) + "unexpected '" + lines[next].keyword() +
                      "' in " + what + " '" + name + "'");
}

}  // namespace detail

inline NamedMatroid parse_matroid(const std::string& text, std::size_t ground_cap = 16) {
  const std::vector<detail::Line> lines = detail::scan(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].keyword() != "matroid") continue;
    auto [nm, next] = detail::matroid_block(lines, i, ground_cap);
    detail::reject_trailing(lines, next, "matroid", nm.name);
    return nm;
  }
  throw input_error("the document has no matroid block");
}

inline std::string serialize_matroid(const std::string& name, const Matroid& m) {
  std::ostringstream out;
  out << "matroid " << name << "\n";
  out << "ground:";
  for (const Label& e : m.ground()) out << ' ' << e;
  out << "\n";
  if (m.representation()) {
    const gf::Subspace& u = *m.representation();
    out << "rep GF(" << u.p << ")\n";
    const std::vector<Label> order(u.ambient.begin(), u.ambient.end());
    for (const gf::Vec& v : u.basis) {
      for (std::size_t i = 0; i < order.size(); ++i) out << (i ? " " : "") << v.at(order[i]);
      out << "\n";
    }
  } else {
    for (const LabelSet& c : m.circuits()) {
      out << "circuit:";
      for (const Label& e : c) out << ' ' << e;
      out << "\n";
    }
  }
  return out.str();
}

// --- circuit / cocircuit set systems --------------------------------------------

struct NamedSystem {
  std::string name;
  SetSystemPair system;
};

inline NamedSystem parse_system(const std::string& text) {
  const std::vector<detail::Line> lines = detail::scan(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].keyword() != "system") continue;
    const detail::Line& head = lines[i];
    if (head.tokens.size() != 2)
      throw input_error(detail::at(head.head()) + "the system header needs exactly one name");
    const std::string name = head.tokens[1].text;
    std::optional<LabelSet> ground;
    SetFamily c_family, d_family;
    std::size_t j = i + 1;
    for (; j < lines.size(); ++j) {
      const detail::Line& ln = lines[j];
      const std::string& k = ln.keyword();
      if (k == "ground:") {
        if (ground)
          throw input_error(detail::at(ln.head()) + "a second ground line in system '" + name +
                            "'");
        LabelSet g;
        for (std::size_t t = 1; t < ln.tokens.size(); ++t) g.insert(ln.tokens[t].text);
        ground = std::move(g);
      } else if (k == "C:" || k == "D:") {
        if (!ground)
          throw input_error(detail::at(ln.head()) + "system '" + name +
                            "' needs its ground line before members");
        LabelSet s;
        for (std::size_t t = 1; t < ln.tokens.size(); ++t) {
          if (!ground->count(ln.tokens[t].text))
            throw input_error(detail::at(ln.tokens[t]) + "the element '" + ln.tokens[t].text +
                              "' is outside the ground set of system '" + name + "'");
          s.insert(ln.tokens[t].text);
        }
        (k == "C:" ? c_family : d_family).insert(std::move(s));
      } else {
        break;
      }
    }
    detail::reject_trailing(lines, j, "system", name);
    if (!ground)
      throw input_error(detail::at(head.head()) + "system '" + name + "' has no ground line");
    return {name, SetSystemPair{*ground, std::move(c_family), std::move(d_family)}};
  }
  throw input_error("the document has no system block");
}

inline std::string serialize_system(const std::string& name, const SetSystemPair& s) {
  std::ostringstream out;
  out << "system " << name << "\n";
  out << "ground:";
  for (const Label& e : s.ground) out << ' ' << e;
  out << "\n";
  for (const LabelSet& c : s.c_family) {
    out << "C:";
    for (const Label& e : c) out << ' ' << e;
    out << "\n";
  }
  for (const LabelSet& d : s.d_family) {
    out << "D:";
    for (const Label& e : d) out << ' ' << e;
    out << "\n";
  }
  return out.str();
}

// --- graphs ---------------------------------------------------------------------

struct NamedGraph {
  std::string name;
  graphs::Graph graph;
};

inline NamedGraph parse_graph(const std::string& text) {
  const std::vector<detail::Line> lines = detail::scan(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].keyword() != "graph") continue;
    const detail::Line& head = lines[i];
    if (head.tokens.size() != 2)
      throw input_error(detail::at(head.head()) + "the graph header needs exactly one name");
    const std::string name = head.tokens[1].text;
    graphs::Graph g;
    std::size_t j = i + 1;
    for (; j < lines.size(); ++j) {
      const detail::Line& ln = lines[j];
      const std::string& k = ln.keyword();
      if (k == "vertex") {
        if (ln.tokens.size() != 2)
          throw input_error(detail::at(ln.head()) + "a vertex line needs exactly one name");
        g.add_vertex(ln.tokens[1].text);
      } else if (k == "edge") {
        if (ln.tokens.size() != 3 && ln.tokens.size() != 4)
          throw input_error(detail::at(ln.head()) +
                            "an edge line needs two endpoints and at most one label");
        try {
          if (ln.tokens.size() == 3)
            g.add_edge(ln.tokens[1].text, ln.tokens[2].text);
          else
            g.add_edge(ln.tokens[1].text, ln.tokens[2].text, ln.tokens[3].text);
        } catch (const input_error& err) {
          throw input_error(detail::at(ln.head()) + err.what());
        }
      } else {
        break;
      }
    }
    detail::reject_trailing(lines, j, "graph", name);
    return {name, std::move(g)};
  }
  throw input_error("the document has no graph block");
}

inline std::string serialize_graph(const std::string& name, const graphs::Graph& g) {
  std::ostringstream out;
  out << "graph " << name << "\n";
  LabelSet covered;
  for (const auto& [label, ends] : g.edges) {
    covered.insert(ends.first);
    covered.insert(ends.second);
  }
  for (const Label& v : g.vertices)
    if (!covered.count(v)) out << "vertex " << v << "\n";
  for (const auto& [label, ends] : g.edges) {
    out << "edge " << ends.first << ' ' << ends.second;
    if (label != ends.first + "-" + ends.second) out << ' ' << label;
    out << "\n";
  }
  return out.str();
}

// --- tree structures --------------------------------------------------------------

// The text form carries only the classes and the declared tree edges; the
// graph it decorates arrives separately, so realization happens in two steps.
struct ParsedStructure {
  std::map<Label, LabelSet> classes;
  std::set<std::pair<Label, Label>> edges;
};

inline ParsedStructure parse_tree_structure(const std::string& text) {
  const std::vector<detail::Line> lines = detail::scan(text);
  ParsedStructure ps;
  bool in_other = false;
  for (const detail::Line& ln : lines) {
    const std::string& k = ln.keyword();
    if (k == "class") {
      in_other = false;
      if (ln.tokens.size() < 2 || ln.tokens[1].text.size() < 2 || ln.tokens[1].text.back() != ':')
        throw input_error(detail::at(ln.head()) + "expected 'class name:', got '" +
                          (ln.tokens.size() < 2 ? std::string() : ln.tokens[1].text) + "'");
      const Label name = ln.tokens[1].text.substr(0, ln.tokens[1].text.size() - 1);
      if (ps.classes.count(name))
        throw input_error(detail::at(ln.tokens[1]) + "a second class named '" + name + "'");
      LabelSet& members = ps.classes[name];
      for (std::size_t t = 2; t < ln.tokens.size(); ++t) members.insert(ln.tokens[t].text);
    } else if (k == "tedge") {
      in_other = false;
      if (ln.tokens.size() != 3)
        throw input_error(detail::at(ln.head()) + "a tedge line needs exactly two class names");
      const Label a = ln.tokens[1].text, b = ln.tokens[2].text;
      if (a == b)
        throw input_error(detail::at(ln.head()) + "a tree edge joins class '" + a +
                          "' to itself");
      ps.edges.insert({std::min(a, b), std::max(a, b)});
    } else if (detail::top_header(k)) {
      in_other = true;
    } else if (!in_other) {
      throw input_error(detail::at(ln.head()) + "unexpected '" + k + "' in the tree structure");
    }
  }
  if (ps.classes.empty()) throw input_error("the document has no tree structure (no class lines)");
  for (const auto& [a, b] : ps.edges)
    for (const Label& c : {a, b})
      if (!ps.classes.count(c))
        throw input_error("the tree edge '" + a + "'--'" + b + "' names the unknown class '" +
                          c + "'");
  return ps;
}

// Decorates the graph with the parsed classes and checks any declared tree
// edges against the derived ones.
inline graphs::TreeStructure realize(const ParsedStructure& ps, const graphs::Graph& g) {
  graphs::TreeStructure ts = graphs::make_tree_structure(g, ps.classes);
  if (!ps.edges.empty() && ps.edges != ts.edges) {
    std::string want;
    for (const auto& [a, b] : ts.edges) want += (want.empty() ? "" : ", ") + a + "--" + b;
    throw input_error("the declared tree edges do not match the classes; expected {" + want +
                      "}");
  }
  return ts;
}

inline std::string serialize_tree_structure(const graphs::TreeStructure& ts) {
  std::ostringstream out;
  for (const auto& [name, members] : ts.classes) {
    out << "class " << name << ":";
    for (const Label& v : members) out << ' ' << v;
    out << "\n";
  }
  for (const auto& [a, b] : ts.edges) out << "tedge " << a << ' ' << b << "\n";
  return out.str();
}

// --- tree presentations ------------------------------------------------------------

struct NamedPresentation {
  std::string name;
  tom::TreePresentation presentation;
};

inline NamedPresentation parse_presentation(const std::string& text,
                                            std::size_t ground_cap = 16) {
  const std::vector<detail::Line> lines = detail::scan(text);
  std::size_t i = 0;
  for (; i < lines.size(); ++i)
    if (lines[i].keyword() == "presentation") break;
  if (i == lines.size()) throw input_error("the document has no presentation block");
  const detail::Line& head = lines[i];
  if (head.tokens.size() != 2)
    throw input_error(detail::at(head.head()) + "the presentation header needs exactly one name");
  const std::string name = head.tokens[1].text;

  std::map<std::string, Matroid> matroids;
  std::map<tom::NodeName, Matroid> nodes;
  std::vector<std::pair<Token, Token>> edge_lines;
  std::optional<Token> root;
  std::map<tom::NodeName, Matroid> core;
  std::vector<tom::Transition> transitions;
  std::optional<LabelSet> declared_reals;
  std::optional<Token> reals_at;
  std::string section;

  const auto matroid_ref = [&](const Token& t) -> const Matroid& {
    const auto it = matroids.find(t.text);
    if (it == matroids.end())
      throw input_error(detail::at(t) + "unknown matroid '" + t.text + "'");
    return it->second;
  };

  std::size_t j = i + 1;
  while (j < lines.size()) {
    const detail::Line& ln = lines[j];
    const std::string& k = ln.keyword();
    if (k == "matroid") {
      auto [nm, next] = detail::matroid_block(lines, j, ground_cap);
      if (!matroids.emplace(nm.name, nm.matroid).second)
        throw input_error(detail::at(ln.head()) + "a second matroid named '" + nm.name + "'");
      j = next;
      continue;
    }
    if (detail::block_start(k)) break;
    if (k == "prefix" || k == "core" || k == "transitions" || k == "real-edges" ||
        k == "strategy") {
      if (ln.tokens.size() != 1)
        throw input_error(detail::at(ln.tokens[1]) + "the " + k +
                          " section header takes no arguments");
      section = k;
      ++j;
      continue;
    }
    if (section == "strategy") {
      ++j;
      continue;
    }
    if (section == "prefix") {
      if (k == "root") {
        if (ln.tokens.size() != 2)
          throw input_error(detail::at(ln.head()) + "the root line needs exactly one node name");
        if (root) throw input_error(detail::at(ln.head()) + "a second root line");
        root = ln.tokens[1];
      } else if (k == "node") {
        if (ln.tokens.size() != 3)
          throw input_error(detail::at(ln.head()) +
                            "a node line needs a name and a matroid reference");
        if (nodes.count(ln.tokens[1].text))
          throw input_error(detail::at(ln.tokens[1]) + "a second node named '" +
                            ln.tokens[1].text + "'");
        nodes.emplace(ln.tokens[1].text, matroid_ref(ln.tokens[2]));
      } else if (k == "edge") {
        if (ln.tokens.size() != 3)
          throw input_error(detail::at(ln.head()) + "an edge line needs exactly two node names");
        edge_lines.emplace_back(ln.tokens[1], ln.tokens[2]);
      } else {
        throw input_error(detail::at(ln.head()) + "unexpected '" + k +
                          "' in the prefix section");
      }
    } else if (section == "core") {
      if (k != "state")
        throw input_error(detail::at(ln.head()) + "unexpected '" + k + "' in the core section");
      if (ln.tokens.size() != 3)
        throw input_error(detail::at(ln.head()) +
                          "a state line needs a name and a matroid reference");
      if (core.count(ln.tokens[1].text))
        throw input_error(detail::at(ln.tokens[1]) + "a second state named '" +
                          ln.tokens[1].text + "'");
      core.emplace(ln.tokens[1].text, matroid_ref(ln.tokens[2]));
    } else if (section == "transitions") {
      if (ln.tokens.size() < 2)
        throw input_error(detail::at(ln.head()) + "a transition needs a source and a target");
      tom::Transition tr;
      tr.from = ln.tokens[0].text;
      tr.to = ln.tokens[1].text;
      std::size_t t = 2;
      for (; t < ln.tokens.size() && ln.tokens[t].text != "priority:"; ++t) {
        const std::string& s = ln.tokens[t].text;
        const std::size_t arrow = s.find("->");
        if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= s.size())
          throw input_error(detail::at(ln.tokens[t]) + "expected 'source->target', got '" + s +
                            "'");
        const Label src = s.substr(0, arrow), tgt = s.substr(arrow + 2);
        if (!tr.match.emplace(src, tgt).second)
          throw input_error(detail::at(ln.tokens[t]) + "the interface element '" + src +
                            "' is matched twice");
      }
      if (t < ln.tokens.size()) {
        if (t + 1 >= ln.tokens.size())
          throw input_error(detail::at(ln.tokens[t]) + "expected a number after 'priority:'");
        tr.priority = detail::number(ln.tokens[t + 1]);
        if (t + 2 < ln.tokens.size())
          throw input_error(detail::at(ln.tokens[t + 2]) + "unexpected tokens after the priority");
      }
      transitions.push_back(std::move(tr));
    } else if (section == "real-edges") {
      if (!declared_reals) {
        declared_reals = LabelSet{};
        reals_at = ln.head();
      }
      for (const Token& t : ln.tokens) declared_reals->insert(t.text);
    } else {
      throw input_error(detail::at(ln.head()) + "unexpected '" + k + "' before any section");
    }
    ++j;
  }
  detail::reject_trailing(lines, j, "presentation", name);

  if (nodes.empty())
    throw input_error(detail::at(head.head()) + "presentation '" + name +
                      "' declares no prefix nodes");
  if (!root)
    throw input_error(detail::at(head.head()) + "presentation '" + name +
                      "' declares no root");
  std::set<tom::NodeEdge> edges;
  for (const auto& [a, b] : edge_lines) {
    for (const Token& t : {a, b})
      if (!nodes.count(t.text))
        throw input_error(detail::at(t) + "the edge endpoint '" + t.text +
                          "' is not a declared node");
    try {
      edges.insert(tom::ordered(a.text, b.text));
    } catch (const input_error& err) {
      throw input_error(detail::at(a) + err.what());
    }
  }
  tom::TreePresentation pres;
  try {
    pres.prefix = tom::make_tree(std::move(nodes), std::move(edges));
    pres.root = root->text;
    pres.core = std::move(core);
    pres.transitions = std::move(transitions);
    tom::validate_presentation(pres);
  } catch (const input_error& err) {
    throw input_error(detail::at(head.head()) + "in presentation '" + name + "': " + err.what());
  }
  if (declared_reals) {
    const LabelSet computed = games::real_edges(pres);
    if (*declared_reals != computed)
      throw input_error(detail::at(*reals_at) + "the declared real edges " +
                        show_set(*declared_reals) + " do not match the presentation's " +
                        show_set(computed));
  }
  return {name, std::move(pres)};
}

inline std::string serialize_presentation(const std::string& name,
                                          const tom::TreePresentation& pres) {
  std::ostringstream out;
  out << "presentation " << name << "\n";
  out << "\n";
  for (const auto& [node, m] : pres.prefix.nodes) out << serialize_matroid(node, m);
  for (const auto& [state, m] : pres.core) out << serialize_matroid(state, m);
  out << "\n";
  out << "prefix\n";
  out << "root " << pres.root << "\n";
  for (const auto& [node, m] : pres.prefix.nodes) out << "node " << node << ' ' << node << "\n";
  for (const auto& [a, b] : pres.prefix.edges) out << "edge " << a << ' ' << b << "\n";
  out << "\n";
  out << "core\n";
  for (const auto& [state, m] : pres.core) out << "state " << state << ' ' << state << "\n";
  out << "\n";
  out << "transitions\n";
  for (const tom::Transition& tr : pres.transitions) {
    out << tr.from << ' ' << tr.to;
    for (const auto& [src, tgt] : tr.match) out << ' ' << src << "->" << tgt;
    out << " priority: " << tr.priority << "\n";
  }
  out << "\n";
  out << "real-edges\n";
  out << join(games::real_edges(pres)) << "\n";
  return out.str();
}

// --- strategy witnesses ------------------------------------------------------------

// A solved game serializes as its presentation plus a strategy section: one
// line per winning turn, "<state> <entry> <priority> : <circuit>".  The
// section is informative; the parser skips it, so witness documents stay
// valid presentation files.
inline std::string serialize_witness(const std::string& name, const tom::TreePresentation& pres,
                                     const games::GameOutcome& out) {
  std::string doc = serialize_presentation(name, pres);
  std::ostringstream w;
  w << "\nstrategy\n";
  for (const auto& [key, idx] : out.game.sarah_index) {
    if (out.solution.winner[idx] != games::Player::sarah) continue;
    const std::size_t mv = out.solution.strategy[idx];
    if (mv == games::ArenaSolution::no_move) continue;
    const auto& [state, entry, prio] = key;
    w << state << ' ' << entry << ' ' << prio << " : " << join(out.game.turns[mv].circuit)
      << "\n";
  }
  return doc + w.str();
}

namespace detail {

inline std::string vec_text(const gf::Vec& v) {
  std::string s;
  for (const auto& [e, val] : v.coord) s += (s.empty() ? "" : ",") + e + ":" + std::to_string(val);
  return s.empty() ? "0" : s;
}

}  // namespace detail

inline std::string serialize_vector_witness(const std::string& name,
                                            const games::RepresentedPresentation& rp,
                                            const games::VectorOutcome& out) {
  std::string doc = serialize_presentation(name, games::presentation_of(rp));
  std::ostringstream w;
  w << "\nstrategy\n";
  for (const auto& [key, idx] : out.game.sarah_index) {
    if (out.solution.winner[idx] != games::Player::sarah) continue;
    const std::size_t mv = out.solution.strategy[idx];
    if (mv == games::ArenaSolution::no_move) continue;
    const auto& [state, from, challenge, prio] = key;
    w << state << ' ' << (from.empty() ? "-" : from) << ' ' << detail::vec_text(challenge) << ' '
      << prio << " : " << detail::vec_text(out.game.turns[mv].vector) << "\n";
  }
  return doc + w.str();
}

}  // namespace psimat::io
