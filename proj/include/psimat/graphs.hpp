#pragma once

// Finite simple graphs with labelled edges, and the constructions that turn
// them into trees of matroids: normal spanning trees, tree structures and
// their torsos, interface subdivision, the vertex-pair expansion whose
// connectivity witnesses undomination, and the generators for the study
// corpus (ladders, the rigid ternary product, the recursion game).
//
// Derived labels follow fixed schemes: a leaving edge e kept at endpoint v
// becomes the half edge "e:v" with port vertex "e*", two leavers e, f toward
// the same neighbour class are joined by "e~f", and the expansion pairs
// vertex v with tree node t as "v|t".  Input labels must keep clear of '|'
// only where the expansion is involved.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "gf.hpp"
#include "matroid.hpp"
#include "tom.hpp"

namespace psimat::graphs {

// --- graphs -----------------------------------------------------------

struct Graph {
  LabelSet vertices;
  std::map<Label, std::pair<Label, Label>> edges;  // label -> endpoints, lesser first

  void add_vertex(const Label& v) { vertices.insert(v); }

  Label add_edge(const Label& u, const Label& v) {
    return add_edge(u, v, u < v ? u + "-" + v : v + "-" + u);
  }

  Label add_edge(const Label& u, const Label& v, const Label& label) {
    if (u == v)
      throw input_error("graph edges need two distinct endpoints; '" + u + "' repeats");
    if (edge_between(u, v))
      throw input_error("vertices '" + u + "' and '" + v + "' are already joined");
    if (edges.count(label)) throw input_error("edge label '" + label + "' is already in use");
    vertices.insert(u);
    vertices.insert(v);
    edges.emplace(label, u < v ? std::pair<Label, Label>{u, v} : std::pair<Label, Label>{v, u});
    return label;
  }

  bool has_vertex(const Label& v) const { return vertices.count(v) > 0; }

  const std::pair<Label, Label>& endpoints(const Label& label) const {
    auto it = edges.find(label);
    if (it == edges.end()) throw input_error("unknown edge '" + label + "'");
    return it->second;
  }

  LabelSet edge_labels() const {
    LabelSet out;
    for (const auto& [lbl, ends] : edges) out.insert(lbl);
    return out;
  }

  std::optional<Label> edge_between(const Label& u, const Label& v) const {
    for (const auto& [lbl, ends] : edges)
      if ((ends.first == u && ends.second == v) || (ends.first == v && ends.second == u))
        return lbl;
    return std::nullopt;
  }

  bool adjacent(const Label& u, const Label& v) const { return edge_between(u, v).has_value(); }

  LabelSet neighbors(const Label& v) const {
    LabelSet out;
    for (const auto& [lbl, ends] : edges) {
      if (ends.first == v) out.insert(ends.second);
      if (ends.second == v) out.insert(ends.first);
    }
    return out;
  }

  std::size_t degree(const Label& v) const { return neighbors(v).size(); }

  std::vector<LabelSet> components() const {
    std::vector<LabelSet> out;
    LabelSet seen;
    for (const auto& start : vertices) {
      if (seen.count(start)) continue;
      LabelSet comp{start};
      std::vector<Label> queue{start};
      while (!queue.empty()) {
        const Label v = queue.back();
        queue.pop_back();
        for (const auto& w : neighbors(v))
          if (comp.insert(w).second) queue.push_back(w);
      }
      seen = set_union(seen, comp);
      out.push_back(comp);
    }
    return out;
  }

  bool connected() const { return vertices.size() <= 1 || components().size() == 1; }

  Graph induced(const LabelSet& keep) const {
    Graph out;
    out.vertices = set_intersect(vertices, keep);
    for (const auto& [lbl, ends] : edges)
      if (out.vertices.count(ends.first) && out.vertices.count(ends.second))
        out.edges.emplace(lbl, ends);
    return out;
  }

  bool is_walk(const std::vector<Label>& seq) const {
    if (seq.empty()) return false;
    if (!has_vertex(seq.front())) return false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
      if (!adjacent(seq[i], seq[i + 1])) return false;
    return true;
  }

  bool repeats_edge(const std::vector<Label>& seq) const {
    LabelSet used;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const auto lbl = edge_between(seq[i], seq[i + 1]);
      if (!lbl) return false;
      if (!used.insert(*lbl).second) return true;
    }
    return false;
  }

  bool operator==(const Graph&) const = default;
};

// Edge sets of cycles: every touched vertex has degree two and the edges
// hang together.  Meant for torso-sized graphs, hence the hard cap.
inline SetFamily simple_cycles(const Graph& g, std::size_t cap = 20) {
  if (g.edges.size() > cap || g.edges.size() > 31)
    throw resource_error("cycle sweep over " + std::to_string(g.edges.size()) +
                         " edges exceeds the cap");
  const LabelSet label_set = g.edge_labels();
  const std::vector<Label> labels(label_set.begin(), label_set.end());
  SetFamily out;
  for (std::uint32_t mask = 1; mask < (1u << labels.size()); ++mask) {
    std::map<Label, int> degree;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!((mask >> i) & 1u)) continue;
      const auto& [u, v] = g.edges.at(labels[i]);
      ++degree[u];
      ++degree[v];
    }
    bool ok = true;
    for (const auto& [v, d] : degree)
      if (d != 2) { ok = false; break; }
    if (!ok) continue;
    LabelSet picked;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if ((mask >> i) & 1u) picked.insert(labels[i]);
    LabelSet seen{degree.begin()->first};
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& lbl : picked) {
        const auto& [u, v] = g.edges.at(lbl);
        if (seen.count(u) && !seen.count(v)) { seen.insert(v); grew = true; }
        if (seen.count(v) && !seen.count(u)) { seen.insert(u); grew = true; }
      }
    }
    if (seen.size() == degree.size()) out.insert(picked);
  }
  return out;
}

// Minimal edge cuts, one bipartition with both sides connected at a time,
// computed per component.
inline SetFamily bonds(const Graph& g, std::size_t cap = 20) {
  SetFamily out;
  for (const auto& comp : g.components()) {
    if (comp.size() > cap || comp.size() > 31)
      throw resource_error("bond sweep over " + std::to_string(comp.size()) +
                           " vertices exceeds the cap");
    const Graph part = g.induced(comp);
    const std::vector<Label> verts(comp.begin(), comp.end());
    const auto side_connected = [&](std::uint32_t mask) {
      if (mask == 0) return false;
      LabelSet keep;
      for (std::size_t i = 0; i < verts.size(); ++i)
        if ((mask >> i) & 1u) keep.insert(verts[i]);
      return part.induced(keep).components().size() == 1;
    };
    const std::uint32_t full = (1u << verts.size()) - 1;
    for (std::uint32_t side = 1; side < full; side += 2) {  // lowest vertex stays on one side
      if (!side_connected(side) || !side_connected(full & ~side)) continue;
      LabelSet cut;
      for (const auto& [lbl, ends] : part.edges) {
        const auto iu = static_cast<std::size_t>(
            std::lower_bound(verts.begin(), verts.end(), ends.first) - verts.begin());
        const auto iv = static_cast<std::size_t>(
            std::lower_bound(verts.begin(), verts.end(), ends.second) - verts.begin());
        if (((side >> iu) & 1u) != ((side >> iv) & 1u)) cut.insert(lbl);
      }
      if (!cut.empty()) out.insert(cut);
    }
  }
  return minimal_members(out);
}

// --- rooted spanning trees and their order ----------------------------

struct TreeOrder {
  Label root;
  LabelSet vertices;
  std::map<Label, Label> parent;  // absent exactly at the root
  std::map<Label, int> depth;
  LabelSet tree_edges;

  void require_vertex(const Label& v) const {
    if (!vertices.count(v)) throw input_error("unknown vertex '" + v + "'");
  }

  // a lies on the path from the root to b
  bool leq(const Label& a, const Label& b) const {
    require_vertex(a);
    require_vertex(b);
    Label cur = b;
    while (true) {
      if (cur == a) return true;
      auto it = parent.find(cur);
      if (it == parent.end()) return false;
      cur = it->second;
    }
  }

  bool comparable(const Label& a, const Label& b) const { return leq(a, b) || leq(b, a); }

  LabelSet down_closure(const LabelSet& xs) const {
    LabelSet out;
    for (const auto& x : xs) {
      require_vertex(x);
      Label cur = x;
      out.insert(cur);
      while (parent.count(cur)) {
        cur = parent.at(cur);
        out.insert(cur);
      }
    }
    return out;
  }

  // Vertices outside xs whose strict ancestors all lie inside xs.
  LabelSet minima_outside(const LabelSet& xs) const {
    LabelSet out;
    for (const auto& v : vertices) {
      if (xs.count(v)) continue;
      bool minimal = true;
      Label cur = v;
      while (parent.count(cur)) {
        cur = parent.at(cur);
        if (!xs.count(cur)) { minimal = false; break; }
      }
      if (minimal) out.insert(v);
    }
    return out;
  }

  std::vector<Label> tree_path(const Label& a, const Label& b) const {
    require_vertex(a);
    require_vertex(b);
    std::vector<Label> up;  // a, then its ancestors
    for (Label cur = a;;) {
      up.push_back(cur);
      auto it = parent.find(cur);
      if (it == parent.end()) break;
      cur = it->second;
    }
    const std::set<Label> on_up(up.begin(), up.end());
    Label meet = b;
    while (!on_up.count(meet)) meet = parent.at(meet);
    std::vector<Label> out;
    for (const auto& v : up) {
      out.push_back(v);
      if (v == meet) break;
    }
    std::vector<Label> tail;
    for (Label cur = b; cur != meet; cur = parent.at(cur)) tail.push_back(cur);
    out.insert(out.end(), tail.rbegin(), tail.rend());
    return out;
  }
};

inline TreeOrder make_tree_order(const Graph& g, const Label& root, const LabelSet& tree_edges) {
  if (!g.has_vertex(root)) throw input_error("unknown vertex '" + root + "'");
  for (const auto& lbl : tree_edges)
    if (!g.edges.count(lbl)) throw input_error("unknown edge '" + lbl + "'");
  TreeOrder order;
  order.root = root;
  order.vertices = g.vertices;
  order.tree_edges = tree_edges;
  order.depth[root] = 0;
  std::vector<Label> queue{root};
  while (!queue.empty()) {
    const Label v = queue.back();
    queue.pop_back();
    for (const auto& lbl : tree_edges) {
      const auto& [a, b] = g.edges.at(lbl);
      for (const auto& [from, to] : {std::pair<Label, Label>{a, b}, {b, a}}) {
        if (from != v || order.depth.count(to)) continue;
        order.parent[to] = v;
        order.depth[to] = order.depth[v] + 1;
        queue.push_back(to);
      }
    }
  }
  if (order.depth.size() != g.vertices.size() || tree_edges.size() + 1 != g.vertices.size())
    throw input_error("the chosen edges do not form a spanning tree of the graph");
  return order;
}

// Depth-first from the root, neighbours in label order.  The result is
// normal: every graph edge joins a vertex to one of its ancestors.
inline TreeOrder normal_spanning_tree(const Graph& g, const Label& root) {
  if (!g.has_vertex(root)) throw input_error("unknown vertex '" + root + "'");
  if (!g.connected())
    throw input_error("the graph is disconnected, so it has no spanning tree");
  LabelSet tree_edges;
  LabelSet seen{root};
  std::function<void(const Label&)> dive = [&](const Label& v) {
    for (const auto& w : g.neighbors(v)) {
      if (seen.count(w)) continue;
      seen.insert(w);
      tree_edges.insert(*g.edge_between(v, w));
      dive(w);
    }
  };
  dive(root);
  return make_tree_order(g, root, tree_edges);
}

inline bool is_normal(const Graph& g, const TreeOrder& order) {
  if (order.vertices != g.vertices || !is_subset(order.tree_edges, g.edge_labels()))
    throw input_error("the order does not come from a spanning tree of this graph");
  for (const auto& [lbl, ends] : g.edges)
    if (!order.comparable(ends.first, ends.second)) return false;
  return true;
}

// --- tree structures and torsos ---------------------------------------

struct TreeStructure {
  std::map<Label, LabelSet> classes;        // class name -> vertices
  std::set<std::pair<Label, Label>> edges;  // class adjacency, always a tree
  std::map<Label, Label> owner;             // vertex -> class name

  const Label& class_of(const Label& v) const {
    auto it = owner.find(v);
    if (it == owner.end()) throw input_error("vertex '" + v + "' lies in no class");
    return it->second;
  }
};

inline TreeStructure make_tree_structure(const Graph& g,
                                         const std::map<Label, LabelSet>& classes) {
  TreeStructure out;
  out.classes = classes;
  for (const auto& [name, members] : classes) {
    if (members.empty()) throw input_error("class '" + name + "' is empty");
    const LabelSet strangers = set_minus(members, g.vertices);
    if (!strangers.empty())
      throw input_error("class '" + name + "' mentions unknown vertices " + show_set(strangers));
    for (const auto& v : members) {
      auto [it, fresh] = out.owner.emplace(v, name);
      if (!fresh)
        throw input_error("vertex '" + v + "' appears in classes '" + it->second + "' and '" +
                          name + "'");
    }
  }
  LabelSet owned;
  for (const auto& [v, c] : out.owner) owned.insert(v);
  const LabelSet missed = set_minus(g.vertices, owned);
  if (!missed.empty()) throw input_error("the classes do not cover " + show_set(missed));
  for (const auto& [name, members] : classes)
    if (!g.induced(members).connected())
      throw input_error("class '" + name + "' does not induce a connected subgraph");
  for (const auto& [lbl, ends] : g.edges) {
    const Label& a = out.owner.at(ends.first);
    const Label& b = out.owner.at(ends.second);
    if (a != b) out.edges.insert(a < b ? std::pair<Label, Label>{a, b} : std::pair<Label, Label>{b, a});
  }
  // the class adjacency must be a tree: size check plus connectivity
  if (out.edges.size() + 1 != classes.size())
    throw input_error("the class adjacency must form a tree");
  std::set<Label> reached{classes.begin()->first};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [a, b] : out.edges) {
      if (reached.count(a) && !reached.count(b)) { reached.insert(b); grew = true; }
      if (reached.count(b) && !reached.count(a)) { reached.insert(a); grew = true; }
    }
  }
  if (reached.size() != classes.size())
    throw input_error("the class adjacency must form a tree");
  return out;
}

// The recursion that peels a normal spanning tree into a tree structure:
// alternately close downward under neighbourhoods and adjoin the minimal
// vertices not yet covered; each fresh minimal vertex names the class of
// everything above it that the round brought in.
inline TreeStructure tree_structure_from_nst(const Graph& g, const TreeOrder& order) {
  if (!is_normal(g, order))
    throw input_error("the spanning tree is not normal in this graph");
  std::map<Label, LabelSet> classes;
  LabelSet covered;
  while (covered != g.vertices) {
    const LabelSet fresh = order.minima_outside(covered);
    LabelSet hull = covered;
    for (const auto& v : covered) hull = set_union(hull, g.neighbors(v));
    const LabelSet next = set_union(order.down_closure(hull), fresh);
    for (const auto& v : fresh) {
      LabelSet members;
      for (const auto& w : next)
        if (order.leq(v, w)) members.insert(w);
      classes.emplace(v, members);
    }
    if (next == covered) throw internal_error("the closure recursion stalled");
    covered = next;
  }
  std::size_t total = 0;
  for (const auto& [name, members] : classes) total += members.size();
  if (total != g.vertices.size())
    throw internal_error("the closure recursion must partition the vertex set");
  return make_tree_structure(g, classes);
}

inline LabelSet cross_edges(const Graph& g, const TreeStructure& ts, const Label& a,
                            const Label& b) {
  if (!ts.classes.count(a)) throw input_error("unknown class '" + a + "'");
  if (!ts.classes.count(b)) throw input_error("unknown class '" + b + "'");
  LabelSet out;
  for (const auto& [lbl, ends] : g.edges) {
    const Label& ca = ts.class_of(ends.first);
    const Label& cb = ts.class_of(ends.second);
    if ((ca == a && cb == b) || (ca == b && cb == a)) out.insert(lbl);
  }
  return out;
}

inline bool width_two(const Graph& g, const TreeStructure& ts) {
  for (const auto& [a, b] : ts.edges)
    if (cross_edges(g, ts, a, b).size() != 2) return false;
  return true;
}

inline Label half_label(const Label& edge, const Label& end) { return edge + ":" + end; }
inline Label pair_label(const Label& e, const Label& f) {
  return e < f ? e + "~" + f : f + "~" + e;
}
inline Label port_vertex(const Label& edge) { return edge + "*"; }

struct Torso {
  Label cls;
  Graph graph;
  LabelSet internal_edges;  // both endpoints in the class, original labels
  LabelSet pendant_edges;   // kept halves "e:v" toward a port
  LabelSet dummy_edges;     // "e~f" joining ports toward one neighbour class
};

// Keep the class, cut every leaving edge at a fresh port, and join ports
// that leave toward the same neighbour class.  Adjacent torsos share exactly
// the dummy labels of their common interface.
inline Torso torso(const Graph& g, const TreeStructure& ts, const Label& cls) {
  if (!ts.classes.count(cls)) throw input_error("unknown class '" + cls + "'");
  const LabelSet& inside = ts.classes.at(cls);
  Torso out;
  out.cls = cls;
  for (const auto& v : inside) out.graph.add_vertex(v);
  std::map<Label, std::vector<Label>> leavers;  // neighbour class -> edge labels
  for (const auto& [lbl, ends] : g.edges) {
    const bool u_in = inside.count(ends.first) > 0;
    const bool v_in = inside.count(ends.second) > 0;
    if (u_in && v_in) {
      out.graph.add_edge(ends.first, ends.second, lbl);
      out.internal_edges.insert(lbl);
    } else if (u_in || v_in) {
      const Label& kept = u_in ? ends.first : ends.second;
      const Label& gone = u_in ? ends.second : ends.first;
      out.graph.add_edge(kept, port_vertex(lbl), half_label(lbl, kept));
      out.pendant_edges.insert(half_label(lbl, kept));
      leavers[ts.class_of(gone)].push_back(lbl);
    }
  }
  for (const auto& [nb, group] : leavers)
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        out.graph.add_edge(port_vertex(group[i]), port_vertex(group[j]),
                           pair_label(group[i], group[j]));
        out.dummy_edges.insert(pair_label(group[i], group[j]));
      }
  return out;
}

inline bool bond_dummy_bound(const Torso& t, std::size_t k) {
  for (const auto& b : bonds(t.graph))
    if (set_intersect(b, t.dummy_edges).size() > k) return false;
  return true;
}

inline bool circuit_dummy_bound(const Torso& t, std::size_t k) {
  for (const auto& c : simple_cycles(t.graph))
    if (set_intersect(c, t.dummy_edges).size() > k) return false;
  return true;
}

// --- cycle spaces and trees of matroids -------------------------------

// Spanned by the fundamental cycles of a breadth-first forest.
inline gf::Subspace cycle_space(const Graph& g) {
  const LabelSet ambient = g.edge_labels();
  std::map<Label, LabelSet> to_root;  // vertex -> edge labels on its root path
  LabelSet tree;
  for (const auto& comp : g.components()) {
    const Label root = *comp.begin();
    to_root[root] = {};
    std::vector<Label> queue{root};
    while (!queue.empty()) {
      const Label v = queue.back();
      queue.pop_back();
      for (const auto& w : g.neighbors(v)) {
        if (to_root.count(w)) continue;
        const Label lbl = *g.edge_between(v, w);
        tree.insert(lbl);
        to_root[w] = set_with(to_root[v], lbl);
        queue.push_back(w);
      }
    }
  }
  std::vector<gf::Vec> rows;
  for (const auto& [lbl, ends] : g.edges) {
    if (tree.count(lbl)) continue;
    gf::Vec v = gf::Vec::zero(2, ambient);
    v.set(lbl, 1);
    for (const auto& e : sym_diff(to_root.at(ends.first), to_root.at(ends.second))) v.set(e, 1);
    rows.push_back(v);
  }
  return gf::span(rows, 2, ambient);
}

inline Matroid cycle_matroid(const Graph& g,
                             std::size_t ground_cap = Matroid::default_ground_cap) {
  return Matroid::from_representation(cycle_space(g), ground_cap);
}

inline tom::ExplicitTreeOfMatroids tree_of_matroids(
    const Graph& g, const TreeStructure& ts,
    std::size_t ground_cap = Matroid::default_ground_cap) {
  std::map<tom::NodeName, Matroid> nodes;
  for (const auto& [name, members] : ts.classes)
    nodes.emplace(name, cycle_matroid(torso(g, ts, name).graph, ground_cap));
  return tom::make_tree(std::move(nodes), ts.edges);
}

inline tom::TreeRepresentation binary_representation(const Graph& g, const TreeStructure& ts) {
  std::map<tom::NodeName, gf::Subspace> spaces;
  for (const auto& [name, members] : ts.classes)
    spaces.emplace(name, cycle_space(torso(g, ts, name).graph));
  return tom::make_representation(std::move(spaces), ts.edges);
}

// One fresh vertex per crossing edge; the halves keep the torso labels, so
// the result has exactly the real edges of the glued tree of matroids.
inline Graph subdivide_interfaces(const Graph& g, const TreeStructure& ts) {
  Graph out;
  for (const auto& v : g.vertices) out.add_vertex(v);
  for (const auto& [lbl, ends] : g.edges) {
    if (ts.class_of(ends.first) == ts.class_of(ends.second)) {
      out.add_edge(ends.first, ends.second, lbl);
    } else {
      out.add_edge(ends.first, port_vertex(lbl), half_label(lbl, ends.first));
      out.add_edge(ends.second, port_vertex(lbl), half_label(lbl, ends.second));
    }
  }
  return out;
}

// --- the vertex-pair expansion ----------------------------------------

inline Label product_vertex(const Label& v, const Label& t) { return v + "|" + t; }

inline std::pair<Label, Label> split_product(const Label& vt) {
  const auto cut = vt.find('|');
  if (cut == std::string::npos)
    throw input_error("'" + vt + "' is not a product vertex");
  return {vt.substr(0, cut), vt.substr(cut + 1)};
}

// Vertices are pairs v|t.  Moving in the second coordinate follows a tree
// edge; the two pairs over a graph edge swap coordinates.  Every vertex
// meets at most one swap edge.
inline Graph undomination_graph(const Graph& g, const TreeOrder& order) {
  if (order.vertices != g.vertices || !is_subset(order.tree_edges, g.edge_labels()))
    throw input_error("the order must come from a spanning tree of the graph");
  for (const auto& v : g.vertices)
    if (v.find('|') != std::string::npos)
      throw input_error("vertex labels may not contain '|'; rename '" + v + "'");
  Graph out;
  for (const auto& v : g.vertices)
    for (const auto& t : g.vertices) out.add_vertex(product_vertex(v, t));
  for (const auto& v : g.vertices)
    for (const auto& lbl : order.tree_edges) {
      const auto& [a, b] = g.edges.at(lbl);
      out.add_edge(product_vertex(v, a), product_vertex(v, b), "t:" + v + "|" + a + "~" + b);
    }
  for (const auto& [lbl, ends] : g.edges)
    out.add_edge(product_vertex(ends.first, ends.second),
                 product_vertex(ends.second, ends.first), "g:" + lbl);
  return out;
}

// Lift a walk into the expansion: ride the tree inside one layer up to the
// next swap, swap, repeat; start at the first vertex over `from` and finish
// over `to`.
inline std::vector<Label> walk_u(const Graph& g, const TreeOrder& order,
                                 const std::vector<Label>& walk, const Label& from,
                                 const Label& to) {
  if (!g.is_walk(walk)) throw input_error("the given sequence is not a walk in the graph");
  std::vector<Label> out;
  const std::size_t n = walk.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Label& here = walk[i];
    const Label& seg_from = i == 0 ? from : walk[i - 1];
    const Label& seg_to = i + 1 < n ? walk[i + 1] : to;
    for (const auto& t : order.tree_path(seg_from, seg_to)) out.push_back(product_vertex(here, t));
  }
  return out;
}

// Drop a walk of the expansion to the graph: keep the first coordinate,
// which changes exactly at the swap edges.
inline std::vector<Label> walk_g(const Graph& g, const std::vector<Label>& uwalk) {
  if (uwalk.empty()) throw input_error("an empty sequence is not a walk");
  std::vector<Label> out{split_product(uwalk.front()).first};
  for (std::size_t i = 0; i + 1 < uwalk.size(); ++i) {
    const auto [v, t] = split_product(uwalk[i]);
    const auto [w, s] = split_product(uwalk[i + 1]);
    if (!g.has_vertex(v) || !g.has_vertex(t) || !g.has_vertex(w) || !g.has_vertex(s))
      throw input_error("the sequence is not a walk in the expansion of this graph");
    if (v == w) {
      if (!g.adjacent(t, s))
        throw input_error("the sequence is not a walk in the expansion of this graph");
    } else {
      if (v != s || t != w || !g.adjacent(v, w))
        throw input_error("the sequence is not a walk in the expansion of this graph");
      out.push_back(w);
    }
  }
  return out;
}

// --- generators for the study corpus ----------------------------------

// The rank-alternating recursion game: one real edge at the root, ranks one
// and two alternating along a binary unfolding, every transition silent.
inline tom::TreePresentation gen_tgame() {
  tom::TreePresentation pres;
  pres.prefix = tom::make_tree({{"r", uniform_matroid(1, {"d0", "c0", "c1"})}}, {});
  pres.root = "r";
  pres.core = {{"odd", uniform_matroid(2, {"in", "out0", "out1"})},
               {"even", uniform_matroid(1, {"in", "out0", "out1"})}};
  pres.transitions = {{"r", "odd", {{"c0", "in"}}, 0},    {"r", "odd", {{"c1", "in"}}, 0},
                      {"odd", "even", {{"out0", "in"}}, 0}, {"odd", "even", {{"out1", "in"}}, 0},
                      {"even", "odd", {{"out0", "in"}}, 0}, {"even", "odd", {{"out1", "in"}}, 0}};
  return pres;
}

// The tree with exactly one vertex of each degree at least two: a spine
// w2-w3-w4-... where wN carries pendant leaves up to degree N, truncated at
// the given radius around w2.
inline Graph gen_degree_tree(int depth) {
  if (depth < 0) throw input_error("the radius must be nonnegative");
  Graph out;
  out.add_vertex("w2");
  for (int k = 3; k - 2 <= depth; ++k)
    out.add_edge("w" + std::to_string(k - 1), "w" + std::to_string(k));
  for (int k = 2; k - 2 <= depth; ++k) {
    if (k - 1 > depth) continue;  // its leaves sit one step deeper
    const int leaves = k == 2 ? 1 : k - 2;
    for (int i = 1; i <= leaves; ++i)
      out.add_edge("w" + std::to_string(k), "w" + std::to_string(k) + "." + std::to_string(i));
  }
  return out;
}

// Product of a tree (truncated around the root) with a single edge; the
// second copy primes every vertex name.
inline Graph gen_t_k2(const Graph& tree, const Label& root, int depth) {
  if (!tree.connected() || tree.edges.size() + 1 != tree.vertices.size())
    throw input_error("the first factor must be a tree");
  if (!tree.has_vertex(root)) throw input_error("unknown vertex '" + root + "'");
  if (depth < 0) throw input_error("the radius must be nonnegative");
  std::map<Label, int> dist{{root, 0}};
  std::vector<Label> queue{root};
  while (!queue.empty()) {
    const Label v = queue.back();
    queue.pop_back();
    for (const auto& w : tree.neighbors(v))
      if (!dist.count(w)) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  Graph out;
  for (const auto& [v, d] : dist) {
    if (d > depth) continue;
    out.add_edge(v, v + "'");
  }
  for (const auto& [lbl, ends] : tree.edges) {
    if (dist.at(ends.first) > depth || dist.at(ends.second) > depth) continue;
    out.add_edge(ends.first, ends.second);
    out.add_edge(ends.first + "'", ends.second + "'");
  }
  return out;
}

// Colours of the parent edges in the rooted binary tree: the root's child
// edges take colour zero, children of an odd-level vertex take the two other
// colours in order, children of an even-level vertex repeat its colour.
inline std::map<Label, int> gen_coloring(int depth) {
  if (depth < 0) throw input_error("the radius must be nonnegative");
  std::map<Label, int> colors;
  std::vector<std::pair<Label, int>> level;  // vertex name, parent-edge colour
  if (depth >= 1) {
    colors["s0"] = colors["s1"] = 0;
    level = {{"s0", 0}, {"s1", 0}};
  }
  for (int len = 2; len <= depth; ++len) {
    std::vector<std::pair<Label, int>> next;
    for (const auto& [name, c] : level) {
      const bool odd = (name.size() - 1) % 2 == 1;
      int lo = c, hi = c;
      if (odd) {
        std::vector<int> others;
        for (int i = 0; i < 3; ++i)
          if (i != c) others.push_back(i);
        lo = others[0];
        hi = others[1];
      }
      colors[name + "0"] = lo;
      colors[name + "1"] = hi;
      next.push_back({name + "0", lo});
      next.push_back({name + "1", hi});
    }
    level = std::move(next);
  }
  return colors;
}

struct T2K3 {
  Graph graph;
  TreeStructure structure;
};

// Product of the binary tree with a triangle, with the coloured copy of
// each tree edge removed: every class is one triangle and adjacent classes
// are joined by exactly two edges.
inline T2K3 gen_t2_k3(int depth) {
  const auto colors = gen_coloring(depth);
  Graph g;
  std::vector<Label> names{"s"};
  for (const auto& [child, c] : colors) names.push_back(child);
  std::map<Label, LabelSet> classes;
  for (const auto& name : names) {
    LabelSet members;
    for (int i = 0; i < 3; ++i) members.insert(name + "_" + std::to_string(i));
    for (const auto& a : members)
      for (const auto& b : members)
        if (a < b && !g.adjacent(a, b)) g.add_edge(a, b);
    classes.emplace(name, members);
  }
  for (const auto& [child, c] : colors) {
    const Label parent = child.substr(0, child.size() - 1);
    for (int i = 0; i < 3; ++i) {
      if (i == c) continue;
      g.add_edge(parent + "_" + std::to_string(i), child + "_" + std::to_string(i));
    }
  }
  T2K3 out{std::move(g), {}};
  out.structure = make_tree_structure(out.graph, classes);
  return out;
}

}  // namespace psimat::graphs
