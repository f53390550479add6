#pragma once
// Trees of matroids.  A finite tree whose nodes carry matroids; adjacent
// nodes may share ground elements (the interface, or "dummy" edges of that
// tree edge), and sharing between non-adjacent nodes is illegal.  The ground
// set of the whole object is the set of elements owned by exactly one node.
//
//  * ExplicitTreeOfMatroids: concrete finite trees, node-wise dual/minor (the
//    dummies are never touched), precircuit validation and enumeration.
//  * delta_glue: (U1 + U2) restricted to the symmetric difference of the
//    ambients; the vector-space composition underlying two-sums.
//  * TreeRepresentation/PsiVector: node-wise subspaces glued along interface
//    agreement, with the alternating-sign pairing that certifies counting
//    orthogonality (the pairing vanishes; supports never meet in one element).
//  * TreePresentation: a finite prefix plus a finite state core presenting an
//    infinite self-similar tree; unfold() materializes any finite depth, and
//    truncate() of a deeper unfolding reproduces a shallower one exactly.
//
// Generated instance names are `parent/i` and renamed elements `instance:x`,
// so presentation names must avoid '/'.  Truncation artifacts are tracked in
// `boundary`: cut interfaces become real edges of the finite tree but several
// operations (the pairing above all) refuse vectors that reach them.

#include <cstdint>
#include <deque>
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

namespace psimat::tom {

using NodeName = std::string;
using NodeEdge = std::pair<NodeName, NodeName>;

inline NodeEdge ordered(NodeName a, NodeName b) {
  if (a == b) throw input_error("tree edge joins node '" + a + "' to itself");
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

inline bool same_matroid(const Matroid& a, const Matroid& b) {
  return a.ground() == b.ground() && a.circuits() == b.circuits();
}

namespace detail {

// Shape rules shared by matroid trees and representation trees: edges must
// form a tree over the given nodes, and element sharing must follow edges.
inline void check_shape(const std::map<NodeName, LabelSet>& ambient,
                        const std::set<NodeEdge>& edges) {
  if (ambient.empty()) throw input_error("a tree of matroids needs at least one node");
  for (const auto& [a, b] : edges) {
    if (!ambient.count(a)) throw input_error("tree edge uses unknown node '" + a + "'");
    if (!ambient.count(b)) throw input_error("tree edge uses unknown node '" + b + "'");
  }
  for (auto i = ambient.begin(); i != ambient.end(); ++i)
    for (auto j = std::next(i); j != ambient.end(); ++j) {
      const LabelSet shared = set_intersect(i->second, j->second);
      if (!shared.empty() && !edges.count(ordered(i->first, j->first)))
        throw input_error("nodes '" + i->first + "' and '" + j->first + "' share " +
                          show_set(shared) + " without a tree edge");
    }
  if (edges.size() + 1 != ambient.size())
    throw input_error("the node adjacency must form a tree (" +
                      std::to_string(ambient.size()) + " nodes need " +
                      std::to_string(ambient.size() - 1) + " edges, got " +
                      std::to_string(edges.size()) + ")");
  std::map<NodeName, std::vector<NodeName>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<NodeName> seen = {ambient.begin()->first};
  std::deque<NodeName> queue = {ambient.begin()->first};
  while (!queue.empty()) {
    const NodeName t = queue.front();
    queue.pop_front();
    for (const auto& u : adj[t])
      if (seen.insert(u).second) queue.push_back(u);
  }
  if (seen.size() != ambient.size())
    throw input_error("the node adjacency must form a connected tree");
}

inline std::map<NodeName, int> bfs_distances(const std::set<NodeEdge>& edges,
                                             const NodeName& base) {
  std::map<NodeName, std::vector<NodeName>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<NodeName, int> dist = {{base, 0}};
  std::deque<NodeName> queue = {base};
  while (!queue.empty()) {
    const NodeName t = queue.front();
    queue.pop_front();
    for (const auto& u : adj[t])
      if (!dist.count(u)) {
        dist[u] = dist[t] + 1;
        queue.push_back(u);
      }
  }
  return dist;
}

}  // namespace detail

struct ExplicitTreeOfMatroids {
  std::map<NodeName, Matroid> nodes;
  std::set<NodeEdge> edges;
  LabelSet boundary;  // real edges that are truncation artifacts

  LabelSet interface(const NodeName& a, const NodeName& b) const {
    return set_intersect(nodes.at(a).ground(), nodes.at(b).ground());
  }

  LabelSet dummies() const {
    LabelSet s;
    for (const auto& [a, b] : edges) s = set_union(s, interface(a, b));
    return s;
  }

  LabelSet ground() const {
    LabelSet all;
    for (const auto& [name, m] : nodes) {
      (void)name;
      all = set_union(all, m.ground());
    }
    return set_minus(all, dummies());
  }

  bool overlap_one() const {
    for (const auto& [a, b] : edges)
      if (interface(a, b).size() != 1) return false;
    return true;
  }

  std::vector<NodeName> neighbors(const NodeName& t) const {
    std::vector<NodeName> out;
    for (const auto& [a, b] : edges) {
      if (a == t) out.push_back(b);
      if (b == t) out.push_back(a);
    }
    return out;
  }

  std::map<NodeName, int> distances(const NodeName& base) const {
    if (!nodes.count(base)) throw input_error("unknown base node '" + base + "'");
    return detail::bfs_distances(edges, base);
  }

  // The unique node carrying a real edge.
  NodeName owner(const Label& e) const {
    const LabelSet shared = dummies();
    if (contains(shared, e))
      throw input_error("'" + e + "' is a dummy edge, owned by two nodes");
    for (const auto& [name, m] : nodes)
      if (contains(m.ground(), e)) return name;
    throw input_error("'" + e + "' is outside the ground set of the tree");
  }
};

inline bool operator==(const ExplicitTreeOfMatroids& x, const ExplicitTreeOfMatroids& y) {
  if (x.edges != y.edges || x.boundary != y.boundary) return false;
  if (x.nodes.size() != y.nodes.size()) return false;
  for (const auto& [name, m] : x.nodes) {
    const auto it = y.nodes.find(name);
    if (it == y.nodes.end() || !same_matroid(m, it->second)) return false;
  }
  return true;
}
inline bool operator!=(const ExplicitTreeOfMatroids& x, const ExplicitTreeOfMatroids& y) {
  return !(x == y);
}

inline ExplicitTreeOfMatroids make_tree(std::map<NodeName, Matroid> nodes,
                                        std::set<NodeEdge> edges, LabelSet boundary = {}) {
  std::map<NodeName, LabelSet> ambient;
  for (const auto& [name, m] : nodes) ambient.emplace(name, m.ground());
  detail::check_shape(ambient, edges);
  ExplicitTreeOfMatroids t;
  t.nodes = std::move(nodes);
  t.edges = std::move(edges);
  t.boundary = std::move(boundary);
  if (!is_subset(t.boundary, t.ground()))
    throw input_error("boundary labels " + show_set(set_minus(t.boundary, t.ground())) +
                      " are not real edges of the tree");
  return t;
}

inline ExplicitTreeOfMatroids dual(const ExplicitTreeOfMatroids& t) {
  ExplicitTreeOfMatroids d;
  for (const auto& [name, m] : t.nodes) d.nodes.emplace(name, m.dual());
  d.edges = t.edges;
  d.boundary = t.boundary;
  return d;
}

// Node-wise minor: contract/delete real edges in the node that owns them.
// Dummy edges structure the tree and may never be touched.
inline ExplicitTreeOfMatroids minor(const ExplicitTreeOfMatroids& t, const LabelSet& contract,
                                    const LabelSet& remove) {
  if (!disjoint(contract, remove))
    throw input_error("contract and delete sets overlap in " +
                      show_set(set_intersect(contract, remove)));
  const LabelSet touched = set_union(contract, remove);
  const LabelSet shared = t.dummies();
  if (!disjoint(touched, shared))
    throw input_error("minors may only touch real edges; " +
                      show_set(set_intersect(touched, shared)) + " are dummy edges");
  if (!is_subset(touched, t.ground()))
    throw input_error("elements " + show_set(set_minus(touched, t.ground())) +
                      " are outside the ground set of the tree");
  ExplicitTreeOfMatroids out;
  for (const auto& [name, m] : t.nodes)
    out.nodes.emplace(name, m.minor(set_intersect(contract, m.ground()),
                                    set_intersect(remove, m.ground())));
  out.edges = t.edges;
  out.boundary = set_minus(t.boundary, touched);
  return out;
}

// --- precircuits -----------------------------------------------------------

struct PreCircuit {
  std::set<NodeName> subtree;
  std::map<NodeName, LabelSet> circuits;  // node -> chosen circuit of its matroid
};

struct PrecircuitVerdict {
  bool valid = false;
  std::vector<std::string> failures;
};

// A precircuit is a nonempty connected subtree with one circuit per node that
// uses an interface edge exactly when the neighbour behind it is included.
inline PrecircuitVerdict validate_precircuit(const ExplicitTreeOfMatroids& t,
                                             const PreCircuit& pc) {
  if (!t.overlap_one())
    throw input_error("precircuits need overlap one (every interface a single edge)");
  PrecircuitVerdict v;
  if (pc.subtree.empty()) {
    v.failures.push_back("the subtree is empty (a circuit needs at least one node)");
    return v;
  }
  bool known = true;
  for (const auto& name : pc.subtree)
    if (!t.nodes.count(name)) {
      v.failures.push_back("subtree node '" + name + "' is not a node of the tree");
      known = false;
    }
  for (const auto& [name, o] : pc.circuits) {
    (void)o;
    if (!pc.subtree.count(name))
      v.failures.push_back("a circuit is assigned at '" + name +
                           "', which is outside the subtree");
  }
  if (!known) {
    v.valid = false;
    return v;
  }

  // Connectivity of the induced subtree.
  std::set<NodeName> seen = {*pc.subtree.begin()};
  std::deque<NodeName> queue = {*pc.subtree.begin()};
  while (!queue.empty()) {
    const NodeName cur = queue.front();
    queue.pop_front();
    for (const auto& u : t.neighbors(cur))
      if (pc.subtree.count(u) && seen.insert(u).second) queue.push_back(u);
  }
  if (seen.size() != pc.subtree.size())
    v.failures.push_back("the subtree is not connected");

  for (const auto& name : pc.subtree) {
    const auto it = pc.circuits.find(name);
    if (it == pc.circuits.end()) {
      v.failures.push_back("no circuit assigned at node '" + name + "'");
      continue;
    }
    const LabelSet& o = it->second;
    if (!t.nodes.at(name).is_circuit(o))
      v.failures.push_back("the set " + show_set(o) + " assigned at '" + name +
                           "' is not a circuit of its node matroid");
    for (const auto& u : t.neighbors(name)) {
      const Label e = *t.interface(name, u).begin();
      const bool used = contains(o, e);
      const bool inside = pc.subtree.count(u) != 0;
      if (used && !inside)
        v.failures.push_back("the circuit at '" + name + "' contains interface edge '" + e +
                             "' although '" + u + "' is outside the subtree");
      if (!used && inside)
        v.failures.push_back("the circuit at '" + name + "' omits interface edge '" + e +
                             "' although '" + u + "' is in the subtree");
    }
  }
  v.valid = v.failures.empty();
  return v;
}

inline LabelSet underlying_set(const ExplicitTreeOfMatroids& t, const PreCircuit& pc) {
  LabelSet u;
  for (const auto& [name, o] : pc.circuits) {
    (void)name;
    u = set_union(u, o);
  }
  return set_intersect(u, t.ground());
}

struct CircuitEnumeration {
  SetFamily circuits;  // nonempty underlying sets of precircuits
  SetFamily minimal;   // the inclusion-minimal members
};

// Exhaustive precircuit sweep over every connected subtree.  Exponential in
// the node count by design, hence the cap.
inline CircuitEnumeration enumerate_circuits(const ExplicitTreeOfMatroids& t,
                                             std::size_t node_cap = 12) {
  if (!t.overlap_one())
    throw input_error("circuit enumeration needs overlap one (every interface a single edge)");
  if (t.nodes.size() > node_cap || t.nodes.size() > 20)
    throw resource_error("circuit enumeration over " + std::to_string(t.nodes.size()) +
                         " nodes exceeds the cap (" + std::to_string(std::min<std::size_t>(node_cap, 20)) + " nodes)");
  std::vector<NodeName> names;
  for (const auto& [name, m] : t.nodes) {
    (void)m;
    names.push_back(name);
  }
  std::map<NodeName, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  std::vector<std::vector<std::pair<std::size_t, Label>>> adj(names.size());
  for (const auto& [a, b] : t.edges) {
    const Label e = *t.interface(a, b).begin();
    adj[index[a]].push_back({index[b], e});
    adj[index[b]].push_back({index[a], e});
  }
  const LabelSet real = t.ground();
  const std::size_t n = names.size();

  CircuitEnumeration out;
  std::uint64_t work = 0;
  constexpr std::uint64_t work_cap = std::uint64_t{1} << 22;

  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    // Connectivity of the selected node set.
    std::uint32_t seen = 0;
    {
      std::size_t start = 0;
      while (!(mask & (std::uint32_t{1} << start))) ++start;
      std::deque<std::size_t> queue = {start};
      seen = std::uint32_t{1} << start;
      while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (const auto& [nb, e] : adj[cur]) {
          (void)e;
          const std::uint32_t bit = std::uint32_t{1} << nb;
          if ((mask & bit) && !(seen & bit)) {
            seen |= bit;
            queue.push_back(nb);
          }
        }
      }
    }
    if (seen != mask) continue;

    // Circuit candidates per selected node under the interface biconditional.
    std::vector<std::vector<const LabelSet*>> cand;
    std::vector<std::size_t> members;
    bool dead = false;
    for (std::size_t i = 0; i < n && !dead; ++i) {
      if (!(mask & (std::uint32_t{1} << i))) continue;
      LabelSet required, forbidden;
      for (const auto& [nb, e] : adj[i]) {
        if (mask & (std::uint32_t{1} << nb))
          required.insert(e);
        else
          forbidden.insert(e);
      }
      std::vector<const LabelSet*> fits;
      for (const auto& o : t.nodes.at(names[i]).circuits())
        if (is_subset(required, o) && disjoint(o, forbidden)) fits.push_back(&o);
      if (fits.empty()) {
        dead = true;
        break;
      }
      members.push_back(i);
      cand.push_back(std::move(fits));
    }
    if (dead) continue;

    // Cartesian product over the candidate lists, collecting real unions.
    std::vector<std::size_t> pick(cand.size(), 0);
    while (true) {
      if (++work > work_cap)
        throw resource_error("precircuit enumeration exceeded the work cap");
      LabelSet u;
      for (std::size_t k = 0; k < cand.size(); ++k) u = set_union(u, *cand[k][pick[k]]);
      u = set_intersect(u, real);
      if (!u.empty()) out.circuits.insert(std::move(u));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == cand[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  out.minimal = minimal_members(out.circuits);
  return out;
}

// --- vector-space glue ------------------------------------------------------

// (U1 + U2) restricted to the symmetric difference of the two ambients.
inline gf::Subspace delta_glue(const gf::Subspace& u1, const gf::Subspace& u2) {
  if (u1.p != u2.p) throw input_error("mixed field characteristics in glue");
  const LabelSet big = set_union(u1.ambient, u2.ambient);
  const LabelSet target = sym_diff(u1.ambient, u2.ambient);
  return gf::sum_intersect(gf::embed(u1, big), gf::embed(u2, big), target);
}

// --- representation trees ---------------------------------------------------

struct TreeRepresentation {
  std::map<NodeName, gf::Subspace> spaces;
  std::set<NodeEdge> edges;
  LabelSet boundary;

  int characteristic() const { return spaces.begin()->second.p; }

  LabelSet interface(const NodeName& a, const NodeName& b) const {
    return set_intersect(spaces.at(a).ambient, spaces.at(b).ambient);
  }

  LabelSet dummies() const {
    LabelSet s;
    for (const auto& [a, b] : edges) s = set_union(s, interface(a, b));
    return s;
  }

  LabelSet ground() const {
    LabelSet all;
    for (const auto& [name, u] : spaces) {
      (void)name;
      all = set_union(all, u.ambient);
    }
    return set_minus(all, dummies());
  }

  std::map<NodeName, int> distances(const NodeName& base) const {
    if (!spaces.count(base)) throw input_error("unknown base node '" + base + "'");
    return detail::bfs_distances(edges, base);
  }
};

inline TreeRepresentation make_representation(std::map<NodeName, gf::Subspace> spaces,
                                              std::set<NodeEdge> edges, LabelSet boundary = {}) {
  std::map<NodeName, LabelSet> ambient;
  for (const auto& [name, u] : spaces) ambient.emplace(name, u.ambient);
  detail::check_shape(ambient, edges);
  const int p = spaces.begin()->second.p;
  for (const auto& [name, u] : spaces)
    if (u.p != p)
      throw input_error("mixed field characteristics: node '" + name + "' uses GF(" +
                        std::to_string(u.p) + "), expected GF(" + std::to_string(p) + ")");
  TreeRepresentation r;
  r.spaces = std::move(spaces);
  r.edges = std::move(edges);
  r.boundary = std::move(boundary);
  if (!is_subset(r.boundary, r.ground()))
    throw input_error("boundary labels " + show_set(set_minus(r.boundary, r.ground())) +
                      " are not real edges of the tree");
  return r;
}

inline TreeRepresentation dual(const TreeRepresentation& r) {
  TreeRepresentation d;
  for (const auto& [name, u] : r.spaces) d.spaces.emplace(name, gf::complement(u));
  d.edges = r.edges;
  d.boundary = r.boundary;
  return d;
}

inline ExplicitTreeOfMatroids tree_of(const TreeRepresentation& r) {
  std::map<NodeName, Matroid> nodes;
  for (const auto& [name, u] : r.spaces) nodes.emplace(name, Matroid::from_representation(u));
  return make_tree(std::move(nodes), r.edges, r.boundary);
}

// One vector per node, agreeing across every interface.
using PsiVector = std::map<NodeName, gf::Vec>;

inline void validate_psi_vector(const TreeRepresentation& r, const PsiVector& v) {
  for (const auto& [name, u] : r.spaces) {
    const auto it = v.find(name);
    if (it == v.end()) throw input_error("no vector assigned at node '" + name + "'");
    if (it->second.p != u.p || it->second.ambient != u.ambient)
      throw input_error("the vector at '" + name + "' does not live in the node's space");
    if (!u.contains_vector(it->second))
      throw input_error("the vector at '" + name + "' is not in the node space");
  }
  for (const auto& [name, vec] : v)
    if (!r.spaces.count(name)) throw input_error("vector assigned at unknown node '" + name + "'");
  for (const auto& [a, b] : r.edges) {
    const LabelSet shared = r.interface(a, b);
    if (v.at(a).projected(shared) != v.at(b).projected(shared))
      throw input_error("the vectors at '" + a + "' and '" + b + "' disagree on " +
                        show_set(shared));
  }
}

// Every consistent assignment, including the all-zero one.
inline std::vector<PsiVector> enumerate_psi_vectors(const TreeRepresentation& r,
                                                    std::uint64_t cap = std::uint64_t{1} << 20) {
  std::vector<NodeName> names;
  for (const auto& [name, u] : r.spaces) {
    (void)u;
    names.push_back(name);
  }
  std::vector<std::vector<gf::Vec>> pool;
  for (const auto& name : names) pool.push_back(gf::enumerate_vectors(r.spaces.at(name), cap));

  std::vector<PsiVector> out;
  std::uint64_t work = 0;
  PsiVector cur;
  const auto consistent = [&](std::size_t k, const gf::Vec& vec) {
    for (std::size_t j = 0; j < k; ++j) {
      const LabelSet shared = set_intersect(vec.ambient, pool[j].front().ambient);
      if (shared.empty()) continue;
      if (!r.edges.count(ordered(names[k], names[j]))) continue;
      if (vec.projected(shared) != cur.at(names[j]).projected(shared)) return false;
    }
    return true;
  };
  const std::function<void(std::size_t)> walk = [&](std::size_t k) {
    if (k == names.size()) {
      if (++work > cap) throw resource_error("vector family enumeration exceeded the cap");
      out.push_back(cur);
      return;
    }
    for (const auto& vec : pool[k]) {
      if (!consistent(k, vec)) continue;
      cur[names[k]] = vec;
      walk(k + 1);
    }
    cur.erase(names[k]);
  };
  walk(0);
  return out;
}

// Real-edge support of a consistent family.
inline LabelSet vector_support(const TreeRepresentation& r, const PsiVector& v) {
  validate_psi_vector(r, v);
  LabelSet s;
  for (const auto& [name, vec] : v) {
    (void)name;
    s = set_union(s, vec.support());
  }
  return set_intersect(s, r.ground());
}

// Sum over the real edges of v(e) * w(e) * (-1)^(distance of the owning node
// from the base).  The alternating sign makes node-wise orthogonality
// telescope along the tree, so the total vanishes for any base node.  Vectors
// reaching the truncation boundary have lost terms behind the cut; refuse.
inline int hat_pairing(const TreeRepresentation& r, const PsiVector& v, const PsiVector& w,
                       const NodeName& base) {
  if (!r.spaces.count(base)) throw input_error("unknown base node '" + base + "'");
  validate_psi_vector(r, v);
  validate_psi_vector(dual(r), w);
  for (const PsiVector* side : {&v, &w})
    for (const auto& [name, vec] : *side) {
      (void)name;
      const LabelSet hit = set_intersect(vec.support(), r.boundary);
      if (!hit.empty())
        throw input_error("the pairing is undefined: the vector reaches the truncation "
                          "boundary at " +
                          show_set(hit));
    }
  const auto dist = r.distances(base);
  const int p = r.characteristic();
  const LabelSet shared = r.dummies();
  long long acc = 0;
  for (const auto& [name, u] : r.spaces) {
    const LabelSet owned = set_minus(u.ambient, shared);
    const int sign = (dist.at(name) % 2 == 0) ? 1 : -1;
    for (const auto& e : owned)
      acc += static_cast<long long>(sign) * v.at(name).at(e) * w.at(name).at(e);
  }
  return gf::mod_norm(acc, p);
}

// --- finitely presented infinite trees ---------------------------------------

struct Transition {
  NodeName from;  // prefix node or core state
  NodeName to;    // core state
  std::map<Label, Label> match;  // source elements -> target elements
  int priority = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// A finite explicit prefix plus a finite directed core; unfolding from the
// root replaces every transition by a fresh child instance of its target
// state, indefinitely.  Real edges live only in the prefix, so the unfolded
// tree keeps a finite ground set.
struct TreePresentation {
  ExplicitTreeOfMatroids prefix;
  NodeName root;
  std::map<NodeName, Matroid> core;
  std::vector<Transition> transitions;
};

inline void validate_presentation(const TreePresentation& pres) {
  if (!pres.prefix.nodes.count(pres.root))
    throw input_error("the root '" + pres.root + "' is not a prefix node");
  if (!pres.prefix.boundary.empty())
    throw input_error("presentation prefixes must not be truncations");
  for (const auto& [name, m] : pres.prefix.nodes) {
    if (name.find('/') != std::string::npos)
      throw input_error("prefix node name '" + name + "' uses the reserved character '/'");
    for (const auto& e : m.ground())
      if (e.find('/') != std::string::npos)
        throw input_error("prefix element '" + e + "' uses the reserved character '/'");
  }
  for (const auto& [name, m] : pres.core) {
    (void)m;
    if (name.find('/') != std::string::npos)
      throw input_error("core state name '" + name + "' uses the reserved character '/'");
    if (pres.prefix.nodes.count(name))
      throw input_error("'" + name + "' names both a prefix node and a core state");
  }

  const auto elements_of = [&](const NodeName& s) -> const LabelSet& {
    const auto pit = pres.prefix.nodes.find(s);
    if (pit != pres.prefix.nodes.end()) return pit->second.ground();
    const auto cit = pres.core.find(s);
    if (cit != pres.core.end()) return cit->second.ground();
    throw input_error("transition endpoint '" + s + "' names no prefix node or core state");
  };

  std::map<NodeName, LabelSet> outgoing;        // state -> union of sources
  std::map<NodeName, std::vector<LabelSet>> incoming;  // core state -> target sets
  for (const auto& tr : pres.transitions) {
    const LabelSet& src_elems = elements_of(tr.from);
    if (!pres.core.count(tr.to))
      throw input_error("transition target '" + tr.to + "' is not a core state");
    if (tr.match.empty())
      throw input_error("the transition from '" + tr.from + "' to '" + tr.to +
                        "' matches no elements");
    if (tr.priority < 0)
      throw input_error("the transition from '" + tr.from + "' to '" + tr.to +
                        "' carries a negative priority");
    LabelSet sources, targets;
    for (const auto& [s, t] : tr.match) {
      if (!contains(src_elems, s))
        throw input_error("transition source '" + s + "' is not an element of '" + tr.from +
                          "'");
      if (!contains(pres.core.at(tr.to).ground(), t))
        throw input_error("transition target element '" + t + "' is not an element of '" +
                          tr.to + "'");
      sources.insert(s);
      if (!targets.insert(t).second)
        throw input_error("the transition from '" + tr.from + "' maps two elements onto '" + t +
                          "'");
    }
    if (!disjoint(outgoing[tr.from], sources))
      throw input_error("outgoing interfaces of '" + tr.from +
                        "' must be pairwise disjoint; " +
                        show_set(set_intersect(outgoing[tr.from], sources)) + " repeats");
    outgoing[tr.from] = set_union(outgoing[tr.from], sources);
    incoming[tr.to].push_back(targets);
  }

  // Prefix sources must not collide with prefix interfaces.
  const LabelSet prefix_dummies = pres.prefix.dummies();
  for (const auto& [state, sources] : outgoing)
    if (pres.prefix.nodes.count(state) && !disjoint(sources, prefix_dummies))
      throw input_error("prefix node '" + state + "' uses interface elements " +
                        show_set(set_intersect(sources, prefix_dummies)) +
                        " as transition sources");

  for (const auto& [state, m] : pres.core) {
    const auto in_it = incoming.find(state);
    if (in_it == incoming.end())
      throw input_error("core state '" + state + "' is unreachable (no transition leads to it)");
    const LabelSet& out_sources = outgoing[state];
    for (const LabelSet& targets : in_it->second) {
      const LabelSet both = set_intersect(targets, out_sources);
      if (!both.empty())
        throw input_error("elements " + show_set(both) + " of state '" + state +
                          "' are both an incoming and an outgoing interface");
      const LabelSet uncovered = set_minus(m.ground(), set_union(targets, out_sources));
      if (!uncovered.empty())
        throw input_error("elements " + show_set(uncovered) + " of state '" + state +
                          "' are covered by no interface and would repeat as real edges");
    }
  }
}

// Materialize the tree to the given depth (distance from the root).  Cut
// interfaces at the depth boundary stay as real edges and are recorded in
// `boundary`.
inline ExplicitTreeOfMatroids unfold(const TreePresentation& pres, int depth) {
  validate_presentation(pres);
  if (depth < 0) throw input_error("unfolding depth must be nonnegative");

  std::map<NodeName, std::vector<const Transition*>> outgoing;
  for (const auto& tr : pres.transitions) outgoing[tr.from].push_back(&tr);

  const auto pdist = pres.prefix.distances(pres.root);
  std::map<NodeName, Matroid> nodes;
  std::set<NodeEdge> edges;
  LabelSet boundary;

  const auto kept = [&](const NodeName& n) { return pdist.at(n) <= depth; };
  for (const auto& [name, m] : pres.prefix.nodes)
    if (kept(name)) nodes.emplace(name, m);
  for (const auto& [a, b] : pres.prefix.edges) {
    if (kept(a) && kept(b))
      edges.insert(ordered(a, b));
    else if (kept(a) != kept(b))
      boundary = set_union(boundary, pres.prefix.interface(a, b));
  }

  const auto renamed = [](const Matroid& m, const std::map<Label, Label>& name_of) {
    LabelSet ground;
    for (const auto& e : m.ground()) ground.insert(name_of.at(e));
    SetFamily circuits;
    for (const auto& o : m.circuits()) {
      LabelSet r;
      for (const auto& e : o) r.insert(name_of.at(e));
      circuits.insert(std::move(r));
    }
    return Matroid::from_circuits(std::move(ground), std::move(circuits));
  };

  struct Instance {
    NodeName name;
    NodeName state;
    int depth;
    std::map<Label, Label> label;  // state element -> global label
  };
  std::deque<Instance> queue;

  const auto spawn = [&](const NodeName& parent, const std::map<Label, Label>* parent_label,
                         int parent_depth, const std::vector<const Transition*>& out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Transition& tr = *out[i];
      if (parent_depth + 1 > depth) {
        for (const auto& [src, tgt] : tr.match) {
          (void)tgt;
          boundary.insert(parent_label ? parent_label->at(src) : src);
        }
        continue;
      }
      Instance child;
      child.name = parent + "/" + std::to_string(i);
      child.state = tr.to;
      child.depth = parent_depth + 1;
      for (const auto& [src, tgt] : tr.match)
        child.label[tgt] = parent_label ? parent_label->at(src) : src;
      for (const auto& e : pres.core.at(tr.to).ground())
        if (!child.label.count(e)) child.label[e] = child.name + ":" + e;
      nodes.emplace(child.name, renamed(pres.core.at(tr.to), child.label));
      edges.insert(ordered(parent, child.name));
      queue.push_back(std::move(child));
    }
  };

  for (const auto& [name, m] : pres.prefix.nodes) {
    (void)m;
    const auto out_it = outgoing.find(name);
    if (out_it == outgoing.end()) continue;
    if (!kept(name)) continue;
    spawn(name, nullptr, pdist.at(name), out_it->second);
  }
  while (!queue.empty()) {
    const Instance inst = std::move(queue.front());
    queue.pop_front();
    const auto out_it = outgoing.find(inst.state);
    if (out_it == outgoing.end()) continue;
    spawn(inst.name, &inst.label, inst.depth, out_it->second);
  }
  return make_tree(std::move(nodes), std::move(edges), std::move(boundary));
}

// Keep the nodes within the given distance of the root; interfaces cut by the
// restriction join the boundary.
inline ExplicitTreeOfMatroids truncate(const ExplicitTreeOfMatroids& t, const NodeName& root,
                                       int depth) {
  if (depth < 0) throw input_error("truncation depth must be nonnegative");
  const auto dist = t.distances(root);
  std::map<NodeName, Matroid> nodes;
  std::set<NodeEdge> edges;
  LabelSet boundary;
  const auto kept = [&](const NodeName& n) { return dist.at(n) <= depth; };
  LabelSet kept_elements;
  for (const auto& [name, m] : t.nodes)
    if (kept(name)) {
      nodes.emplace(name, m);
      kept_elements = set_union(kept_elements, m.ground());
    }
  for (const auto& [a, b] : t.edges) {
    if (kept(a) && kept(b))
      edges.insert(ordered(a, b));
    else if (kept(a) != kept(b))
      boundary = set_union(boundary, t.interface(a, b));
  }
  boundary = set_union(boundary, set_intersect(t.boundary, kept_elements));
  return make_tree(std::move(nodes), std::move(edges), std::move(boundary));
}

}  // namespace psimat::tom
