// Two-player games on finitely presented trees of matroids, compiled to
// finite parity games.
//
// The circuit game on an overlap-one presentation: Sarah must exhibit a
// circuit of the current node through the element she owes, staying inside
// the allowed real edges; Colin challenges one of its further interface
// elements, which moves the game across that interface.  A position without
// moves loses for the player due to move, and an infinite play goes to Sarah
// exactly when the highest transition priority it crosses infinitely often is
// even.  Winning strategies are positional, so a Sarah win materializes as a
// precircuit of any finite unfolding and a Colin win flips, via node-wise
// duals with priorities shifted by one, into a Sarah win of the companion
// game on the swapped partition.
//
// Represented presentations replace node matroids with subspaces; the vector
// game plays node vectors against interface functionals and its witnesses
// materialize as consistent vector families, combining strategy replies
// through explicit span coefficients.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"
#include "gf.hpp"
#include "matroid.hpp"
#include "tom.hpp"

namespace psimat::games {

using tom::NodeName;

// --- finite parity games -----------------------------------------------------

enum class Player { sarah, colin };

inline Player opponent(Player x) { return x == Player::sarah ? Player::colin : Player::sarah; }
inline std::string player_name(Player x) { return x == Player::sarah ? "Sarah" : "Colin"; }

// Positions carry the priority.  A position without moves is lost by its
// owner; an infinite play is won by Sarah exactly when the highest priority
// seen infinitely often is even.
struct ParityArena {
  struct Position {
    Player owner = Player::sarah;
    int priority = 0;
    std::vector<std::size_t> moves;
    std::string name;  // diagnostic label
  };
  std::vector<Position> positions;

  std::size_t add(Player owner, int priority, std::string name = "") {
    positions.push_back({owner, priority, {}, std::move(name)});
    return positions.size() - 1;
  }
  void link(std::size_t from, std::size_t to) { positions.at(from).moves.push_back(to); }
};

inline void validate_arena(const ParityArena& a) {
  for (std::size_t v = 0; v < a.positions.size(); ++v) {
    const auto& pos = a.positions[v];
    if (pos.priority < 0)
      throw input_error("position " + std::to_string(v) + " carries a negative priority");
    for (const auto w : pos.moves)
      if (w >= a.positions.size())
        throw input_error("position " + std::to_string(v) + " moves to unknown position " +
                          std::to_string(w));
  }
}

struct ArenaSolution {
  static constexpr std::size_t no_move = static_cast<std::size_t>(-1);
  std::vector<Player> winner;
  // The winner's positional choice at positions they own and win; no_move
  // everywhere else.
  std::vector<std::size_t> strategy;
};

namespace detail {

// Recursive decomposition by highest priority.  Works on a total arena: every
// alive position keeps at least one alive move, which the caller arranges by
// routing dead ends to sinks.
struct Zielonka {
  const ParityArena& a;
  std::vector<Player> winner;
  std::vector<std::size_t> strategy;

  explicit Zielonka(const ParityArena& arena)
      : a(arena),
        winner(arena.positions.size(), Player::sarah),
        strategy(arena.positions.size(), ArenaSolution::no_move) {}

  // Player p's attractor to `target` within `alive`; pulled p-positions
  // record their pulling move in `pull`.
  std::vector<char> attract(const std::vector<char>& alive, std::vector<char> target, Player p,
                            std::vector<std::size_t>& pull) const {
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t v = 0; v < a.positions.size(); ++v) {
        if (!alive[v] || target[v]) continue;
        const auto& pos = a.positions[v];
        if (pos.owner == p) {
          for (const auto w : pos.moves)
            if (alive[w] && target[w]) {
              target[v] = 1;
              pull[v] = w;
              grew = true;
              break;
            }
        } else {
          bool trapped = true;
          for (const auto w : pos.moves)
            if (alive[w] && !target[w]) {
              trapped = false;
              break;
            }
          if (trapped) {
            target[v] = 1;
            grew = true;
          }
        }
      }
    }
    return target;
  }

  void solve(std::vector<char> alive) {
    int top = -1;
    for (std::size_t v = 0; v < a.positions.size(); ++v)
      if (alive[v]) top = std::max(top, a.positions[v].priority);
    if (top < 0) return;
    const Player p = (top % 2 == 0) ? Player::sarah : Player::colin;

    std::vector<char> head(a.positions.size(), 0);
    for (std::size_t v = 0; v < a.positions.size(); ++v)
      if (alive[v] && a.positions[v].priority == top) head[v] = 1;

    std::vector<std::size_t> pull(a.positions.size(), ArenaSolution::no_move);
    const std::vector<char> reach = attract(alive, head, p, pull);

    std::vector<char> rest = alive;
    for (std::size_t v = 0; v < a.positions.size(); ++v)
      if (reach[v]) rest[v] = 0;
    solve(rest);

    bool opposition = false;
    for (std::size_t v = 0; v < a.positions.size(); ++v)
      if (rest[v] && winner[v] != p) {
        opposition = true;
        break;
      }

    if (!opposition) {
      // The whole region goes to p: the attractor funnels into the top
      // priority, which p's parity wins, and escapes land in the subgame p
      // already owns.
      for (std::size_t v = 0; v < a.positions.size(); ++v) {
        if (!reach[v]) continue;
        winner[v] = p;
        if (a.positions[v].owner != p) {
          strategy[v] = ArenaSolution::no_move;
          continue;
        }
        if (head[v]) {
          strategy[v] = ArenaSolution::no_move;
          for (const auto w : a.positions[v].moves)
            if (alive[w]) {
              strategy[v] = w;
              break;
            }
        } else {
          strategy[v] = pull[v];
        }
      }
      return;
    }

    // The opponent's subgame region extends by its attractor; p's positions
    // inside it cannot reach `head`, or the first attractor would have taken
    // them.
    std::vector<char> lost(a.positions.size(), 0);
    for (std::size_t v = 0; v < a.positions.size(); ++v)
      if (rest[v] && winner[v] != p) lost[v] = 1;
    std::vector<std::size_t> pull2(a.positions.size(), ArenaSolution::no_move);
    const std::vector<char> swallow = attract(alive, lost, opponent(p), pull2);
    for (std::size_t v = 0; v < a.positions.size(); ++v) {
      if (!swallow[v]) continue;
      winner[v] = opponent(p);
      if (lost[v]) continue;  // the subgame strategy stands
      strategy[v] =
          (a.positions[v].owner == opponent(p)) ? pull2[v] : ArenaSolution::no_move;
    }
    std::vector<char> remain = alive;
    for (std::size_t v = 0; v < a.positions.size(); ++v)
      if (swallow[v]) remain[v] = 0;
    solve(remain);
  }
};

}  // namespace detail

inline ArenaSolution solve_arena(const ParityArena& a) {
  validate_arena(a);
  // Totalize: route dead ends to a sink their owner loses, so the recursion
  // never meets a move-less position.
  ParityArena total = a;
  const std::size_t n = a.positions.size();
  const std::size_t sarah_sink = total.add(Player::colin, 0, "sink+");
  const std::size_t colin_sink = total.add(Player::sarah, 1, "sink-");
  total.link(sarah_sink, sarah_sink);
  total.link(colin_sink, colin_sink);
  for (std::size_t v = 0; v < n; ++v)
    if (total.positions[v].moves.empty())
      total.link(v, total.positions[v].owner == Player::sarah ? colin_sink : sarah_sink);

  detail::Zielonka z(total);
  z.solve(std::vector<char>(total.positions.size(), 1));

  ArenaSolution sol;
  sol.winner.assign(z.winner.begin(), z.winner.begin() + static_cast<std::ptrdiff_t>(n));
  sol.strategy.assign(n, ArenaSolution::no_move);
  for (std::size_t v = 0; v < n; ++v)
    if (z.strategy[v] < n) sol.strategy[v] = z.strategy[v];
  return sol;
}

// --- presentations, indexed for play -----------------------------------------

// The real edges of the unfolded tree: prefix elements that are neither a
// prefix interface nor a transition source.  Core elements never count; each
// is covered by an interface, so unfolding turns every copy into a dummy.
inline LabelSet real_edges(const tom::TreePresentation& pres) {
  tom::validate_presentation(pres);
  LabelSet reals = pres.prefix.ground();
  for (const auto& tr : pres.transitions)
    if (pres.prefix.nodes.count(tr.from))
      for (const auto& [src, tgt] : tr.match) {
        (void)tgt;
        reals.erase(src);
      }
  return reals;
}

namespace detail {

struct PresIndex {
  LabelSet reals;
  std::map<NodeName, LabelSet> node_reals;                        // prefix node -> its real edges
  std::map<NodeName, std::map<Label, NodeName>> across;           // prefix interface -> neighbour
  std::map<NodeName, std::map<Label, std::size_t>> by_source;     // state -> source -> transition
  std::vector<std::size_t> spawn_index;                           // transition -> child slot
  std::map<NodeName, Label> core_entry;                           // core state -> incoming element
};

inline PresIndex index_presentation(const tom::TreePresentation& pres) {
  tom::validate_presentation(pres);
  PresIndex ix;
  for (const auto& [a, b] : pres.prefix.edges) {
    const LabelSet shared = pres.prefix.interface(a, b);
    if (shared.size() != 1)
      throw input_error("the circuit game needs overlap one (every interface a single edge)");
    const Label e = *shared.begin();
    if (ix.across[a].count(e) || ix.across[b].count(e))
      throw input_error("the interface element '" + e +
                        "' joins more than two prefix nodes; the circuit game needs every "
                        "dummy shared by exactly two");
    ix.across[a][e] = b;
    ix.across[b][e] = a;
  }
  std::map<NodeName, std::size_t> slots;
  for (std::size_t i = 0; i < pres.transitions.size(); ++i) {
    const auto& tr = pres.transitions[i];
    if (tr.match.size() != 1)
      throw input_error("the circuit game needs overlap one (every interface a single edge)");
    ix.by_source[tr.from][tr.match.begin()->first] = i;
    ix.spawn_index.push_back(slots[tr.from]++);
    const auto [it, fresh] = ix.core_entry.emplace(tr.to, tr.match.begin()->second);
    if (!fresh && it->second != tr.match.begin()->second)
      throw internal_error("core state '" + tr.to + "' is entered through two elements");
  }
  for (const auto& [name, m] : pres.prefix.nodes) {
    LabelSet rest = m.ground();
    const auto ac = ix.across.find(name);
    if (ac != ix.across.end())
      for (const auto& [e, nbr] : ac->second) {
        (void)nbr;
        rest.erase(e);
      }
    const auto src = ix.by_source.find(name);
    if (src != ix.by_source.end())
      for (const auto& [e, t] : src->second) {
        (void)t;
        rest.erase(e);
      }
    ix.node_reals[name] = rest;
    ix.reals = set_union(ix.reals, rest);
  }
  return ix;
}

inline void check_partition(const PresIndex& ix, const Label& edge, const LabelSet& allowed,
                            const LabelSet& forbidden) {
  if (!contains(ix.reals, edge))
    throw input_error("the focus edge '" + edge + "' is not a real edge of the presentation");
  const LabelSet stray =
      set_union(set_minus(allowed, ix.reals), set_minus(forbidden, ix.reals));
  if (!stray.empty())
    throw input_error("the partition names " + show_set(stray) +
                      ", which are not real edges of the presentation");
  if (contains(allowed, edge) || contains(forbidden, edge))
    throw input_error("the focus edge '" + edge + "' may not appear in the partition");
  const LabelSet both = set_intersect(allowed, forbidden);
  if (!both.empty())
    throw input_error("the allowed and forbidden sets overlap in " + show_set(both));
}

}  // namespace detail

// --- the circuit game ---------------------------------------------------------

struct CompiledGame {
  ParityArena arena;
  std::size_t start = 0;
  struct Turn {
    NodeName state;        // prefix node or core state
    Label entry;           // the element every circuit here must contain
    int entry_priority = 0;
    Player to_move = Player::sarah;
    LabelSet circuit;      // Sarah's chosen circuit, at Colin positions
  };
  std::vector<Turn> turns;  // parallel to arena.positions
  std::map<std::tuple<NodeName, Label, int>, std::size_t> sarah_index;
};

// Compile the game on `edge` with the given partition of the other real
// edges.  Real edges listed in neither set are treated as forbidden.
inline CompiledGame build_circuit_arena(const tom::TreePresentation& pres, const Label& edge,
                                        const LabelSet& allowed, const LabelSet& forbidden) {
  const detail::PresIndex ix = detail::index_presentation(pres);
  detail::check_partition(ix, edge, allowed, forbidden);

  NodeName owner;
  for (const auto& [name, m] : pres.prefix.nodes)
    if (contains(m.ground(), edge)) owner = name;

  CompiledGame g;
  std::deque<std::size_t> pending;
  const auto sarah_pos = [&](const NodeName& state, const Label& entry,
                             int prio) -> std::size_t {
    const auto key = std::make_tuple(state, entry, prio);
    const auto it = g.sarah_index.find(key);
    if (it != g.sarah_index.end()) return it->second;
    const std::size_t idx = g.arena.add(Player::sarah, prio, state + "?" + entry);
    g.turns.push_back({state, entry, prio, Player::sarah, {}});
    g.sarah_index.emplace(key, idx);
    pending.push_back(idx);
    return idx;
  };

  g.start = sarah_pos(owner, edge, 0);
  while (!pending.empty()) {
    const std::size_t idx = pending.front();
    pending.pop_front();
    const CompiledGame::Turn turn = g.turns[idx];  // copy: the vector grows below
    const bool in_prefix = pres.prefix.nodes.count(turn.state) != 0;
    const Matroid& m = in_prefix ? pres.prefix.nodes.at(turn.state) : pres.core.at(turn.state);

    for (const LabelSet& o : m.circuits()) {
      if (!contains(o, turn.entry)) continue;
      if (in_prefix) {
        bool ok = true;
        for (const auto& r : set_intersect(o, ix.node_reals.at(turn.state)))
          if (r != edge && !contains(allowed, r)) {
            ok = false;
            break;
          }
        if (!ok) continue;
      }
      const std::size_t cpos = g.arena.add(Player::colin, 0, turn.state + "!" + show_set(o));
      g.turns.push_back({turn.state, turn.entry, 0, Player::colin, o});
      g.arena.link(idx, cpos);

      for (const auto& f : o) {
        if (f == turn.entry) continue;
        if (in_prefix) {
          const auto ac = ix.across.find(turn.state);
          if (ac != ix.across.end()) {
            const auto nb = ac->second.find(f);
            if (nb != ac->second.end()) {
              g.arena.link(cpos, sarah_pos(nb->second, f, 0));
              continue;
            }
          }
        }
        const auto st = ix.by_source.find(turn.state);
        if (st != ix.by_source.end()) {
          const auto ti = st->second.find(f);
          if (ti != st->second.end()) {
            const auto& tr = pres.transitions[ti->second];
            g.arena.link(cpos, sarah_pos(tr.to, tr.match.begin()->second, tr.priority));
            continue;
          }
        }
        // Otherwise f is a real edge; nothing lies behind it.
      }
    }
  }
  return g;
}

struct GameOutcome {
  CompiledGame game;
  ArenaSolution solution;
  Player winner() const { return solution.winner[game.start]; }
};

inline GameOutcome solve_circuit_game(const tom::TreePresentation& pres, const Label& edge,
                                      const LabelSet& allowed, const LabelSet& forbidden) {
  GameOutcome out{build_circuit_arena(pres, edge, allowed, forbidden), {}};
  out.solution = solve_arena(out.game.arena);
  return out;
}

inline bool psi_circuit_exists(const tom::TreePresentation& pres, const Label& edge,
                               const LabelSet& allowed, const LabelSet& forbidden) {
  return solve_circuit_game(pres, edge, allowed, forbidden).winner() == Player::sarah;
}

// --- duality -------------------------------------------------------------------

inline tom::TreePresentation dual_presentation(const tom::TreePresentation& pres) {
  tom::TreePresentation d;
  d.prefix = tom::dual(pres.prefix);
  d.root = pres.root;
  for (const auto& [name, m] : pres.core) d.core.emplace(name, m.dual());
  d.transitions = pres.transitions;
  return d;
}

inline tom::TreePresentation shift_priorities(tom::TreePresentation pres, int delta) {
  for (auto& tr : pres.transitions) {
    tr.priority += delta;
    if (tr.priority < 0)
      throw input_error("the shift makes the transition from '" + tr.from +
                        "' carry a negative priority");
  }
  return pres;
}

struct DualityReport {
  Player circuit_winner = Player::colin;
  Player cocircuit_winner = Player::colin;
  bool agree = false;  // exactly one of the two games goes to Sarah
};

// Play the game on the presentation and its companion on the node-wise dual
// with priorities shifted by one (which complements the set of winning ends)
// and the partition swapped.  Exactly one of the two should go to Sarah.
inline DualityReport duality_check(const tom::TreePresentation& pres, const Label& edge,
                                   const LabelSet& allowed, const LabelSet& forbidden) {
  const detail::PresIndex ix = detail::index_presentation(pres);
  detail::check_partition(ix, edge, allowed, forbidden);
  const LabelSet missing =
      set_minus(set_minus(ix.reals, LabelSet{edge}), set_union(allowed, forbidden));
  if (!missing.empty())
    throw input_error("the partition must cover every real edge besides '" + edge +
                      "'; missing " + show_set(missing));
  DualityReport r;
  r.circuit_winner = solve_circuit_game(pres, edge, allowed, forbidden).winner();
  r.cocircuit_winner =
      solve_circuit_game(shift_priorities(dual_presentation(pres), 1), edge, forbidden, allowed)
          .winner();
  r.agree = (r.circuit_winner == Player::sarah) != (r.cocircuit_winner == Player::sarah);
  return r;
}

// --- materializing a winning strategy ------------------------------------------

struct MaterializedCircuit {
  tom::ExplicitTreeOfMatroids tree;  // the unfolding the witness lives on
  tom::PreCircuit circuit;
};

// Freeze Sarah's positional strategy into a precircuit of the depth-bounded
// unfolding.  Interfaces cut at the depth boundary stay inside the node
// circuits as boundary edges of the truncated tree.
inline MaterializedCircuit materialize_circuit(const tom::TreePresentation& pres,
                                               const Label& edge, const LabelSet& allowed,
                                               const LabelSet& forbidden, int depth) {
  const GameOutcome out = solve_circuit_game(pres, edge, allowed, forbidden);
  if (out.winner() != Player::sarah)
    throw input_error("Sarah loses the game on '" + edge +
                      "', so there is no circuit to materialize");
  const detail::PresIndex ix = detail::index_presentation(pres);
  const auto pdist = pres.prefix.distances(pres.root);
  const NodeName owner = out.game.turns[out.game.start].state;
  if (pdist.at(owner) > depth)
    throw input_error("unfolding to depth " + std::to_string(depth) + " misses '" + owner +
                      "', the node holding '" + edge + "'");

  MaterializedCircuit mc{tom::unfold(pres, depth), {}};

  struct Visit {
    NodeName name;    // node of the unfolded tree
    NodeName state;   // prefix node or core state behind it
    Label entry;      // in state coordinates
    Label entry_out;  // in tree coordinates
    int prio;
    int depth;
  };
  std::deque<Visit> queue{{owner, owner, edge, edge, 0, pdist.at(owner)}};
  while (!queue.empty()) {
    const Visit cur = queue.front();
    queue.pop_front();
    const std::size_t pos = out.game.sarah_index.at({cur.state, cur.entry, cur.prio});
    if (out.solution.winner[pos] != Player::sarah ||
        out.solution.strategy[pos] == ArenaSolution::no_move)
      throw internal_error("the winning strategy wandered outside its region at '" + cur.name +
                           "'");
    const LabelSet& o = out.game.turns[out.solution.strategy[pos]].circuit;
    const bool in_prefix = pres.prefix.nodes.count(cur.state) != 0;

    const auto outward = [&](const Label& f) {
      if (in_prefix) return f;
      return f == cur.entry ? cur.entry_out : cur.name + ":" + f;
    };
    LabelSet global;
    for (const auto& f : o) global.insert(outward(f));
    mc.circuit.subtree.insert(cur.name);
    mc.circuit.circuits[cur.name] = global;

    for (const auto& f : o) {
      if (f == cur.entry) continue;
      if (in_prefix) {
        const auto ac = ix.across.find(cur.state);
        if (ac != ix.across.end()) {
          const auto nb = ac->second.find(f);
          if (nb != ac->second.end()) {
            if (pdist.at(nb->second) <= depth)
              queue.push_back({nb->second, nb->second, f, f, 0, pdist.at(nb->second)});
            continue;
          }
        }
      }
      const auto st = ix.by_source.find(cur.state);
      if (st != ix.by_source.end()) {
        const auto ti = st->second.find(f);
        if (ti != st->second.end()) {
          if (cur.depth + 1 > depth) continue;
          const auto& tr = pres.transitions[ti->second];
          queue.push_back({cur.name + "/" + std::to_string(ix.spawn_index[ti->second]), tr.to,
                           tr.match.begin()->second, outward(f), tr.priority, cur.depth + 1});
        }
      }
    }
  }

  const auto verdict = tom::validate_precircuit(mc.tree, mc.circuit);
  if (!verdict.valid)
    throw internal_error("materialization produced an invalid precircuit: " +
                         verdict.failures.front());
  return mc;
}

// --- the matroid induced by the games ------------------------------------------

// Circuits are the minimal nonempty real-edge sets S such that Sarah wins the
// game on some edge of S with the rest of S allowed and everything else
// forbidden.  Wins are monotone in the allowed set, so supersets of recorded
// circuits need no play.
inline Matroid induced_matroid(const tom::TreePresentation& pres, std::size_t cap = 10) {
  const detail::PresIndex ix = detail::index_presentation(pres);
  const LabelSet& reals = ix.reals;
  const std::size_t effective = std::min<std::size_t>(cap, 20);  // masks are 32-bit
  if (reals.size() > effective)
    throw resource_error("the induced matroid spans " + std::to_string(reals.size()) +
                         " real edges and exceeds the cap (" + std::to_string(effective) +
                         ")");
  const std::vector<Label> order(reals.begin(), reals.end());
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << order.size()); ++mask)
    masks.push_back(mask);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) {
    const int cx = std::popcount(x), cy = std::popcount(y);
    return cx != cy ? cx < cy : x < y;
  });

  SetFamily circuits;
  for (const auto mask : masks) {
    LabelSet s;
    for (std::size_t i = 0; i < order.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) s.insert(order[i]);
    bool covered = false;
    for (const auto& c : circuits)
      if (is_subset(c, s)) {
        covered = true;
        break;
      }
    if (covered) continue;
    for (const auto& e : s) {
      if (solve_circuit_game(pres, e, set_minus(s, LabelSet{e}), set_minus(reals, s))
              .winner() == Player::sarah) {
        circuits.insert(s);
        break;
      }
    }
  }
  return Matroid::from_circuits(reals, circuits, reals.size());
}

// --- represented presentations --------------------------------------------------

// Node subspaces instead of node matroids; the matroid shadow of the
// unfolding is the unfolding of the matroid shadow.
struct RepresentedPresentation {
  tom::TreeRepresentation prefix;
  NodeName root;
  std::map<NodeName, gf::Subspace> core;
  std::vector<tom::Transition> transitions;
};

inline tom::TreePresentation presentation_of(const RepresentedPresentation& rp) {
  if (rp.prefix.spaces.empty()) throw input_error("the represented prefix is empty");
  tom::TreePresentation p;
  p.prefix = tom::tree_of(rp.prefix);
  p.root = rp.root;
  for (const auto& [name, u] : rp.core) p.core.emplace(name, Matroid::from_representation(u));
  p.transitions = rp.transitions;
  return p;
}

inline void validate_represented(const RepresentedPresentation& rp) {
  if (rp.prefix.spaces.empty()) throw input_error("the represented prefix is empty");
  const int p = rp.prefix.characteristic();
  for (const auto& [name, u] : rp.core)
    if (u.p != p)
      throw input_error("mixed field characteristics: state '" + name + "' uses GF(" +
                        std::to_string(u.p) + "), expected GF(" + std::to_string(p) + ")");
  tom::validate_presentation(presentation_of(rp));
}

// Recover the represented presentation from one whose matroids all carry
// representations; inverse of presentation_of.
inline RepresentedPresentation represent(const tom::TreePresentation& pres) {
  tom::validate_presentation(pres);
  RepresentedPresentation rp;
  std::map<NodeName, gf::Subspace> spaces;
  for (const auto& [name, m] : pres.prefix.nodes) {
    if (!m.representation())
      throw input_error("the prefix node '" + name + "' carries no representation");
    spaces.emplace(name, *m.representation());
  }
  rp.prefix = tom::make_representation(std::move(spaces), pres.prefix.edges,
                                       pres.prefix.boundary);
  rp.root = pres.root;
  for (const auto& [name, m] : pres.core) {
    if (!m.representation())
      throw input_error("the core state '" + name + "' carries no representation");
    rp.core.emplace(name, *m.representation());
  }
  rp.transitions = pres.transitions;
  validate_represented(rp);
  return rp;
}

// Materialize the represented tree to the given depth, mirroring the matroid
// unfolding node for node and label for label.
inline tom::TreeRepresentation unfold_representation(const RepresentedPresentation& rp,
                                                     int depth) {
  validate_represented(rp);
  if (depth < 0) throw input_error("unfolding depth must be nonnegative");
  const int p = rp.prefix.characteristic();

  std::map<NodeName, std::vector<std::size_t>> outgoing;
  for (std::size_t i = 0; i < rp.transitions.size(); ++i)
    outgoing[rp.transitions[i].from].push_back(i);

  const auto pdist = rp.prefix.distances(rp.root);
  std::map<NodeName, gf::Subspace> spaces;
  std::set<tom::NodeEdge> edges;
  LabelSet boundary;

  const auto kept = [&](const NodeName& n) { return pdist.at(n) <= depth; };
  for (const auto& [name, u] : rp.prefix.spaces)
    if (kept(name)) spaces.emplace(name, u);
  for (const auto& [a, b] : rp.prefix.edges) {
    if (kept(a) && kept(b))
      edges.insert(tom::ordered(a, b));
    else if (kept(a) != kept(b))
      boundary = set_union(boundary, rp.prefix.interface(a, b));
  }

  const auto renamed = [p](const gf::Subspace& u, const std::map<Label, Label>& name_of) {
    LabelSet ambient;
    for (const auto& e : u.ambient) ambient.insert(name_of.at(e));
    std::vector<gf::Vec> rows;
    for (const auto& b : u.basis) {
      gf::Vec v = gf::Vec::zero(p, ambient);
      for (const auto& [e, c] : b.coord) v.set(name_of.at(e), c);
      rows.push_back(std::move(v));
    }
    return gf::span(rows, p, ambient);
  };

  struct Instance {
    NodeName name;
    NodeName state;
    int depth;
    std::map<Label, Label> label;
  };
  std::deque<Instance> queue;

  const auto spawn = [&](const NodeName& parent, const std::map<Label, Label>* parent_label,
                         int parent_depth, const std::vector<std::size_t>& out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const tom::Transition& tr = rp.transitions[out[i]];
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
      for (const auto& e : rp.core.at(tr.to).ambient)
        if (!child.label.count(e)) child.label[e] = child.name + ":" + e;
      spaces.emplace(child.name, renamed(rp.core.at(tr.to), child.label));
      edges.insert(tom::ordered(parent, child.name));
      queue.push_back(std::move(child));
    }
  };

  for (const auto& [name, u] : rp.prefix.spaces) {
    (void)u;
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
  return tom::make_representation(std::move(spaces), std::move(edges), std::move(boundary));
}

// --- the vector game -------------------------------------------------------------

namespace detail {

// Nonzero functionals over `labels`, first nonzero coefficient one; scalings
// ask the same question, so one representative per ray suffices.
inline std::vector<gf::Vec> normalized_functionals(int p, const LabelSet& labels,
                                                   std::uint64_t cap) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    count *= static_cast<std::uint64_t>(p);
    if (count > cap)
      throw resource_error("the functional alphabet over " + show_set(labels) +
                           " exceeds the cap (" + std::to_string(cap) + ")");
  }
  const std::vector<Label> order(labels.begin(), labels.end());
  std::vector<int> digits(order.size(), 0);
  std::vector<gf::Vec> out;
  while (true) {
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
    if (i == digits.size()) break;
    gf::Vec v = gf::Vec::zero(p, labels);
    for (std::size_t j = 0; j < order.size(); ++j)
      if (digits[j] != 0) v.set(order[j], digits[j]);
    if (v.coord.begin()->second == 1) out.push_back(std::move(v));
  }
  return out;
}

inline bool normalized(const gf::Vec& v) {
  return !v.coord.empty() && v.coord.begin()->second == 1;
}

struct RepIndex {
  LabelSet reals;
  std::map<NodeName, LabelSet> node_reals;
  std::map<NodeName, std::map<NodeName, LabelSet>> across;     // prefix node -> neighbour -> shared
  std::map<NodeName, std::vector<std::size_t>> out_of;         // state -> transitions
  std::vector<std::size_t> spawn_index;
  std::map<NodeName, LabelSet> core_entry;                     // core state -> incoming targets
};

inline RepIndex index_representation(const RepresentedPresentation& rp) {
  validate_represented(rp);
  RepIndex ix;
  for (const auto& [a, b] : rp.prefix.edges) {
    const LabelSet shared = rp.prefix.interface(a, b);
    ix.across[a][b] = shared;
    ix.across[b][a] = shared;
  }
  std::map<NodeName, std::size_t> slots;
  std::map<NodeName, LabelSet> sources;
  for (std::size_t i = 0; i < rp.transitions.size(); ++i) {
    const auto& tr = rp.transitions[i];
    ix.out_of[tr.from].push_back(i);
    ix.spawn_index.push_back(slots[tr.from]++);
    LabelSet targets;
    for (const auto& [s, t] : tr.match) {
      sources[tr.from].insert(s);
      targets.insert(t);
    }
    const auto [it, fresh] = ix.core_entry.emplace(tr.to, targets);
    if (!fresh && it->second != targets)
      throw internal_error("core state '" + tr.to + "' is entered through two interfaces");
  }
  for (const auto& [name, u] : rp.prefix.spaces) {
    LabelSet rest = u.ambient;
    const auto ac = ix.across.find(name);
    if (ac != ix.across.end())
      for (const auto& [nbr, shared] : ac->second) {
        (void)nbr;
        rest = set_minus(rest, shared);
      }
    const auto sc = sources.find(name);
    if (sc != sources.end()) rest = set_minus(rest, sc->second);
    ix.node_reals[name] = rest;
    ix.reals = set_union(ix.reals, rest);
  }
  return ix;
}

}  // namespace detail

struct CompiledVectorGame {
  ParityArena arena;
  std::size_t start = 0;
  struct Turn {
    NodeName state;
    NodeName from;      // prefix neighbour the play arrived from, if any
    gf::Vec challenge;  // functional over the entry interface
    int entry_priority = 0;
    Player to_move = Player::sarah;
    gf::Vec vector;     // Sarah's chosen node vector, at Colin positions
  };
  std::vector<Turn> turns;
  std::map<std::tuple<NodeName, NodeName, gf::Vec, int>, std::size_t> sarah_index;
};

// The vector game: Sarah answers the pending functional with a node vector
// that pairs nonzero against it and stays inside the allowed real edges;
// Colin challenges any further interface where her vector is nonzero with any
// functional that pairs nonzero against it there.  Non-orthogonality of a
// vector and a functional means exactly that their inner product over the
// shared coordinates does not vanish.
inline CompiledVectorGame build_vector_arena(const RepresentedPresentation& rp,
                                             const Label& edge, const LabelSet& allowed,
                                             const LabelSet& forbidden,
                                             std::uint64_t functional_cap = 4096) {
  const detail::RepIndex ix = detail::index_representation(rp);
  {
    detail::PresIndex shim;  // reuse the shared partition checks
    shim.reals = ix.reals;
    detail::check_partition(shim, edge, allowed, forbidden);
  }
  const int p = rp.prefix.characteristic();

  NodeName owner;
  for (const auto& [name, u] : rp.prefix.spaces)
    if (contains(u.ambient, edge)) owner = name;

  CompiledVectorGame g;
  std::deque<std::size_t> pending;
  const auto sarah_pos = [&](const NodeName& state, const NodeName& from,
                             const gf::Vec& challenge, int prio) -> std::size_t {
    const auto key = std::make_tuple(state, from, challenge, prio);
    const auto it = g.sarah_index.find(key);
    if (it != g.sarah_index.end()) return it->second;
    const std::size_t idx = g.arena.add(Player::sarah, prio, state + "?" + challenge.show());
    g.turns.push_back({state, from, challenge, prio, Player::sarah, {}});
    g.sarah_index.emplace(key, idx);
    pending.push_back(idx);
    return idx;
  };

  g.start = sarah_pos(owner, "", gf::Vec::unit(p, LabelSet{edge}, edge), 0);
  while (!pending.empty()) {
    const std::size_t idx = pending.front();
    pending.pop_front();
    const CompiledVectorGame::Turn turn = g.turns[idx];  // copy: the vector grows below
    const bool in_prefix = rp.prefix.spaces.count(turn.state) != 0;
    const gf::Subspace& space =
        in_prefix ? rp.prefix.spaces.at(turn.state) : rp.core.at(turn.state);

    for (const gf::Vec& v : gf::enumerate_vectors(space)) {
      if (!detail::normalized(v)) continue;  // scalings play the same game
      if (v.projected(turn.challenge.ambient).dot(turn.challenge) == 0) continue;
      if (in_prefix) {
        bool ok = true;
        for (const auto& r : set_intersect(v.support(), ix.node_reals.at(turn.state)))
          if (r != edge && !contains(allowed, r)) {
            ok = false;
            break;
          }
        if (!ok) continue;
      }
      const std::size_t cpos = g.arena.add(Player::colin, 0, turn.state + "!" + v.show());
      g.turns.push_back({turn.state, turn.from, turn.challenge, 0, Player::colin, v});
      g.arena.link(idx, cpos);

      if (in_prefix) {
        const auto ac = ix.across.find(turn.state);
        if (ac != ix.across.end())
          for (const auto& [nbr, shared] : ac->second) {
            if (nbr == turn.from) continue;  // the edge the play arrived through
            const gf::Vec face = v.projected(shared);
            if (face.is_zero()) continue;
            for (const auto& x : detail::normalized_functionals(p, shared, functional_cap))
              if (face.dot(x) != 0) g.arena.link(cpos, sarah_pos(nbr, turn.state, x, 0));
          }
      }
      const auto ot = ix.out_of.find(turn.state);
      if (ot != ix.out_of.end())
        for (const auto ti : ot->second) {
          const tom::Transition& tr = rp.transitions[ti];
          LabelSet targets;
          for (const auto& [s, t] : tr.match) targets.insert(t);
          gf::Vec face = gf::Vec::zero(p, targets);
          for (const auto& [s, t] : tr.match) face.set(t, v.at(s));
          if (face.is_zero()) continue;
          for (const auto& x : detail::normalized_functionals(p, targets, functional_cap))
            if (face.dot(x) != 0) g.arena.link(cpos, sarah_pos(tr.to, "", x, tr.priority));
        }
    }
  }
  return g;
}

struct VectorOutcome {
  CompiledVectorGame game;
  ArenaSolution solution;
  Player winner() const { return solution.winner[game.start]; }
};

inline VectorOutcome solve_vector_game(const RepresentedPresentation& rp, const Label& edge,
                                       const LabelSet& allowed, const LabelSet& forbidden,
                                       std::uint64_t functional_cap = 4096) {
  VectorOutcome out{build_vector_arena(rp, edge, allowed, forbidden, functional_cap), {}};
  out.solution = solve_arena(out.game.arena);
  return out;
}

struct MaterializedVector {
  tom::TreeRepresentation tree;  // the unfolding the witness lives on
  tom::PsiVector vectors;
};

// Freeze Sarah's positional strategy into a consistent vector family on the
// depth-bounded unfolding.  At each interface the value owed to the parent is
// rebuilt inside the span of her replies to every functional that detects it;
// untouched branches stay zero.
inline MaterializedVector materialize_vector(const RepresentedPresentation& rp,
                                             const Label& edge, const LabelSet& allowed,
                                             const LabelSet& forbidden, int depth,
                                             std::uint64_t functional_cap = 4096) {
  const VectorOutcome out = solve_vector_game(rp, edge, allowed, forbidden, functional_cap);
  if (out.winner() != Player::sarah)
    throw input_error("Sarah loses the game on '" + edge +
                      "', so there is no vector to materialize");
  const detail::RepIndex ix = detail::index_representation(rp);
  const int p = rp.prefix.characteristic();
  const auto pdist = rp.prefix.distances(rp.root);
  const NodeName owner = out.game.turns[out.game.start].state;
  if (pdist.at(owner) > depth)
    throw input_error("unfolding to depth " + std::to_string(depth) + " misses '" + owner +
                      "', the node holding '" + edge + "'");

  MaterializedVector mv{unfold_representation(rp, depth), {}};

  const auto reply = [&](const NodeName& state, const NodeName& from, const gf::Vec& challenge,
                         int prio) -> const gf::Vec& {
    const auto it = out.game.sarah_index.find({state, from, challenge, prio});
    if (it == out.game.sarah_index.end() ||
        out.solution.winner[it->second] != Player::sarah ||
        out.solution.strategy[it->second] == ArenaSolution::no_move)
      throw internal_error("the winning strategy wandered outside its region at '" + state +
                           "'");
    return out.game.turns[out.solution.strategy[it->second]].vector;
  };

  // The node vector owing `target` on its entry interface: the root answers
  // the unit functional directly, deeper nodes combine the strategy replies
  // to every functional that detects the owed value.
  const auto settle = [&](const NodeName& state, const NodeName& from, const gf::Vec& target,
                          int prio) -> gf::Vec {
    std::vector<gf::Vec> replies, faces;
    for (const auto& x : detail::normalized_functionals(p, target.ambient, functional_cap)) {
      if (target.dot(x) == 0) continue;
      replies.push_back(reply(state, from, x, prio));
      faces.push_back(replies.back().projected(target.ambient));
    }
    const auto lambda = gf::in_span(target, faces);
    if (!lambda)
      throw internal_error("the value owed at '" + state +
                           "' escapes the span of the strategy replies");
    const gf::Subspace& space =
        rp.prefix.spaces.count(state) ? rp.prefix.spaces.at(state) : rp.core.at(state);
    gf::Vec w = gf::Vec::zero(p, space.ambient);
    for (std::size_t i = 0; i < replies.size(); ++i)
      if ((*lambda)[i] != 0) w = w + replies[i].scaled((*lambda)[i]);
    if (w.projected(target.ambient) != target)
      throw internal_error("the combined reply at '" + state +
                           "' breaks interface agreement");
    return w;
  };

  struct Visit {
    NodeName name;
    NodeName state;
    NodeName came_from;                // prefix predecessor, if any
    std::map<Label, Label> to_global;  // state coordinates -> tree coordinates
    gf::Vec vector;                    // in state coordinates
    int depth;
  };

  const auto identity_map = [](const LabelSet& labels) {
    std::map<Label, Label> m;
    for (const auto& e : labels) m[e] = e;
    return m;
  };

  std::deque<Visit> queue;
  {
    const gf::Vec& v0 = reply(owner, "", gf::Vec::unit(p, LabelSet{edge}, edge), 0);
    queue.push_back({owner, owner, "", identity_map(rp.prefix.spaces.at(owner).ambient), v0,
                     pdist.at(owner)});
  }
  while (!queue.empty()) {
    const Visit cur = queue.front();
    queue.pop_front();
    gf::Vec global = gf::Vec::zero(p, mv.tree.spaces.at(cur.name).ambient);
    for (const auto& [e, c] : cur.vector.coord) global.set(cur.to_global.at(e), c);
    mv.vectors[cur.name] = std::move(global);

    const bool in_prefix = rp.prefix.spaces.count(cur.state) != 0;
    if (in_prefix) {
      const auto ac = ix.across.find(cur.state);
      if (ac != ix.across.end())
        for (const auto& [nbr, shared] : ac->second) {
          if (nbr == cur.came_from || pdist.at(nbr) > depth) continue;
          const gf::Vec face = cur.vector.projected(shared);
          if (face.is_zero()) continue;  // the neighbour's branch stays zero
          queue.push_back({nbr, nbr, cur.state,
                           identity_map(rp.prefix.spaces.at(nbr).ambient),
                           settle(nbr, cur.state, face, 0), pdist.at(nbr)});
        }
    }
    const auto ot = ix.out_of.find(cur.state);
    if (ot != ix.out_of.end())
      for (const auto ti : ot->second) {
        if (cur.depth + 1 > depth) continue;
        const tom::Transition& tr = rp.transitions[ti];
        LabelSet targets;
        for (const auto& [s, t] : tr.match) targets.insert(t);
        gf::Vec face = gf::Vec::zero(p, targets);
        for (const auto& [s, t] : tr.match) face.set(t, cur.vector.at(s));
        if (face.is_zero()) continue;
        Visit child;
        child.name = cur.name + "/" + std::to_string(ix.spawn_index[ti]);
        child.state = tr.to;
        child.came_from = "";
        for (const auto& [s, t] : tr.match) child.to_global[t] = cur.to_global.at(s);
        for (const auto& e : rp.core.at(tr.to).ambient)
          if (!child.to_global.count(e)) child.to_global[e] = child.name + ":" + e;
        child.vector = settle(tr.to, "", face, tr.priority);
        child.depth = cur.depth + 1;
        queue.push_back(std::move(child));
      }
  }

  for (const auto& [name, u] : mv.tree.spaces)
    if (!mv.vectors.count(name)) mv.vectors.emplace(name, gf::Vec::zero(p, u.ambient));

  try {
    tom::validate_psi_vector(mv.tree, mv.vectors);
  } catch (const input_error& e) {
    throw internal_error(std::string("materialization produced an inconsistent family: ") +
                         e.what());
  }
  return mv;
}

}  // namespace psimat::games
