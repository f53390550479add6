// Finite matroid kernel. A matroid is stored by its explicit circuit list;
// bases, rank and cocircuits are derived eagerly at construction, so instances
// are immutable and cheap to query afterwards. Construction from user input
// (from_circuits) validates the circuit axioms (C1), (C2) and circuit
// elimination (C3); derivation routes (duals, minors, representations) are
// correct by construction and skip re-validation.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "gf.hpp"

namespace psimat {

enum class MatroidOrigin { explicit_circuits, graphic, represented, derived };

// A union of circuits, together with circuits realizing the union.
struct Scrawl {
  LabelSet edges;
  std::vector<LabelSet> witness;
};

class Matroid {
 public:
  static constexpr std::size_t default_ground_cap = 16;

  // Validates (C1), (C2) and circuit elimination; elimination is checked in
  // the classical two-circuit form and in the family form for |X| <= 2.
  static Matroid from_circuits(LabelSet ground, SetFamily circuits,
                               std::size_t ground_cap = default_ground_cap) {
    check_cap(ground.size(), ground_cap);
    for (const auto& o : circuits)
      if (!is_subset(o, ground))
        throw input_error("circuit " + show_set(o) + " leaves the ground set " +
                          show_set(ground));
    if (circuits.count(LabelSet{}))
      throw input_error("circuit axiom (C1) violated: the empty set is listed as a circuit");
    for (const auto& a : circuits)
      for (const auto& b : circuits)
        if (a != b && is_subset(a, b))
          throw input_error("circuit axiom (C2) violated: " + show_set(a) +
                            " is contained in " + show_set(b));
    check_elimination(circuits);
    return finish(std::move(ground), std::move(circuits), MatroidOrigin::explicit_circuits,
                  std::nullopt);
  }

  // Circuits are the minimal nonempty supports among all vectors of the
  // subspace; the resulting matroid keeps the subspace as its representation.
  static Matroid from_representation(const gf::Subspace& vectors,
                                     std::size_t ground_cap = default_ground_cap) {
    check_cap(vectors.ambient.size(), ground_cap);
    SetFamily supports;
    for (const auto& v : gf::enumerate_vectors(vectors))
      if (!v.is_zero()) supports.insert(v.support());
    return finish(vectors.ambient, minimal_members(supports), MatroidOrigin::represented,
                  vectors);
  }

  const LabelSet& ground() const { return ground_; }
  const SetFamily& circuits() const { return circuits_; }
  const SetFamily& cocircuits() const { return cocircuits_; }
  const SetFamily& bases() const { return bases_; }
  std::size_t rank() const { return rank_; }
  MatroidOrigin origin() const { return origin_; }
  const std::optional<gf::Subspace>& representation() const { return rep_; }

  bool is_independent(const LabelSet& s) const {
    require_in_ground(s);
    return independent_raw(s);
  }
  bool is_base(const LabelSet& s) const {
    require_in_ground(s);
    return bases_.count(s) != 0;
  }
  bool is_circuit(const LabelSet& s) const { return circuits_.count(s) != 0; }
  bool is_cocircuit(const LabelSet& s) const { return cocircuits_.count(s) != 0; }

  Matroid dual() const {
    Matroid d;
    d.ground_ = ground_;
    d.circuits_ = cocircuits_;
    d.cocircuits_ = circuits_;
    for (const auto& b : bases_) d.bases_.insert(set_minus(ground_, b));
    d.rank_ = ground_.size() - rank_;
    d.origin_ = rep_ ? MatroidOrigin::represented : MatroidOrigin::derived;
    if (rep_) d.rep_ = gf::complement(*rep_);
    return d;
  }

  // Circuits of the minor are the minimal nonempty traces o∖contract over
  // circuits o avoiding the deleted part.
  Matroid minor(const LabelSet& contract, const LabelSet& remove) const {
    require_in_ground(contract);
    require_in_ground(remove);
    if (!disjoint(contract, remove))
      throw input_error("contract and delete sets overlap in " +
                        show_set(set_intersect(contract, remove)));
    SetFamily traces;
    for (const auto& o : circuits_)
      if (disjoint(o, remove)) traces.insert(set_minus(o, contract));
    return finish(set_minus(ground_, set_union(contract, remove)),
                  minimal_members(nonempty_members(traces)), MatroidOrigin::derived,
                  std::nullopt);
  }

  // The unique circuit inside base+e through e when e is outside the base,
  // and the unique cocircuit avoiding base-e through e when e is inside.
  LabelSet fundamental(const LabelSet& base, const Label& e) const {
    if (!contains(ground_, e)) throw input_error("element " + e + " is not in the ground set");
    if (!is_base(base)) throw input_error(show_set(base) + " is not a base");
    if (!contains(base, e)) {
      std::optional<LabelSet> found;
      const LabelSet room = set_with(base, e);
      for (const auto& o : circuits_)
        if (contains(o, e) && is_subset(o, room)) {
          if (found) throw internal_error("fundamental circuit is not unique");
          found = o;
        }
      if (!found) throw internal_error("no fundamental circuit through " + e);
      return *found;
    }
    LabelSet d;
    const LabelSet rest = set_without(base, e);
    for (const auto& f : ground_)
      if (bases_.count(set_with(rest, f))) d.insert(f);
    if (!is_cocircuit(d)) throw internal_error("fundamental cocircuit derivation broke");
    return d;
  }

  // Witness for "w is a union of circuits". Also re-derives the verdict from
  // the cocircuit side (a scrawl never meets a cocircuit exactly once) and
  // insists the two routes agree.
  std::optional<Scrawl> scrawl_witness(const LabelSet& w) const {
    require_in_ground(w);
    Scrawl s;
    s.edges = w;
    LabelSet covered;
    for (const auto& o : circuits_)
      if (is_subset(o, w)) {
        s.witness.push_back(o);
        covered = set_union(covered, o);
      }
    const bool union_route = covered == w;
    bool parity_route = true;
    for (const auto& b : cocircuits_)
      if (set_intersect(w, b).size() == 1) parity_route = false;
    if (union_route != parity_route)
      throw internal_error("scrawl verdicts disagree on " + show_set(w));
    if (!union_route) return std::nullopt;
    return s;
  }
  bool is_scrawl(const LabelSet& w) const { return scrawl_witness(w).has_value(); }

  // A cocircuit meeting the circuit o exactly in {e,f}; existence is a
  // theorem, so a miss is an internal defect, not bad input.
  LabelSet separating_cocircuit(const LabelSet& o, const Label& e, const Label& f) const {
    if (!is_circuit(o)) throw input_error(show_set(o) + " is not a circuit");
    if (e == f) throw input_error("separating pair must be two distinct elements");
    if (!contains(o, e) || !contains(o, f))
      throw input_error("both separation elements must lie on the circuit");
    const LabelSet want{e, f};
    for (const auto& b : cocircuits_)
      if (set_intersect(o, b) == want) return b;
    throw internal_error("no cocircuit separates " + e + "," + f + " on " + show_set(o));
  }

  Matroid tagged(MatroidOrigin origin) const {
    Matroid m = *this;
    m.origin_ = origin;
    return m;
  }

  friend bool operator==(const Matroid& a, const Matroid& b) {
    return a.ground_ == b.ground_ && a.circuits_ == b.circuits_;
  }
  friend bool operator!=(const Matroid& a, const Matroid& b) { return !(a == b); }

 private:
  Matroid() = default;

  static void check_cap(std::size_t n, std::size_t cap) {
    if (n > cap)
      throw resource_error("ground set of " + std::to_string(n) +
                           " elements exceeds the cap of " + std::to_string(cap));
  }

  static void check_elimination(const SetFamily& circuits) {
    // classical form: two circuits meeting in e leave a circuit when e is cut
    for (const auto& o1 : circuits)
      for (const auto& o2 : circuits) {
        if (!(o1 < o2)) continue;
        for (const auto& e : set_intersect(o1, o2)) {
          const LabelSet pool = set_without(set_union(o1, o2), e);
          if (!family_member_inside(circuits, pool))
            throw input_error("circuit elimination (C3) violated: " + show_set(o1) + " and " +
                              show_set(o2) + " meet in " + e +
                              " but no circuit lies inside " + show_set(pool));
        }
      }
    // family form for |X| <= 2: every z of o outside the o_x survives into a
    // circuit avoiding X inside the union
    const std::vector<LabelSet> all(circuits.begin(), circuits.end());
    for (const auto& o : circuits) {
      const std::vector<Label> oe(o.begin(), o.end());
      for (std::size_t i = 0; i < oe.size(); ++i)
        for (std::size_t j = i; j < oe.size(); ++j) {
          LabelSet x{oe[i]};
          if (j != i) x.insert(oe[j]);
          std::vector<std::vector<LabelSet>> cand;
          for (const auto& xe : x) {
            cand.emplace_back();
            for (const auto& c : all)
              if (set_intersect(c, x) == LabelSet{xe}) cand.back().push_back(c);
          }
          const std::function<void(std::size_t, LabelSet)> family =
              [&](std::size_t k, LabelSet chosen_union) {
                if (k < cand.size()) {
                  for (const auto& c : cand[k]) family(k + 1, set_union(chosen_union, c));
                  return;
                }
                const LabelSet target = set_minus(set_union(o, chosen_union), x);
                for (const auto& z : set_minus(o, chosen_union)) {
                  bool ok = false;
                  for (const auto& c2 : all)
                    if (contains(c2, z) && is_subset(c2, target)) ok = true;
                  if (!ok)
                    throw input_error("circuit elimination (C3) violated for " + show_set(o) +
                                      " with X=" + show_set(x) + ": no circuit through " + z +
                                      " inside " + show_set(target));
                }
              };
          family(0, {});
        }
    }
  }

  static bool family_member_inside(const SetFamily& fam, const LabelSet& pool) {
    for (const auto& s : fam)
      if (is_subset(s, pool)) return true;
    return false;
  }

  // Derives rank, bases and cocircuits; callers guarantee the family is a
  // genuine circuit family.
  static Matroid finish(LabelSet ground, SetFamily circuits, MatroidOrigin origin,
                        std::optional<gf::Subspace> rep) {
    Matroid m;
    m.ground_ = std::move(ground);
    m.circuits_ = std::move(circuits);
    m.origin_ = origin;
    m.rep_ = std::move(rep);

    LabelSet greedy;
    for (const auto& e : m.ground_) {
      greedy.insert(e);
      if (!m.independent_raw(greedy)) greedy.erase(e);
    }
    m.rank_ = greedy.size();

    const std::vector<Label> elems(m.ground_.begin(), m.ground_.end());
    LabelSet cur;
    const std::function<void(std::size_t)> collect = [&](std::size_t i) {
      if (cur.size() == m.rank_) {
        m.bases_.insert(cur);
        return;
      }
      if (i == elems.size() || cur.size() + (elems.size() - i) < m.rank_) return;
      cur.insert(elems[i]);
      if (m.independent_raw(cur)) collect(i + 1);
      cur.erase(elems[i]);
      collect(i + 1);
    };
    collect(0);

    // every cocircuit is fundamental with respect to some base:
    // D(B,e) = { f : (B - e) + f is a base }
    for (const auto& b : m.bases_)
      for (const auto& e : b) {
        LabelSet d;
        const LabelSet rest = set_without(b, e);
        for (const auto& f : m.ground_)
          if (m.bases_.count(set_with(rest, f))) d.insert(f);
        m.cocircuits_.insert(d);
      }
    return m;
  }

  bool independent_raw(const LabelSet& s) const {
    for (const auto& o : circuits_)
      if (is_subset(o, s)) return false;
    return true;
  }

  void require_in_ground(const LabelSet& s) const {
    if (!is_subset(s, ground_))
      throw input_error(show_set(set_minus(s, ground_)) + " is outside the ground set");
  }

  LabelSet ground_;
  SetFamily circuits_;
  SetFamily cocircuits_;
  SetFamily bases_;
  std::size_t rank_ = 0;
  MatroidOrigin origin_ = MatroidOrigin::explicit_circuits;
  std::optional<gf::Subspace> rep_;
};

// Circuits are all (r+1)-subsets; r >= |ground| gives the free matroid.
inline Matroid uniform_matroid(std::size_t r, const LabelSet& ground) {
  SetFamily circuits;
  if (r < ground.size()) {
    for_each_subset(ground, [&](const LabelSet& s) {
      if (s.size() == r + 1) circuits.insert(s);
    });
  }
  return Matroid::from_circuits(ground, circuits, std::max<std::size_t>(ground.size(), 16));
}

inline Matroid free_matroid(const LabelSet& ground) {
  return uniform_matroid(ground.size(), ground);
}

inline Matroid dual(const Matroid& m) { return m.dual(); }
inline Matroid minor(const Matroid& m, const LabelSet& contract, const LabelSet& remove) {
  return m.minor(contract, remove);
}
inline LabelSet fundamental(const Matroid& m, const LabelSet& base, const Label& e) {
  return m.fundamental(base, e);
}
inline bool is_scrawl(const Matroid& m, const LabelSet& w) { return m.is_scrawl(w); }
inline LabelSet separating_cocircuit(const Matroid& m, const LabelSet& o, const Label& e,
                                     const Label& f) {
  return m.separating_cocircuit(o, e, f);
}

}  // namespace psimat
