// Orthogonality-axiom checking for pairs (C, D) of set systems, matroid
// reconstruction from such pairs, and the recursive base-extension procedure.
// The checkers give exact verdicts by exhaustive enumeration — the partition
// loop of (O2) and the X loops of (O3)/(O3*) are exponential in |E|, hence the
// ground cap (default 12). Internally sets are compiled to bitmasks so the
// enumerations stay cheap at that scale.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "matroid.hpp"

namespace psimat {

struct SetSystemPair {
  LabelSet ground;
  SetFamily c_family;  // putative circuits
  SetFamily d_family;  // putative cocircuits
};

inline SetSystemPair system_pair(const Matroid& m) {
  return {m.ground(), m.circuits(), m.cocircuits()};
}

enum class Axiom { c1, c2, c1_star, c2_star, o1, o2, o3, o3_star };

inline const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> order{Axiom::c1, Axiom::c2,      Axiom::c1_star,
                                        Axiom::c2_star, Axiom::o1, Axiom::o2,
                                        Axiom::o3, Axiom::o3_star};
  return order;
}

inline std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::c1: return "(C1)";
    case Axiom::c2: return "(C2)";
    case Axiom::c1_star: return "(C1*)";
    case Axiom::c2_star: return "(C2*)";
    case Axiom::o1: return "(O1)";
    case Axiom::o2: return "(O2)";
    case Axiom::o3: return "(O3)";
    case Axiom::o3_star: return "(O3*)";
  }
  throw internal_error("unknown axiom");
}

// Failure evidence, structured so a test can replay it: the offending member
// sets, the pivot element, and for (O2) the two partition classes.
struct AxiomWitness {
  Axiom axiom{};
  std::vector<LabelSet> sets;
  std::optional<Label> element;
  std::optional<std::pair<LabelSet, LabelSet>> partition;  // (P_C, P_D)
  std::string note;
};

class AxiomReport {
 public:
  void record(Axiom a, bool pass) { verdicts_[a] = pass; }
  void record_failure(AxiomWitness w) {
    verdicts_[w.axiom] = false;
    witnesses_.push_back(std::move(w));
  }
  bool passes(Axiom a) const { return verdicts_.at(a); }
  bool all_pass() const {
    for (const auto& [a, ok] : verdicts_)
      if (!ok) return false;
    return true;
  }
  // The last four axioms determine a matroid even when (C1),(C2),(C1*),(C2*)
  // fail (non-minimal members are legal there).
  bool determines_matroid() const {
    return passes(Axiom::o1) && passes(Axiom::o2) && passes(Axiom::o3) &&
           passes(Axiom::o3_star);
  }
  const std::vector<AxiomWitness>& failures() const { return witnesses_; }
  const AxiomWitness* witness_for(Axiom a) const {
    for (const auto& w : witnesses_)
      if (w.axiom == a) return &w;
    return nullptr;
  }
  std::string summary() const {
    std::string out;
    for (Axiom a : all_axioms()) {
      if (!out.empty()) out += "; ";
      out += axiom_name(a) + (passes(a) ? ": pass" : ": FAIL");
    }
    for (const auto& w : witnesses_) out += "\n  " + axiom_name(w.axiom) + " " + w.note;
    return out;
  }

 private:
  std::map<Axiom, bool> verdicts_;
  std::vector<AxiomWitness> witnesses_;
};

namespace axdetail {

struct MaskContext {
  explicit MaskContext(const LabelSet& ground) {
    labels.assign(ground.begin(), ground.end());
    if (labels.size() > 30)
      throw resource_error("mask enumeration over " + std::to_string(labels.size()) +
                           " elements");
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
    full = (std::uint64_t{1} << labels.size()) - 1;
  }
  std::uint64_t mask_of(const LabelSet& s) const {
    std::uint64_t m = 0;
    for (const auto& e : s) m |= std::uint64_t{1} << index.at(e);
    return m;
  }
  LabelSet set_of(std::uint64_t m) const {
    LabelSet s;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (m & (std::uint64_t{1} << i)) s.insert(labels[i]);
    return s;
  }
  std::vector<std::uint64_t> masks_of(const SetFamily& fam) const {
    std::vector<std::uint64_t> out;
    out.reserve(fam.size());
    for (const auto& s : fam) out.push_back(mask_of(s));
    return out;
  }
  std::vector<Label> labels;
  std::map<Label, std::size_t> index;
  std::uint64_t full = 0;
};

inline bool member_through_inside(const std::vector<std::uint64_t>& fam, std::uint64_t ebit,
                                  std::uint64_t pool) {
  for (const auto f : fam)
    if ((f & ebit) && !(f & ~pool)) return true;
  return false;
}

// (O2) over every partition E = P_C ∪̇ P_D ∪̇ {e}; returns (element bit, P_C mask).
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> o2_violation(
    const MaskContext& mc, const std::vector<std::uint64_t>& cm,
    const std::vector<std::uint64_t>& dm) {
  for (std::size_t i = 0; i < mc.labels.size(); ++i) {
    const std::uint64_t ebit = std::uint64_t{1} << i;
    const std::uint64_t rest = mc.full & ~ebit;
    std::uint64_t pc = rest;
    while (true) {
      if (!member_through_inside(cm, ebit, pc | ebit) &&
          !member_through_inside(dm, ebit, (rest & ~pc) | ebit))
        return std::make_pair(ebit, pc);
      if (pc == 0) break;
      pc = (pc - 1) & rest;
    }
  }
  return std::nullopt;
}

// (O3) literally: for every member C, e ∈ C and X ⊆ E the family of members
// through e inside X ∪ C must have a ⊆-minimal difference beyond X. On finite
// data the family contains C itself, so a violation cannot occur; the loop is
// still the honest exhaustive check.
inline std::optional<std::pair<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>>
o3_violation(const MaskContext& mc, const std::vector<std::uint64_t>& cm) {
  std::vector<std::uint64_t> diffs;
  for (const auto c : cm) {
    for (std::size_t i = 0; i < mc.labels.size(); ++i) {
      const std::uint64_t ebit = std::uint64_t{1} << i;
      if (!(c & ebit)) continue;
      std::uint64_t x = mc.full;
      while (true) {
        diffs.clear();
        for (const auto c2 : cm)
          if ((c2 & ebit) && !(c2 & ~(x | c))) diffs.push_back(c2 & ~x);
        bool has_min = false;
        for (const auto d : diffs) {
          bool dominated = false;
          for (const auto d2 : diffs)
            if (d2 != d && !(d2 & ~d)) {
              dominated = true;
              break;
            }
          if (!dominated) {
            has_min = true;
            break;
          }
        }
        if (!has_min) return std::make_pair(c, std::make_pair(ebit, x));
        if (x == 0) break;
        x = (x - 1) & mc.full;
      }
    }
  }
  return std::nullopt;
}

struct EliminationBreak {
  std::uint64_t o = 0, x = 0, u = 0, z = 0;
};

// Circuit elimination in the full family form: whenever X ⊆ o and members
// (o_x)_{x∈X} meet X exactly in x, every z of o beyond ⋃o_x lies on a member
// inside (o ∪ ⋃o_x) ∖ X. Families are walked by their unions (deduplicated),
// which keeps the enumeration polynomial in 2^|E|.
inline std::optional<EliminationBreak> elimination_violation(
    const std::vector<std::uint64_t>& cm) {
  for (const auto o : cm) {
    std::uint64_t x = o;
    while (true) {
      std::vector<std::uint64_t> unions{0};
      bool vacuous = false;
      for (std::size_t i = 0; i < 64 && !vacuous; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        if (!(x & bit)) continue;
        std::vector<std::uint64_t> next;
        bool any = false;
        for (const auto c : cm) {
          if ((c & x) != bit) continue;
          any = true;
          for (const auto u : unions) next.push_back(u | c);
        }
        if (!any) {
          vacuous = true;  // no admissible family chooses a member at this x
          break;
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        unions = std::move(next);
      }
      if (!vacuous) {
        for (const auto u : unions) {
          const std::uint64_t target = (o | u) & ~x;
          std::uint64_t zrest = o & ~u;
          while (zrest) {
            const std::uint64_t zbit = zrest & (~zrest + 1);
            zrest &= zrest - 1;
            if (!member_through_inside(cm, zbit, target))
              return EliminationBreak{o, x, u, zbit};
          }
        }
      }
      if (x == 0) break;
      x = (x - 1) & o;
    }
  }
  return std::nullopt;
}

}  // namespace axdetail

// 𝒞^⊥: all subsets of the ground set meeting no member of the family exactly once.
inline SetFamily perp_family(const LabelSet& ground, const SetFamily& c_family,
                             std::size_t ground_cap = 12) {
  if (ground.size() > ground_cap)
    throw resource_error("perp enumeration over " + std::to_string(ground.size()) +
                         " elements exceeds the cap of " + std::to_string(ground_cap));
  const axdetail::MaskContext mc(ground);
  const auto cm = mc.masks_of(c_family);
  SetFamily out;
  for (std::uint64_t w = 0;; ++w) {
    bool ok = true;
    for (const auto c : cm)
      if (std::popcount(w & c) == 1) {
        ok = false;
        break;
      }
    if (ok) out.insert(mc.set_of(w));
    if (w == mc.full) break;
  }
  return out;
}

// Full-family circuit elimination as a standalone predicate (the ground set is
// implicit: only the members matter).
inline bool satisfies_elimination(const SetFamily& c_family) {
  LabelSet ground;
  for (const auto& c : c_family) ground = set_union(ground, c);
  const axdetail::MaskContext mc(ground);
  return !axdetail::elimination_violation(mc.masks_of(c_family)).has_value();
}

inline AxiomReport check_axioms(const SetSystemPair& s, std::size_t ground_cap = 12) {
  if (s.ground.size() > ground_cap)
    throw resource_error("axiom check over " + std::to_string(s.ground.size()) +
                         " elements exceeds the cap of " + std::to_string(ground_cap));
  for (const auto* fam : {&s.c_family, &s.d_family})
    for (const auto& m : *fam)
      if (!is_subset(m, s.ground))
        throw input_error("member " + show_set(m) + " leaves the ground set " +
                          show_set(s.ground));

  const axdetail::MaskContext mc(s.ground);
  const auto cm = mc.masks_of(s.c_family);
  const auto dm = mc.masks_of(s.d_family);
  AxiomReport r;

  const auto check_c1 = [&](Axiom a, const SetFamily& fam) {
    if (fam.count(LabelSet{}))
      r.record_failure({a, {LabelSet{}}, std::nullopt, std::nullopt,
                        "the empty set is a member"});
    else
      r.record(a, true);
  };
  check_c1(Axiom::c1, s.c_family);
  check_c1(Axiom::c1_star, s.d_family);

  const auto check_c2 = [&](Axiom a, const SetFamily& fam) {
    for (const auto& x : fam)
      for (const auto& y : fam)
        if (x != y && is_subset(x, y)) {
          r.record_failure({a, {x, y}, std::nullopt, std::nullopt,
                            show_set(x) + " is contained in " + show_set(y)});
          return;
        }
    r.record(a, true);
  };
  check_c2(Axiom::c2, s.c_family);
  check_c2(Axiom::c2_star, s.d_family);

  {
    bool ok = true;
    for (const auto& c : s.c_family) {
      for (const auto& d : s.d_family)
        if (set_intersect(c, d).size() == 1) {
          const Label e = *set_intersect(c, d).begin();
          r.record_failure({Axiom::o1, {c, d}, e, std::nullopt,
                            show_set(c) + " meets " + show_set(d) + " exactly in " + e});
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (ok) r.record(Axiom::o1, true);
  }

  if (const auto v = axdetail::o2_violation(mc, cm, dm)) {
    const Label e = *mc.set_of(v->first).begin();
    const LabelSet pc = mc.set_of(v->second);
    const LabelSet pd = set_minus(set_minus(s.ground, pc), LabelSet{e});
    r.record_failure({Axiom::o2, {}, e, std::make_pair(pc, pd),
                      "no member through " + e + " inside P_C+" + e + "=" +
                          show_set(set_with(pc, e)) + " or P_D+" + e + "=" +
                          show_set(set_with(pd, e))});
  } else {
    r.record(Axiom::o2, true);
  }

  const auto check_o3 = [&](Axiom a, const std::vector<std::uint64_t>& fam) {
    if (const auto v = axdetail::o3_violation(mc, fam)) {
      const LabelSet c = mc.set_of(v->first);
      const Label e = *mc.set_of(v->second.first).begin();
      const LabelSet x = mc.set_of(v->second.second);
      r.record_failure({a, {c, x}, e, std::nullopt,
                        "no minimal-difference member through " + e + " inside " +
                            show_set(set_union(x, c))});
    } else {
      r.record(a, true);
    }
  };
  check_o3(Axiom::o3, cm);
  check_o3(Axiom::o3_star, dm);

  return r;
}

// Builds the matroid whose circuits are the minimal nonempty members of C.
// Requires only the last four axioms; afterwards re-derives the sandwich
// C(M) ⊆ C ⊆ S(M) and C(M*) ⊆ D ⊆ S(M*) and insists on it.
inline Matroid reconstruct(const SetSystemPair& s, std::size_t ground_cap = 12) {
  const AxiomReport report = check_axioms(s, ground_cap);
  if (!report.determines_matroid()) {
    std::string msg = "reconstruction requires (O1),(O2),(O3),(O3*); failing:";
    for (Axiom a : {Axiom::o1, Axiom::o2, Axiom::o3, Axiom::o3_star})
      if (!report.passes(a)) {
        msg += " " + axiom_name(a);
        if (const auto* w = report.witness_for(a)) msg += " [" + w->note + "]";
      }
    throw input_error(msg);
  }
  const Matroid m = Matroid::from_circuits(
      s.ground, minimal_members(nonempty_members(s.c_family)),
      std::max<std::size_t>(ground_cap, Matroid::default_ground_cap));
  for (const auto& o : m.circuits())
    if (!s.c_family.count(o)) throw internal_error("a derived circuit is missing from C");
  for (const auto& c : s.c_family)
    if (!m.is_scrawl(c))
      throw internal_error("member " + show_set(c) + " of C is not a scrawl");
  const Matroid md = m.dual();
  for (const auto& b : m.cocircuits())
    if (!s.d_family.count(b))
      throw internal_error("derived cocircuit " + show_set(b) + " is missing from D");
  for (const auto& d : s.d_family)
    if (!md.is_scrawl(d))
      throw internal_error("member " + show_set(d) + " of D is not a coscrawl");
  return m;
}

struct BaseExtension {
  LabelSet i_inf;  // maximal independent subset of the window
  LabelSet j_inf;  // complement; i_inf ∪̇ j_inf = ground
};

// The recursive base extension: given independent I ⊆ X, walk the enumeration
// of X and maintain (I_n, J_n) with I_0 = I, J_0 = E∖X.  Per element e:
//   - some member of C fits inside I+e through e  → e joins J;
//   - e not yet in J → e joins I, and J grows by a member of D through e
//     avoiding I−e whose difference beyond J is minimal;
//   - e already in J → I grows dually by a member of C through e avoiding J−e
//     with minimal difference beyond I.
// Ties among minimal differences go to the lexicographically least member.
inline BaseExtension base_extend(const SetSystemPair& s, const LabelSet& start,
                                 const LabelSet& within, std::vector<Label> order = {}) {
  for (const auto* fam : {&s.c_family, &s.d_family})
    for (const auto& m : *fam)
      if (!is_subset(m, s.ground))
        throw input_error("member " + show_set(m) + " leaves the ground set");
  if (!is_subset(within, s.ground))
    throw input_error("the window " + show_set(within) + " leaves the ground set");
  if (!is_subset(start, within))
    throw input_error("the starting set must lie inside the window");
  const SetFamily cmin = minimal_members(nonempty_members(s.c_family));
  for (const auto& o : cmin)
    if (is_subset(o, start))
      throw input_error("the starting set is dependent: it includes " + show_set(o));
  if (order.empty()) order.assign(within.begin(), within.end());
  if (order.size() != within.size() ||
      LabelSet(order.begin(), order.end()) != within)
    throw input_error("the enumeration must list each window element exactly once");

  const auto axiom_defect = [](const std::string& what) {
    return input_error("the pair does not satisfy the orthogonality axioms: " + what);
  };

  // minimal difference beyond `base` among members through e avoiding `forbidden`
  const auto pick = [&](const SetFamily& fam, const Label& e, const LabelSet& forbidden,
                        const LabelSet& base) -> std::optional<LabelSet> {
    std::vector<std::pair<LabelSet, LabelSet>> cands;  // (member, difference)
    for (const auto& m : fam)
      if (contains(m, e) && disjoint(m, forbidden)) cands.emplace_back(m, set_minus(m, base));
    for (const auto& [m, diff] : cands) {
      bool dominated = false;
      for (const auto& [m2, diff2] : cands)
        if (diff2 != diff && is_subset(diff2, diff)) {
          dominated = true;
          break;
        }
      if (!dominated) return m;  // family iteration order = lexicographic tie-break
    }
    return std::nullopt;
  };

  LabelSet i_cur = start;
  LabelSet j_cur = set_minus(s.ground, within);
  for (const auto& e : order) {
    bool closes = false;
    for (const auto& c : s.c_family)
      if (contains(c, e) && is_subset(c, set_with(i_cur, e))) {
        closes = true;
        break;
      }
    if (closes) {
      j_cur.insert(e);
    } else if (!contains(j_cur, e)) {
      const auto d = pick(s.d_family, e, set_without(i_cur, e), j_cur);
      if (!d) throw axiom_defect("no cocircuit member through " + e + " avoids " +
                                 show_set(set_without(i_cur, e)));
      i_cur.insert(e);
      j_cur = set_without(set_union(j_cur, *d), e);
    } else {
      const auto c = pick(s.c_family, e, set_without(j_cur, e), i_cur);
      if (!c) throw axiom_defect("no circuit member through " + e + " avoids " +
                                 show_set(set_without(j_cur, e)));
      i_cur = set_without(set_union(i_cur, *c), e);
    }
  }

  if (!disjoint(i_cur, j_cur) || set_union(i_cur, j_cur) != s.ground)
    throw axiom_defect("the recursion lost the partition of the ground set");
  for (const auto& o : cmin)
    if (is_subset(o, i_cur))
      throw axiom_defect("the result includes the circuit " + show_set(o));
  for (const auto& f : set_minus(within, i_cur)) {
    bool dependent = false;
    for (const auto& o : cmin)
      if (contains(o, f) && is_subset(o, set_with(i_cur, f))) {
        dependent = true;
        break;
      }
    if (!dependent)
      throw axiom_defect("the result is not maximal: " + f + " extends it independently");
  }
  return {i_cur, j_cur};
}

struct EliminationAgreement {
  bool o2_with_perp = false;  // (O2) for the pair (C, C^⊥)
  bool elimination = false;   // full-family circuit elimination for C
  bool agree = false;
};

// The two properties are equivalent; the verdict reports both routes plus
// their agreement, computed independently.
inline EliminationAgreement check_O2_via_elimination(const LabelSet& ground,
                                                     const SetFamily& c_family,
                                                     std::size_t ground_cap = 12) {
  if (ground.size() > ground_cap)
    throw resource_error("ground set of " + std::to_string(ground.size()) +
                         " elements exceeds the cap of " + std::to_string(ground_cap));
  for (const auto& m : c_family)
    if (!is_subset(m, ground))
      throw input_error("member " + show_set(m) + " leaves the ground set");
  const axdetail::MaskContext mc(ground);
  const auto cm = mc.masks_of(c_family);

  std::vector<std::uint64_t> perp;
  for (std::uint64_t w = 0;; ++w) {
    bool ok = true;
    for (const auto c : cm)
      if (std::popcount(w & c) == 1) {
        ok = false;
        break;
      }
    if (ok) perp.push_back(w);
    if (w == mc.full) break;
  }

  EliminationAgreement out;
  out.o2_with_perp = !axdetail::o2_violation(mc, cm, perp).has_value();
  out.elimination = !axdetail::elimination_violation(cm).has_value();
  out.agree = out.o2_with_perp == out.elimination;
  return out;
}

}  // namespace psimat
