// Shared vocabulary: element labels, label sets, set families, error taxonomy,
// and the small set-algebra helpers every module leans on. Labels order
// lexicographically; std::set gives every family a canonical iteration order,
// which is what makes all downstream output deterministic.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace psimat {

using Label = std::string;
using LabelSet = std::set<Label>;
using SetFamily = std::set<LabelSet>;

// Exit-code taxonomy of the CLI: 2 = bad input, 3 = cap exceeded, 4 = broken invariant.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline bool contains(const LabelSet& s, const Label& e) { return s.count(e) != 0; }

inline bool is_subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline LabelSet set_union(const LabelSet& a, const LabelSet& b) {
  LabelSet r = a;
  r.insert(b.begin(), b.end());
  return r;
}

inline LabelSet set_minus(const LabelSet& a, const LabelSet& b) {
  LabelSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
  return r;
}

inline LabelSet set_intersect(const LabelSet& a, const LabelSet& b) {
  LabelSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
  return r;
}

inline LabelSet sym_diff(const LabelSet& a, const LabelSet& b) {
  LabelSet r;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(r, r.end()));
  return r;
}

inline LabelSet set_with(LabelSet a, const Label& e) {
  a.insert(e);
  return a;
}

inline LabelSet set_without(LabelSet a, const Label& e) {
  a.erase(e);
  return a;
}

inline bool disjoint(const LabelSet& a, const LabelSet& b) {
  return set_intersect(a, b).empty();
}

inline std::string join(const LabelSet& s, const std::string& sep = " ") {
  std::ostringstream os;
  bool first = true;
  for (const auto& e : s) {
    if (!first) os << sep;
    os << e;
    first = false;
  }
  return os.str();
}

inline std::string show_set(const LabelSet& s) { return "{" + join(s, ",") + "}"; }

inline std::string show_family(const SetFamily& f) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& s : f) {
    if (!first) os << " ";
    os << show_set(s);
    first = false;
  }
  os << "}";
  return os.str();
}

// Visits every subset of base; base must be small (guard with caps at call sites).
inline void for_each_subset(const LabelSet& base,
                            const std::function<void(const LabelSet&)>& fn) {
  std::vector<Label> v(base.begin(), base.end());
  if (v.size() > 30) throw resource_error("subset enumeration over " +
                                          std::to_string(v.size()) + " elements");
  const std::uint64_t n = std::uint64_t{1} << v.size();
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    LabelSet s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) s.insert(v[i]);
    fn(s);
  }
}

// Inclusion-minimal members of a family.
inline SetFamily minimal_members(const SetFamily& fam) {
  SetFamily out;
  for (const auto& s : fam) {
    bool minimal = true;
    for (const auto& t : fam)
      if (t != s && is_subset(t, s)) {
        minimal = false;
        break;
      }
    if (minimal) out.insert(s);
  }
  return out;
}

inline SetFamily nonempty_members(const SetFamily& fam) {
  SetFamily out;
  for (const auto& s : fam)
    if (!s.empty()) out.insert(s);
  return out;
}

inline bool is_antichain(const SetFamily& fam) {
  for (const auto& a : fam)
    for (const auto& b : fam)
      if (a != b && is_subset(a, b)) return false;
  return true;
}

}  // namespace psimat
