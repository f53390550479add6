// Exact linear algebra over prime fields GF(p), 2 <= p <= 251. Vectors are
// sparse maps keyed by element label over an explicit ambient set; subspaces
// carry a canonical reduced-row-echelon basis (strictly increasing pivot
// labels), so equal subspaces compare equal member-wise. No floating point.
#pragma once

#include "psimat/core.hpp"

namespace psimat::gf {

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline int check_prime(int p) {
  if (p < 2 || p > 251 || !is_prime(p))
    throw input_error("field characteristic must be a prime in [2,251], got " +
                      std::to_string(p));
  return p;
}

inline int mod_norm(long long v, int p) {
  long long r = v % p;
  if (r < 0) r += p;
  return static_cast<int>(r);
}

inline int mod_inv(int a, int p) {
  // extended Euclid; a != 0 mod p
  a = mod_norm(a, p);
  if (a == 0) throw input_error("division by zero in GF(" + std::to_string(p) + ")");
  int t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    int q = r / new_r;
    int tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return mod_norm(t, p);
}

struct Fp {
  int value = 0;
  int p = 2;

  Fp() = default;
  Fp(long long v, int p_) : value(mod_norm(v, check_prime(p_))), p(p_) {}

  friend Fp operator+(Fp a, Fp b) { return same(a, b), Fp(a.value + b.value, a.p); }
  friend Fp operator-(Fp a, Fp b) { return same(a, b), Fp(a.value - b.value, a.p); }
  friend Fp operator*(Fp a, Fp b) {
    return same(a, b), Fp(static_cast<long long>(a.value) * b.value, a.p);
  }
  friend Fp operator/(Fp a, Fp b) { return same(a, b), a * b.inv(); }
  Fp operator-() const { return Fp(-value, p); }
  Fp inv() const { return Fp(mod_inv(value, p), p); }
  bool is_zero() const { return value == 0; }
  friend bool operator==(const Fp& a, const Fp& b) {
    return a.p == b.p && a.value == b.value;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

 private:
  static void same(const Fp& a, const Fp& b) {
    if (a.p != b.p) throw input_error("mixed field characteristics");
  }
};

struct Vec {
  int p = 2;
  LabelSet ambient;
  std::map<Label, int> coord;  // nonzero residues only

  static Vec zero(int p, LabelSet ambient) {
    Vec v;
    v.p = check_prime(p);
    v.ambient = std::move(ambient);
    return v;
  }

  static Vec unit(int p, LabelSet ambient, const Label& e) {
    Vec v = zero(p, std::move(ambient));
    v.set(e, 1);
    return v;
  }

  int at(const Label& e) const {
    if (!contains(ambient, e))
      throw input_error("coordinate '" + e + "' outside ambient set");
    auto it = coord.find(e);
    return it == coord.end() ? 0 : it->second;
  }

  Vec& set(const Label& e, long long v) {
    if (!contains(ambient, e))
      throw input_error("coordinate '" + e + "' outside ambient set");
    int r = mod_norm(v, p);
    if (r == 0)
      coord.erase(e);
    else
      coord[e] = r;
    return *this;
  }

  LabelSet support() const {
    LabelSet s;
    for (const auto& [e, v] : coord) {
      (void)v;
      s.insert(e);
    }
    return s;
  }

  bool is_zero() const { return coord.empty(); }

  Vec scaled(long long c) const {
    Vec r = zero(p, ambient);
    for (const auto& [e, v] : coord) r.set(e, static_cast<long long>(v) * mod_norm(c, p));
    return r;
  }

  friend Vec operator+(const Vec& a, const Vec& b) {
    a.check_compatible(b);
    Vec r = a;
    for (const auto& [e, v] : b.coord) r.set(e, r.at(e) + v);
    return r;
  }

  friend Vec operator-(const Vec& a, const Vec& b) { return a + b.scaled(-1); }

  int dot(const Vec& b) const {
    check_compatible(b);
    long long acc = 0;
    for (const auto& [e, v] : coord) {
      auto it = b.coord.find(e);
      if (it != b.coord.end()) acc += static_cast<long long>(v) * it->second;
    }
    return mod_norm(acc, p);
  }

  // Same coordinates over a larger ambient set.
  Vec embedded(const LabelSet& bigger) const {
    if (!is_subset(ambient, bigger))
      throw input_error("embedding target does not contain the ambient set");
    Vec r = zero(p, bigger);
    for (const auto& [e, v] : coord) r.set(e, v);
    return r;
  }

  // Drop to a smaller ambient set; all dropped coordinates must be zero.
  Vec restricted(const LabelSet& smaller) const {
    if (!is_subset(smaller, ambient))
      throw input_error("restriction target is not inside the ambient set");
    Vec r = zero(p, smaller);
    for (const auto& [e, v] : coord) {
      if (!contains(smaller, e))
        throw input_error("restriction drops nonzero coordinate '" + e + "'");
      r.set(e, v);
    }
    return r;
  }

  // Restriction that simply forgets coordinates outside `keep`.
  Vec projected(const LabelSet& keep) const {
    Vec r = zero(p, set_intersect(ambient, keep));
    for (const auto& [e, v] : coord)
      if (contains(keep, e)) r.set(e, v);
    return r;
  }

  friend bool operator==(const Vec& a, const Vec& b) {
    return a.p == b.p && a.ambient == b.ambient && a.coord == b.coord;
  }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }
  friend bool operator<(const Vec& a, const Vec& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.ambient != b.ambient) return a.ambient < b.ambient;
    return a.coord < b.coord;
  }

  std::string show() const {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (const auto& e : ambient) {
      if (!first) os << ",";
      os << e << ":" << at(e);
      first = false;
    }
    os << ")";
    return os.str();
  }

  void check_compatible(const Vec& b) const {
    if (p != b.p) throw input_error("mixed field characteristics");
    if (ambient != b.ambient) throw input_error("mixed ambient sets");
  }
};

namespace detail {

// Dense elimination workspace; columns follow the sorted ambient order.
struct Mat {
  int p = 2;
  std::size_t cols = 0;
  std::vector<std::vector<int>> rows;

  void rref_inplace() {
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
      std::size_t sel = pivot_row;
      while (sel < rows.size() && rows[sel][c] == 0) ++sel;
      if (sel == rows.size()) continue;
      std::swap(rows[pivot_row], rows[sel]);
      const int inv = mod_inv(rows[pivot_row][c], p);
      for (auto& v : rows[pivot_row]) v = mod_norm(static_cast<long long>(v) * inv, p);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == pivot_row || rows[r][c] == 0) continue;
        const int f = rows[r][c];
        for (std::size_t j = 0; j < rows[r].size(); ++j)
          rows[r][j] = mod_norm(rows[r][j] - static_cast<long long>(f) * rows[pivot_row][j], p);
      }
      ++pivot_row;
    }
    while (!rows.empty() &&
           std::all_of(rows.back().begin(), rows.back().end(), [](int v) { return v == 0; }))
      rows.pop_back();
  }

  // Pivot column of each row after rref (rows are nonzero).
  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (const auto& r : rows) {
      std::size_t c = 0;
      while (c < cols && r[c] == 0) ++c;
      out.push_back(c);
    }
    return out;
  }

  // Canonical basis of { x : M x = 0 } (x over the column index space).
  std::vector<std::vector<int>> nullspace() const {
    Mat m = *this;
    m.rref_inplace();
    const auto piv = m.pivots();
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::vector<int>> out;
    for (std::size_t f = 0; f < cols; ++f) {
      if (is_pivot[f]) continue;
      std::vector<int> x(cols, 0);
      x[f] = 1;
      for (std::size_t r = 0; r < m.rows.size(); ++r)
        x[piv[r]] = mod_norm(-m.rows[r][f], p);
      out.push_back(std::move(x));
    }
    return out;
  }
};

inline std::vector<Label> column_order(const LabelSet& ambient) {
  return {ambient.begin(), ambient.end()};
}

inline std::vector<int> to_dense(const Vec& v, const std::vector<Label>& order) {
  std::vector<int> r(order.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) r[i] = v.at(order[i]);
  return r;
}

inline Vec from_dense(const std::vector<int>& d, const std::vector<Label>& order, int p,
                      const LabelSet& ambient) {
  Vec v = Vec::zero(p, ambient);
  for (std::size_t i = 0; i < order.size(); ++i)
    if (d[i] != 0) v.set(order[i], d[i]);
  return v;
}

}  // namespace detail

struct Subspace {
  int p = 2;
  LabelSet ambient;
  std::vector<Vec> basis;  // canonical rref rows, increasing pivot labels

  int dim() const { return static_cast<int>(basis.size()); }

  static Subspace zero(int p, LabelSet ambient) {
    Subspace u;
    u.p = check_prime(p);
    u.ambient = std::move(ambient);
    return u;
  }

  bool contains_vector(const Vec& v) const {
    if (v.p != p || v.ambient != ambient)
      throw input_error("vector incompatible with subspace");
    Vec r = v;
    for (const auto& b : basis) {
      if (b.coord.empty()) continue;
      const Label& pivot = b.coord.begin()->first;
      const int c = r.at(pivot);
      if (c != 0) r = r - b.scaled(c);
    }
    return r.is_zero();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.p == b.p && a.ambient == b.ambient && a.basis == b.basis;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
};

inline Subspace rref(const std::vector<Vec>& rows) {
  if (rows.empty()) throw input_error("rref needs at least one row to fix the ambient set");
  const int p = rows.front().p;
  const LabelSet& ambient = rows.front().ambient;
  for (const auto& r : rows) r.check_compatible(rows.front());
  const auto order = detail::column_order(ambient);
  detail::Mat m;
  m.p = p;
  m.cols = order.size();
  for (const auto& r : rows) m.rows.push_back(detail::to_dense(r, order));
  m.rref_inplace();
  Subspace u = Subspace::zero(p, ambient);
  for (const auto& r : m.rows) u.basis.push_back(detail::from_dense(r, order, p, ambient));
  return u;
}

inline Subspace span(const std::vector<Vec>& rows, int p, const LabelSet& ambient) {
  if (rows.empty()) return Subspace::zero(p, ambient);
  return rref(rows);
}

inline Subspace complement(const Subspace& u) {
  const auto order = detail::column_order(u.ambient);
  detail::Mat m;
  m.p = u.p;
  m.cols = order.size();
  for (const auto& b : u.basis) m.rows.push_back(detail::to_dense(b, order));
  std::vector<Vec> rows;
  for (const auto& x : m.nullspace())
    rows.push_back(detail::from_dense(x, order, u.p, u.ambient));
  return span(rows, u.p, u.ambient);
}

// Witness coefficients lambda with sum(lambda_i * X_i) = y, aligned with X.
inline std::optional<std::vector<int>> in_span(const Vec& y, const std::vector<Vec>& X) {
  for (const auto& x : X) x.check_compatible(y);
  const auto order = detail::column_order(y.ambient);
  // One equation per ambient coordinate, one unknown per member of X,
  // augmented with y as the last column.
  detail::Mat m;
  m.p = y.p;
  m.cols = X.size() + 1;
  for (std::size_t r = 0; r < order.size(); ++r) {
    std::vector<int> row(X.size() + 1, 0);
    for (std::size_t i = 0; i < X.size(); ++i) row[i] = X[i].at(order[r]);
    row[X.size()] = y.at(order[r]);
    m.rows.push_back(std::move(row));
  }
  m.rref_inplace();
  const auto piv = m.pivots();
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    if (piv[r] == X.size()) return std::nullopt;  // inconsistent: pivot in the y column
  std::vector<int> lambda(X.size(), 0);
  for (std::size_t r = 0; r < m.rows.size(); ++r) lambda[piv[r]] = m.rows[r][X.size()];
  return lambda;
}

// (U1 + U2) intersected with the coordinate subspace of vectors supported in S;
// the result lives over ambient S.
inline Subspace sum_intersect(const Subspace& u1, const Subspace& u2, const LabelSet& s) {
  if (u1.p != u2.p) throw input_error("mixed field characteristics");
  if (u1.ambient != u2.ambient)
    throw input_error("sum_intersect expects a common ambient set");
  if (!is_subset(s, u1.ambient)) throw input_error("S must lie inside the ambient set");
  std::vector<Vec> rows = u1.basis;
  rows.insert(rows.end(), u2.basis.begin(), u2.basis.end());
  const Subspace w = span(rows, u1.p, u1.ambient);
  const LabelSet outside = set_minus(u1.ambient, s);
  // Coefficient vectors c with sum(c_i * basis_i) vanishing outside S.
  detail::Mat m;
  m.p = w.p;
  m.cols = w.basis.size();
  for (const auto& e : outside) {
    std::vector<int> row(w.basis.size(), 0);
    for (std::size_t i = 0; i < w.basis.size(); ++i) row[i] = w.basis[i].at(e);
    m.rows.push_back(std::move(row));
  }
  std::vector<Vec> result_rows;
  if (w.basis.empty()) return Subspace::zero(u1.p, s);
  if (outside.empty()) {
    result_rows = w.basis;
  } else {
    for (const auto& c : m.nullspace()) {
      Vec v = Vec::zero(w.p, w.ambient);
      for (std::size_t i = 0; i < w.basis.size(); ++i)
        if (c[i] != 0) v = v + w.basis[i].scaled(c[i]);
      result_rows.push_back(std::move(v));
    }
  }
  std::vector<Vec> shrunk;
  for (const auto& v : result_rows) shrunk.push_back(v.restricted(s));
  return span(shrunk, u1.p, s);
}

// Every vector of U; p^dim capped.
inline std::vector<Vec> enumerate_vectors(const Subspace& u,
                                          std::uint64_t cap = std::uint64_t{1} << 20) {
  std::uint64_t count = 1;
  for (int i = 0; i < u.dim(); ++i) {
    count *= static_cast<std::uint64_t>(u.p);
    if (count > cap)
      throw resource_error("vector enumeration would exceed cap (" +
                           std::to_string(cap) + ")");
  }
  std::vector<Vec> out;
  out.reserve(count);
  std::vector<int> coeff(u.basis.size(), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t t = k;
    for (auto& c : coeff) {
      c = static_cast<int>(t % u.p);
      t /= u.p;
    }
    Vec v = Vec::zero(u.p, u.ambient);
    for (std::size_t i = 0; i < coeff.size(); ++i)
      if (coeff[i] != 0) v = v + u.basis[i].scaled(coeff[i]);
    out.push_back(std::move(v));
  }
  return out;
}

inline Subspace embed(const Subspace& u, const LabelSet& bigger) {
  std::vector<Vec> rows;
  for (const auto& b : u.basis) rows.push_back(b.embedded(bigger));
  return span(rows, u.p, bigger);
}

}  // namespace psimat::gf
