#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace sl2ws {

using RationalVector = std::vector<Rational>;
using SparseVector = std::map<std::size_t, Rational>;

class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::map<std::pair<std::size_t, std::size_t>, Rational>& entries() const { return entries_; }

  void set(std::size_t r, std::size_t c, const Rational& v) {
    if (is_zero(v))
      entries_.erase({r, c});
    else
      entries_[{r, c}] = v;
  }
  Rational at(std::size_t r, std::size_t c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rational(0) : it->second;
  }

  void set_column(std::size_t c, const RationalVector& v) {
    for (std::size_t r = 0; r < v.size(); ++r) set(r, c, v[r]);
  }

  std::vector<SparseVector> sparse_rows() const {
    std::vector<SparseVector> out(rows_);
    for (const auto& [rc, v] : entries_) out[rc.first].emplace(rc.second, v);
    return out;
  }
  std::vector<SparseVector> sparse_columns() const {
    std::vector<SparseVector> out(cols_);
    for (const auto& [rc, v] : entries_) out[rc.second].emplace(rc.first, v);
    return out;
  }

  RationalVector column(std::size_t c) const {
    RationalVector v(rows_);
    for (const auto& [rc, x] : entries_)
      if (rc.second == c) v[rc.first] = x;
    return v;
  }

  RationalVector multiply(const RationalVector& x) const {
    RationalVector y(rows_);
    for (const auto& [rc, v] : entries_) y[rc.first] += v * x[rc.second];
    return y;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, Rational> entries_;
};

inline SparseVector to_sparse(const RationalVector& v) {
  SparseVector s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_zero(v[i])) s.emplace(i, v[i]);
  return s;
}

inline RationalVector to_dense(const SparseVector& s, std::size_t n) {
  RationalVector v(n);
  for (const auto& [i, x] : s) v[i] = x;
  return v;
}

// Sparse integer row with increasing columns. Rows are kept primitive (content 1,
// positive leading entry), which is what keeps coefficient growth in check.
struct IntRow {
  std::vector<std::size_t> cols;
  std::vector<Integer> vals;

  bool empty() const { return cols.empty(); }
  std::size_t lead() const { return cols.front(); }
  std::size_t size() const { return cols.size(); }

  Integer value_at(std::size_t c) const {
    auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return 0;
    return vals[static_cast<std::size_t>(it - cols.begin())];
  }

  void make_primitive() {
    if (cols.empty()) return;
    Integer g = 0;
    for (const auto& v : vals) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) break;
    }
    if (sgn(vals.front()) < 0) g = -g;
    if (g != 1)
      for (auto& v : vals) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }

  static IntRow from_sparse(const SparseVector& s) {
    IntRow r;
    Integer l = 1;
    for (const auto& [c, v] : s) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& [c, v] : s) {
      if (is_zero(v)) continue;
      r.cols.push_back(c);
      r.vals.push_back(v.get_num() * (l / v.get_den()));
    }
    r.make_primitive();
    return r;
  }

  SparseVector to_sparse() const {
    SparseVector s;
    for (std::size_t i = 0; i < cols.size(); ++i) s.emplace(cols[i], Rational(vals[i]));
    return s;
  }
};

// a*r - b*s, dropping cancelled entries.
inline IntRow combine_rows(const Integer& a, const IntRow& r, const Integer& b, const IntRow& s) {
  IntRow out;
  out.cols.reserve(r.size() + s.size());
  out.vals.reserve(r.size() + s.size());
  std::size_t i = 0, j = 0;
  Integer t;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r.cols[i] < s.cols[j])) {
      out.cols.push_back(r.cols[i]);
      out.vals.push_back(a * r.vals[i]);
      ++i;
    } else if (i == r.size() || s.cols[j] < r.cols[i]) {
      out.cols.push_back(s.cols[j]);
      out.vals.push_back(-b * s.vals[j]);
      ++j;
    } else {
      t = a * r.vals[i] - b * s.vals[j];
      if (sgn(t) != 0) {
        out.cols.push_back(r.cols[i]);
        out.vals.push_back(t);
      }
      ++i;
      ++j;
    }
  }
  return out;
}

// Eliminate column `c` of `r` using pivot row `p` (whose leading column is c).
inline void eliminate_with(IntRow& r, const IntRow& p, std::size_t c) {
  Integer rc = r.value_at(c);
  if (sgn(rc) == 0) return;
  const Integer& pc = p.vals.front();
  Integer g;
  mpz_gcd(g.get_mpz_t(), rc.get_mpz_t(), pc.get_mpz_t());
  r = combine_rows(pc / g, r, rc / g, p);
  r.make_primitive();
}

// Incremental fraction-free row echelon form over Q. Each stored row has a distinct
// leading column.
class EchelonBasis {
 public:
  EchelonBasis() = default;

  std::size_t rank() const { return pivots_.size(); }
  const std::map<std::size_t, IntRow>& pivots() const { return pivots_; }

  IntRow reduce(IntRow r) const {
    while (!r.empty()) {
      auto it = pivots_.find(r.lead());
      if (it == pivots_.end()) break;
      eliminate_with(r, it->second, r.lead());
    }
    return r;
  }

  // Full reduction: every pivot column cleared, not only the leading one.
  IntRow reduce_fully(IntRow r) const {
    r = reduce(std::move(r));
    for (const auto& [c, p] : pivots_)
      if (!r.empty() && c > r.lead()) eliminate_with(r, p, c);
    return r;
  }

  bool insert(const SparseVector& v) { return insert(IntRow::from_sparse(v)); }
  bool insert(IntRow r) {
    r = reduce(std::move(r));
    if (r.empty()) return false;
    std::size_t c = r.lead();
    pivots_.emplace(c, std::move(r));
    return true;
  }

  bool contains(const SparseVector& v) const { return reduce(IntRow::from_sparse(v)).empty(); }

  // Bring to reduced echelon form: each pivot column is zero in every other row.
  void back_substitute() {
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      const std::size_t c = it->first;
      for (auto jt = pivots_.begin(); jt->first < c; ++jt) eliminate_with(jt->second, it->second, c);
    }
  }

 private:
  std::map<std::size_t, IntRow> pivots_;
};

// Rows inserted sparsest first; this is the pivoting heuristic.
inline EchelonBasis echelon_of(std::vector<SparseVector> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SparseVector& a, const SparseVector& b) { return a.size() < b.size(); });
  EchelonBasis e;
  for (const auto& r : rows) e.insert(r);
  return e;
}

inline std::size_t rank(const ExactMatrix& m) { return echelon_of(m.sparse_rows()).rank(); }

// Basis of the right null space.
inline std::vector<RationalVector> kernel_basis(const ExactMatrix& m) {
  EchelonBasis e = echelon_of(m.sparse_rows());
  e.back_substitute();
  std::vector<bool> is_pivot(m.cols(), false);
  for (const auto& [c, r] : e.pivots()) is_pivot[c] = true;
  std::vector<RationalVector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(m.cols());
    v[f] = 1;
    for (const auto& [c, r] : e.pivots()) {
      Integer x = r.value_at(f);
      if (sgn(x) != 0) {
        v[c] = Rational(-x, r.vals.front());
        v[c].canonicalize();
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Coordinates x with sum x_i basis_i = target, or nullopt.
inline std::optional<RationalVector> solve_in_span(std::span<const RationalVector> basis,
                                                   const RationalVector& target) {
  const std::size_t k = basis.size();
  std::vector<SparseVector> rows(target.size());
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < target.size(); ++i)
      if (!is_zero(basis[j][i])) rows[i].emplace(j, basis[j][i]);
  for (std::size_t i = 0; i < target.size(); ++i)
    if (!is_zero(target[i])) rows[i].emplace(k, target[i]);
  EchelonBasis e = echelon_of(std::move(rows));
  if (e.pivots().count(k)) return std::nullopt;
  e.back_substitute();
  RationalVector x(k);
  for (const auto& [c, r] : e.pivots()) {
    x[c] = Rational(r.value_at(k), r.vals.front());
    x[c].canonicalize();
  }
  return x;
}

// Dense exact inverse by Gauss-Jordan; nullopt when singular.
inline std::optional<std::vector<RationalVector>> inverse(std::vector<RationalVector> a) {
  const std::size_t n = a.size();
  std::vector<RationalVector> inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(a[p][c])) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Rational s = 1 / a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] *= s;
      inv[c][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(a[r][c])) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero(a[c][j])) a[r][j] -= f * a[c][j];
        if (!is_zero(inv[c][j])) inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// Dense echelon form modulo the Mersenne prime 2^61 - 1. Used only to skip vectors
// that are certainly dependent before exact work; never a source of reported ranks.
class ModularEchelon {
 public:
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

  explicit ModularEchelon(std::size_t dim) : dim_(dim) {}

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t s = lo + hi;
    return s >= kPrime ? s - kPrime : s;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= kPrime ? s - kPrime : s;
  }
  static std::uint64_t power(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  static std::uint64_t inv(std::uint64_t a) { return power(a, kPrime - 2); }

  // nullopt when a denominator vanishes mod p.
  static std::optional<std::uint64_t> reduce(const Rational& x) {
    static_assert(sizeof(unsigned long) == 8);
    std::uint64_t n = mpz_fdiv_ui(x.get_num_mpz_t(), kPrime);
    std::uint64_t d = mpz_fdiv_ui(x.get_den_mpz_t(), kPrime);
    if (d == 0) return std::nullopt;
    return mul(n, inv(d));
  }

  std::size_t rank() const { return rows_.size(); }
  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (const auto& [c, r] : rows_) out.push_back(c);
    return out;
  }

  // True if v is independent of the rows so far (and then it is added).
  bool insert(const SparseVector& v) {
    std::vector<std::uint64_t> row(dim_, 0);
    for (const auto& [i, x] : v) {
      auto r = reduce(x);
      if (!r) return true;  // cannot judge; let the caller treat it exactly
      row[i] = *r;
    }
    for (const auto& [c, p] : rows_) {
      std::uint64_t f = row[c];
      if (f == 0) continue;
      std::uint64_t nf = kPrime - f;
      for (std::size_t j = c; j < dim_; ++j)
        if (p[j]) row[j] = add(row[j], mul(nf, p[j]));
    }
    std::size_t lead = 0;
    while (lead < dim_ && row[lead] == 0) ++lead;
    if (lead == dim_) return false;
    std::uint64_t s = inv(row[lead]);
    for (std::size_t j = lead; j < dim_; ++j) row[j] = mul(row[j], s);
    // keep rows reduced against each other so the loop above stays one pass
    for (auto& [c, p] : rows_) {
      std::uint64_t f = p[lead];
      if (f == 0) continue;
      std::uint64_t nf = kPrime - f;
      for (std::size_t j = lead; j < dim_; ++j)
        if (row[j]) p[j] = add(p[j], mul(nf, row[j]));
    }
    rows_.emplace(lead, std::move(row));
    return true;
  }

 private:
  std::size_t dim_;
  std::map<std::size_t, std::vector<std::uint64_t>> rows_;
};


// Sparse variant of ModularEchelon for wide matrices. Rows are stored by leading column
// with leading entry 1; reduction eliminates leading entries only.
class SparseModularEchelon {
 public:
  using Row = std::vector<std::pair<std::size_t, std::uint64_t>>;

  std::size_t rank() const { return rows_.size(); }
  const std::map<std::size_t, Row>& rows() const { return rows_; }

  // Leading column of v after reduction, or nullopt when v is dependent. A vanishing
  // denominator mod p makes the vector count as independent with lead SIZE_MAX.
  std::optional<std::size_t> insert(const SparseVector& v) {
    std::map<std::size_t, std::uint64_t> acc;
    for (const auto& [i, x] : v) {
      auto r = ModularEchelon::reduce(x);
      if (!r) return SIZE_MAX;
      if (*r) acc.emplace(i, *r);
    }
    while (!acc.empty()) {
      auto lead = acc.begin();
      auto it = rows_.find(lead->first);
      if (it == rows_.end()) break;
      const std::uint64_t f = ModularEchelon::kPrime - lead->second;
      for (const auto& [c, x] : it->second) {
        auto [a, ins] = acc.try_emplace(c, 0);
        a->second = ModularEchelon::add(a->second, ModularEchelon::mul(f, x));
        if (a->second == 0) acc.erase(a);
      }
    }
    if (acc.empty()) return std::nullopt;
    const std::size_t lead = acc.begin()->first;
    const std::uint64_t s = ModularEchelon::inv(acc.begin()->second);
    Row row;
    row.reserve(acc.size());
    for (const auto& [c, x] : acc) row.emplace_back(c, ModularEchelon::mul(x, s));
    rows_.emplace(lead, std::move(row));
    return lead;
  }

 private:
  std::map<std::size_t, Row> rows_;
};

}  // namespace sl2ws
