#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "diagram.hpp"
#include "matrix.hpp"
#include "weight.hpp"

namespace sl2ws {

// R_n from the recurrence R_n = (n-1)(2R_{n-1} + 3R_{n-2})/(n+1), R_2 = R_3 = 1.
inline Integer riordan_number(int n) {
  if (n < 2) throw Error(Errc::PreconditionViolation, "riordan_number needs n >= 2");
  Integer a = 1, b = 1;  // R_{m-2}, R_{m-1}
  if (n <= 3) return 1;
  for (int m = 4; m <= n; ++m) {
    Integer num = Integer(m - 1) * (2 * b + 3 * a);
    if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(m + 1)))
      throw Error(Errc::NonIntegerRecurrence, "R_" + std::to_string(m) + " is not an integer");
    Integer r = num / (m + 1);
    a = b;
    b = r;
  }
  return b;
}

// Parts sorted internally and by least element.
struct RiordanPartition {
  std::vector<std::vector<int>> parts;

  int n() const {
    int s = 0;
    for (const auto& p : parts) s += static_cast<int>(p.size());
    return s;
  }
  friend bool operator==(const RiordanPartition&, const RiordanPartition&) = default;
};

inline RiordanPartition normalized(std::vector<std::vector<int>> parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return {std::move(parts)};
}

// Block index of each element in order of first appearance (0-based).
inline std::vector<int> restricted_growth(const RiordanPartition& p) {
  std::vector<int> out(static_cast<std::size_t>(p.n()), -1);
  for (std::size_t b = 0; b < p.parts.size(); ++b)
    for (int x : p.parts[b]) out[static_cast<std::size_t>(x - 1)] = static_cast<int>(b);
  return out;
}

inline std::string to_string(const RiordanPartition& p) {
  std::string s = "{";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    s += i ? ",{" : "{";
    for (std::size_t j = 0; j < p.parts[i].size(); ++j) s += (j ? "," : "") + std::to_string(p.parts[i][j]);
    s += "}";
  }
  return s + "}";
}

// No a < b < c < d with a, c in one part and b, d in another.
inline bool is_noncrossing(const std::vector<std::vector<int>>& parts) {
  std::map<int, std::size_t> block;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (int x : parts[i]) block[x] = i;
  std::vector<std::pair<int, std::size_t>> seq(block.begin(), block.end());
  const std::size_t m = seq.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      if (seq[b].second == seq[a].second) continue;
      for (std::size_t c = b + 1; c < m; ++c) {
        if (seq[c].second != seq[a].second) continue;
        for (std::size_t d = c + 1; d < m; ++d)
          if (seq[d].second == seq[b].second) return false;
      }
    }
  return true;
}

// A noncrossing partition of exactly {1..n} with all parts of size >= 2.
inline bool is_riordan(const std::vector<std::vector<int>>& parts, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  int count = 0;
  for (const auto& p : parts) {
    if (p.size() < 2) return false;
    for (int x : p) {
      if (x < 1 || x > n || seen[static_cast<std::size_t>(x)]) return false;
      seen[static_cast<std::size_t>(x)] = true;
      ++count;
    }
  }
  return count == n && is_noncrossing(parts);
}

namespace detail {

// Riordan partitions of the interval [a, b]: choose the block of a, recurse on the gaps.
inline void riordan_interval(int a, int b, std::vector<std::vector<std::vector<int>>>& out) {
  out.clear();
  if (a > b) {
    out.push_back({});
    return;
  }
  if (a == b) return;
  const int rest = b - a;  // elements after a
  for (unsigned mask = 1; mask < (1u << rest); ++mask) {
    std::vector<int> block{a};
    for (int i = 0; i < rest; ++i)
      if (mask >> i & 1u) block.push_back(a + 1 + i);
    // gaps between consecutive block elements and after the last one
    std::vector<std::vector<std::vector<int>>> acc{{block}};
    for (std::size_t i = 0; i < block.size() && !acc.empty(); ++i) {
      const int lo = block[i] + 1, hi = i + 1 < block.size() ? block[i + 1] - 1 : b;
      std::vector<std::vector<std::vector<int>>> gap;
      riordan_interval(lo, hi, gap);
      std::vector<std::vector<std::vector<int>>> next;
      for (const auto& x : acc)
        for (const auto& g : gap) {
          auto y = x;
          y.insert(y.end(), g.begin(), g.end());
          next.push_back(std::move(y));
        }
      acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
  }
}

}  // namespace detail

// All Riordan partitions of {1..n}, ordered by restricted growth string.
inline std::vector<RiordanPartition> riordan_partitions(int n) {
  if (n < 2) throw Error(Errc::PreconditionViolation, "riordan_partitions needs n >= 2");
  std::vector<std::vector<std::vector<int>>> raw;
  detail::riordan_interval(1, n, raw);
  std::vector<std::pair<std::vector<int>, RiordanPartition>> keyed;
  for (auto& r : raw) {
    RiordanPartition p = normalized(std::move(r));
    keyed.emplace_back(restricted_growth(p), std::move(p));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<RiordanPartition> out;
  for (auto& [k, p] : keyed) out.push_back(std::move(p));
  return out;
}

struct RiordanTree {
  RiordanPartition partition;
  JacobiDiagram diagram;
};

inline RiordanTree riordan_tree(const RiordanPartition& p) {
  if (!is_riordan(p.parts, p.n())) throw Error(Errc::BadLabelSet, "not a Riordan partition: " + to_string(p));
  JacobiDiagram d;
  bool first = true;
  for (const auto& part : p.parts) {
    JacobiDiagram t = linear_tree(part);
    d = first ? t : disjoint_union(d, t);
    first = false;
  }
  return {p, d};
}

inline bool is_strut_only(const RiordanPartition& p) {
  return std::all_of(p.parts.begin(), p.parts.end(), [](const auto& x) { return x.size() == 2; });
}

inline int internal_edge_count(const RiordanPartition& p) {
  int e = 0;
  for (const auto& x : p.parts) e += std::max(0, static_cast<int>(x.size()) - 3);
  return e;
}

// ---- fast entries of tree weights ----

// Entry of W(linear_tree(labels)) at the SL2 indices x[label - 1], by a product of 3x3
// transfer matrices along the spine.
inline Rational linear_tree_entry(const std::vector<int>& labels, const std::vector<unsigned>& x) {
  static const auto b = [] {
    std::array<std::array<std::array<long, 3>, 3>, 3> t{};
    const Tensor<Rational> bt = bracket_tensor();
    for (const auto& [k, v] : bt.entries()) t[digit(k, 0)][digit(k, 1)][digit(k, 2)] = v.get_num().get_si();
    return t;
  }();
  auto at = [&](std::size_t i) { return x[static_cast<std::size_t>(labels[i] - 1)]; };
  const std::size_t n = labels.size();
  if (n == 2) return casimir().at({at(0), at(1)});
  if (n == 3) return Rational(b[at(0)][at(1)][at(2)]);
  // contracting with kappa lowers the internal index: h -> 2h, e -> f, f -> e
  std::array<long, 3> v{};
  for (unsigned y = 0; y < 3; ++y) v[y] = b[at(0)][at(1)][y];
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const std::array<long, 3> w{2 * v[kH], v[kF], v[kE]};
    std::array<long, 3> nv{};
    for (unsigned z = 0; z < 3; ++z)
      if (w[z])
        for (unsigned y = 0; y < 3; ++y) nv[y] += w[z] * b[z][at(j)][y];
    v = nv;
  }
  const std::array<long, 3> w{2 * v[kH], v[kF], v[kE]};
  long s = 0;
  for (unsigned z = 0; z < 3; ++z) s += w[z] * b[z][at(n - 2)][at(n - 1)];
  return Rational(s);
}

// Entry of W of a disjoint union of linear trees.
inline Rational forest_entry(const std::vector<std::vector<int>>& trees, const std::vector<unsigned>& x) {
  Rational r = 1;
  for (const auto& t : trees) {
    r *= linear_tree_entry(t, x);
    if (is_zero(r)) break;
  }
  return r;
}

// ---- the tree basis ----

class TreeBasis {
 public:
  explicit TreeBasis(int n) : n_(n) {
    if (n < 2) throw Error(Errc::PreconditionViolation, "tree_basis needs n >= 2");
    for (const auto& p : riordan_partitions(n)) trees_.push_back(riordan_tree(p));
    for (const auto& t : trees_) {
      weights_.push_back(weight_direct(t.diagram, n));
      sl2_.push_back(project_to_sl2(weights_.back().tensor));
    }
    choose_pivots();
  }

  int n() const { return n_; }
  std::size_t size() const { return trees_.size(); }
  const std::vector<RiordanTree>& trees() const { return trees_; }
  const std::vector<WeightValue>& weights() const { return weights_; }
  const std::vector<Tensor<Rational>>& sl2_tensors() const { return sl2_; }
  // SL2 index positions whose restriction of the basis is invertible.
  const std::vector<PackedIndex>& pivots() const { return pivots_; }
  std::vector<std::vector<unsigned>> pivot_indices() const {
    std::vector<std::vector<unsigned>> out;
    for (PackedIndex k : pivots_) out.push_back(unpack(k, static_cast<std::size_t>(n_)));
    return out;
  }

  // Inverse of the basis restricted to pivots(): coordinates = pivot_inverse * values.
  const std::vector<RationalVector>& pivot_inverse() const { return inv_; }

  // Coordinates from the values of an invariant tensor at pivots(); no span check.
  RationalVector from_pivot_values(const RationalVector& x) const {
    const std::size_t r = size();
    RationalVector g(r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (!is_zero(inv_[i][j]) && !is_zero(x[j])) g[i] += inv_[i][j] * x[j];
    return g;
  }

  // Unique coordinates of t (SL2 slots, or EXT slots of a weight) in the basis.
  RationalVector coordinates(const Tensor<Rational>& t) const {
    if (t.arity() != static_cast<std::size_t>(n_)) throw Error(Errc::SlotMismatch, "coordinates: wrong arity");
    const bool ext = std::all_of(t.slots().begin(), t.slots().end(), [](SlotBasis b) { return b == SlotBasis::EXT; });
    const bool sl2 = std::all_of(t.slots().begin(), t.slots().end(), [](SlotBasis b) { return b == SlotBasis::SL2; });
    if (!ext && !sl2) throw Error(Errc::SlotMismatch, "coordinates need SL2 or EXT slots");
    Tensor<Rational> s = sl2 ? t : project_to_sl2(t);
    if (ext && s.entries().size() != t.entries().size())
      throw Error(Errc::NotInInvariantSpan, "tensor has components along the unit");
    RationalVector x;
    for (PackedIndex k : pivots_) x.push_back(s.at(k));
    RationalVector g = from_pivot_values(x);
    Tensor<Rational> residual = s;
    for (std::size_t i = 0; i < size(); ++i)
      if (!is_zero(g[i])) residual -= sl2_[i] * g[i];
    if (!residual.is_zero()) throw Error(Errc::NotInInvariantSpan, "tensor is not in the span of the tree basis");
    return g;
  }
  RationalVector coordinates(const WeightValue& w) const { return coordinates(w.tensor); }

  std::size_t index_of(const RiordanPartition& p) const {
    for (std::size_t i = 0; i < trees_.size(); ++i)
      if (trees_[i].partition == p) return i;
    throw Error(Errc::BadLabelSet, "not a Riordan partition of this order: " + to_string(p));
  }

 private:
  void choose_pivots() {
    std::unordered_map<PackedIndex, std::size_t> pos;
    std::vector<PackedIndex> keys;
    for (const auto& t : sl2_)
      for (const auto& [k, v] : t.entries())
        if (pos.emplace(k, keys.size()).second) keys.push_back(k);
    std::vector<SparseVector> rows;
    for (const auto& t : sl2_) {
      SparseVector r;
      for (const auto& [k, v] : t.entries()) r.emplace(pos.at(k), v);
      rows.push_back(std::move(r));
    }
    std::vector<std::size_t> cols;
    ModularEchelon mod(keys.size());
    for (const auto& r : rows) mod.insert(r);
    if (mod.rank() == rows.size()) {
      cols = mod.pivot_columns();
    } else {
      EchelonBasis e;
      for (const auto& r : rows) e.insert(r);
      if (e.rank() != rows.size())
        throw Error(Errc::DependentBasis, "tree basis of order " + std::to_string(n_) + " has rank " +
                                              std::to_string(e.rank()) + " < " + std::to_string(rows.size()));
      for (const auto& [c, r] : e.pivots()) cols.push_back(c);
    }
    for (std::size_t c : cols) pivots_.push_back(keys[c]);
    std::sort(pivots_.begin(), pivots_.end());
    // a[j][i] = basis_i at pivot j; coordinates solve a * g = x
    std::vector<RationalVector> a(pivots_.size(), RationalVector(size()));
    for (std::size_t j = 0; j < pivots_.size(); ++j)
      for (std::size_t i = 0; i < size(); ++i) a[j][i] = sl2_[i].at(pivots_[j]);
    auto inv = inverse(a);
    if (!inv) throw Error(Errc::DependentBasis, "pivot minor is singular");
    inv_ = std::move(*inv);
  }

  int n_;
  std::vector<RiordanTree> trees_;
  std::vector<WeightValue> weights_;
  std::vector<Tensor<Rational>> sl2_;
  std::vector<PackedIndex> pivots_;
  std::vector<RationalVector> inv_;
};

// Built once per n; rank R_n is established on construction.
inline const TreeBasis& tree_basis(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<TreeBasis>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
  }
  auto b = std::make_unique<TreeBasis>(n);
  std::lock_guard lock(mu);
  auto [it, ins] = cache.emplace(n, std::move(b));
  return *it->second;
}

inline RationalVector coordinates(const Tensor<Rational>& t, int n) { return tree_basis(n).coordinates(t); }

}  // namespace sl2ws
