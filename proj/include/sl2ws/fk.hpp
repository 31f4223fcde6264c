#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "qfrac.hpp"
#include "riordan.hpp"
#include "tensor.hpp"
#include "weight.hpp"

namespace sl2ws {

// Scalars of the q-deformed calculus. V1 indices: 0 = v^1, 1 = v^-1. V2 indices:
// 0 = v^2, 1 = v^0, 2 = v^-2.
using QTensor = Tensor<QFrac>;

inline constexpr unsigned kV1Plus = 0, kV1Minus = 1;
inline constexpr unsigned kV2Top = 0, kV2Zero = 1, kV2Bottom = 2;

// A linear map stored as a tensor: input slots first, then output slots.
struct QMap {
  std::string name;
  std::vector<SlotBasis> in, out;
  QTensor table;
};

namespace detail {
inline QFrac qmono(int e, long c = 1) { return QFrac(LaurentPoly::monomial(e, c)); }

inline QMap make_map(std::string name, std::vector<SlotBasis> in, std::vector<SlotBasis> out,
                     const std::vector<std::pair<std::vector<unsigned>, QFrac>>& rows) {
  std::vector<SlotBasis> slots = in;
  slots.insert(slots.end(), out.begin(), out.end());
  QTensor t(slots);
  for (const auto& [idx, v] : rows) t.add(pack(idx), v);
  return {std::move(name), std::move(in), std::move(out), std::move(t)};
}
}  // namespace detail

inline const QMap& delta1() {
  using detail::qmono;
  static const QMap m = detail::make_map("delta1", {}, {SlotBasis::V1, SlotBasis::V1},
                                         {{{kV1Plus, kV1Minus}, 1}, {{kV1Minus, kV1Plus}, qmono(-1, -1)}});
  return m;
}

inline const QMap& pi2() {
  using detail::qmono;
  static const QMap m = detail::make_map("pi2", {SlotBasis::V1, SlotBasis::V1}, {SlotBasis::V2},
                                         {{{kV1Plus, kV1Plus, kV2Top}, 1},
                                          {{kV1Minus, kV1Minus, kV2Bottom}, 1},
                                          {{kV1Plus, kV1Minus, kV2Zero}, qmono(-1)},
                                          {{kV1Minus, kV1Plus, kV2Zero}, 1}});
  return m;
}

inline const QMap& p2() {
  using detail::qmono;
  const QFrac half(1, 1);  // 1/[2]
  static const QMap m = detail::make_map(
      "p2", {SlotBasis::V1, SlotBasis::V1}, {SlotBasis::V1, SlotBasis::V1},
      {{{kV1Plus, kV1Plus, kV1Plus, kV1Plus}, 1},
       {{kV1Minus, kV1Minus, kV1Minus, kV1Minus}, 1},
       {{kV1Plus, kV1Minus, kV1Plus, kV1Minus}, QFrac(LaurentPoly::q(-1), 1)},
       {{kV1Plus, kV1Minus, kV1Minus, kV1Plus}, half},
       {{kV1Minus, kV1Plus, kV1Plus, kV1Minus}, half},
       {{kV1Minus, kV1Plus, kV1Minus, kV1Plus}, QFrac(LaurentPoly::q(1), 1)}});
  return m;
}

inline const QMap& eps1() {
  using detail::qmono;
  static const QMap m = detail::make_map("eps1", {SlotBasis::V1, SlotBasis::V1}, {},
                                         {{{kV1Plus, kV1Minus}, qmono(1, -1)}, {{kV1Minus, kV1Plus}, 1}});
  return m;
}

// -1/(q^-1 + q^-3) = -q^2/[2]
inline const QMap& eps2() {
  using detail::qmono;
  static const QMap m = detail::make_map("eps2", {SlotBasis::V2, SlotBasis::V2}, {},
                                         {{{kV2Top, kV2Bottom}, qmono(2)},
                                          {{kV2Zero, kV2Zero}, QFrac(LaurentPoly::monomial(2, -1), 1)},
                                          {{kV2Bottom, kV2Top}, 1}});
  return m;
}

inline std::vector<QMap> builtin_maps() { return {delta1(), pi2(), p2(), eps1(), eps2()}; }

// Apply m to the slots [first, first + |m.in|) of t.
inline QTensor apply_map(const QTensor& t, std::size_t first, const QMap& m) {
  return apply_local(t, first, m.table, m.in.size());
}

inline PairingTable<QFrac> eps2_pairing() {
  PairingTable<QFrac> p{"eps2", SlotBasis::V2, SlotBasis::V2, std::vector<std::vector<QFrac>>(3, std::vector<QFrac>(3))};
  for (const auto& [k, v] : eps2().table.entries()) p.values[digit(k, 0)][digit(k, 1)] = v;
  return p;
}

// ---- U_q action and the pairing on V_n ----

enum class QGenerator { E, F, K, KInv };

struct WeightVectorTerm {
  LaurentPoly coeff;  // zero when the result vanishes
  int index = 0;      // weight of the resulting basis vector v_index
};

inline void check_weight(int n, int i) {
  if (n < 0 || i < -n || i > n || (n - i) % 2 != 0)
    throw Error(Errc::BadWeightIndex, "no basis vector v_" + std::to_string(i) + " in V_" + std::to_string(n));
}

// E v_i = [(n+i+2)/2] v_{i+2}, F v_i = [(n-i+2)/2] v_{i-2}, K^{+-1} v_i = q^{+-i} v_i.
inline WeightVectorTerm uq_action(QGenerator g, int n, int i) {
  check_weight(n, i);
  switch (g) {
    case QGenerator::E:
      if (i + 2 > n) return {LaurentPoly{}, i + 2};
      return {qint((n + i + 2) / 2), i + 2};
    case QGenerator::F:
      if (i - 2 < -n) return {LaurentPoly{}, i - 2};
      return {qint((n - i + 2) / 2), i - 2};
    case QGenerator::K: return {LaurentPoly::q(i), i};
    case QGenerator::KInv: return {LaurentPoly::q(-i), i};
  }
  return {};
}

// <v_{n-2k}, v_{n-2l}> = [n]! / ([k]! [n-k]!) delta_{kl}
inline LaurentPoly pairing_vn(int n, int k, int l) {
  if (n < 0 || k < 0 || l < 0 || k > n || l > n) throw Error(Errc::BadWeightIndex, "pairing_vn needs 0 <= k, l <= n");
  if (k != l) return LaurentPoly{};
  return divide_or_throw(qfact(n), qfact(k) * qfact(n - k));
}

// ---- FK arc diagrams ----

// Arcs on the 2n points of n boxes; box j (1-based) has points 2j-2 (left) and 2j-1 (right).
using ArcSystem = std::vector<std::pair<int, int>>;

inline int left_point(int box) { return 2 * box - 2; }
inline int right_point(int box) { return 2 * box - 1; }

// Boundary arcs of a neighbourhood of the Riordan tree: consecutive boxes of a part are
// joined right-to-left, and one outer arc joins the first and last box.
inline ArcSystem arcs_of(const RiordanPartition& p) {
  ArcSystem out;
  for (const auto& part : p.parts) {
    for (std::size_t i = 0; i + 1 < part.size(); ++i) out.emplace_back(right_point(part[i]), left_point(part[i + 1]));
    out.emplace_back(left_point(part.front()), right_point(part.back()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Noncrossing perfect matchings of the 2n points with no arc inside a single box.
inline std::vector<ArcSystem> fk_arc_systems(int n) {
  std::vector<ArcSystem> out;
  ArcSystem cur;
  std::vector<int> open;
  std::function<void(int)> rec = [&](int pt) {
    if (pt == 2 * n) {
      if (open.empty()) {
        ArcSystem s = cur;
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
      }
      return;
    }
    if (static_cast<int>(open.size()) > 2 * n - pt) return;
    // open a new arc
    open.push_back(pt);
    rec(pt + 1);
    open.pop_back();
    // or close the innermost open one
    if (!open.empty() && !(pt % 2 == 1 && open.back() == pt - 1)) {
      const int a = open.back();
      open.pop_back();
      cur.emplace_back(a, pt);
      rec(pt + 1);
      cur.pop_back();
      open.push_back(a);
    }
  };
  rec(0);
  return out;
}

// V1 tensor of the arcs (a delta1 on each arc, left end first) pushed through pi2 on
// every box; computed by summing over the two terms of each delta1.
inline QTensor fk_tensor(int n, const ArcSystem& arcs) {
  QTensor out(std::vector<SlotBasis>(static_cast<std::size_t>(n), SlotBasis::V2));
  const std::size_t m = arcs.size();
  std::vector<unsigned> val(static_cast<std::size_t>(2 * n));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    int qexp = 0;
    int sign = 1;
    for (std::size_t a = 0; a < m; ++a) {
      const bool swap = mask >> a & 1u;
      val[static_cast<std::size_t>(arcs[a].first)] = swap ? kV1Minus : kV1Plus;
      val[static_cast<std::size_t>(arcs[a].second)] = swap ? kV1Plus : kV1Minus;
      if (swap) {
        --qexp;
        sign = -sign;
      }
    }
    std::vector<unsigned> idx(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
      const unsigned l = val[static_cast<std::size_t>(2 * b)], r = val[static_cast<std::size_t>(2 * b + 1)];
      if (l == kV1Plus && r == kV1Plus) {
        idx[static_cast<std::size_t>(b)] = kV2Top;
      } else if (l == kV1Minus && r == kV1Minus) {
        idx[static_cast<std::size_t>(b)] = kV2Bottom;
      } else {
        idx[static_cast<std::size_t>(b)] = kV2Zero;
        if (l == kV1Plus) --qexp;
      }
    }
    out.add(pack(idx), QFrac(LaurentPoly::monomial(qexp, sign)));
  }
  return out;
}

// Order in which to insert the arcs as (delta1)^k_l maps: the reverse of peeling off arcs
// whose endpoints are adjacent, innermost first. Returns the insertion positions l.
inline std::vector<std::size_t> insertion_sequence(const ArcSystem& arcs, bool leftmost_first) {
  std::vector<int> pts;
  std::vector<int> partner(arcs.size() * 2);
  for (const auto& [a, b] : arcs) {
    partner[static_cast<std::size_t>(a)] = b;
    partner[static_cast<std::size_t>(b)] = a;
  }
  for (std::size_t i = 0; i < partner.size(); ++i) pts.push_back(static_cast<int>(i));
  std::vector<std::size_t> peel;
  while (!pts.empty()) {
    std::size_t found = SIZE_MAX;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const std::size_t j = leftmost_first ? i : pts.size() - 2 - i;
      if (partner[static_cast<std::size_t>(pts[j])] == pts[j + 1]) {
        found = j;
        break;
      }
    }
    if (found == SIZE_MAX) throw Error(Errc::SchemaError, "arc system is not noncrossing");
    peel.push_back(found);
    pts.erase(pts.begin() + static_cast<long>(found), pts.begin() + static_cast<long>(found) + 2);
  }
  std::reverse(peel.begin(), peel.end());
  return peel;
}

// The same tensor built as pi2^{(x)n} o (delta1)^{2m-2}_{l_m} o ... o delta1 . 1.
inline QTensor fk_tensor_by_insertion(int n, const ArcSystem& arcs, bool leftmost_first = true) {
  QTensor t = QTensor::scalar(1);
  for (std::size_t l : insertion_sequence(arcs, leftmost_first)) t = apply_map(t, l, delta1());
  for (int b = 0; b < n; ++b) t = apply_map(t, static_cast<std::size_t>(b), pi2());
  return t;
}

// Dual canonical basis element of a Riordan tree.
inline QTensor f0(const RiordanPartition& p) { return fk_tensor(p.n(), arcs_of(p)); }

inline QTensor c_tilde() { return f0(normalized({{1, 2}})); }
inline QTensor b_tilde() { return f0(normalized({{1, 2, 3}})); }

// ---- the Jones-Wenzl modified basis ----

// Cutting the internal edges in S of every part (S indexed over all parts in order):
// edge j of the part a_1..a_k separates a_1..a_{j+1} from a_{j+2}..a_k.
inline std::vector<std::pair<RiordanPartition, unsigned>> jw_expansion(const RiordanPartition& p) {
  std::vector<std::pair<RiordanPartition, unsigned>> out;
  std::vector<std::pair<std::size_t, int>> edges;  // (part, j)
  for (std::size_t i = 0; i < p.parts.size(); ++i)
    for (int j = 1; j + 3 <= static_cast<int>(p.parts[i].size()); ++j) edges.emplace_back(i, j);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << edges.size()); ++s) {
    std::vector<std::vector<int>> parts;
    std::size_t e = 0;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
      const auto& part = p.parts[i];
      std::vector<int> cur;
      for (std::size_t x = 0; x < part.size(); ++x) {
        cur.push_back(part[x]);
        // edge j sits after leaf index j (0-based a_{j+1})
        if (e < edges.size() && edges[e].first == i && static_cast<std::size_t>(edges[e].second) == x) {
          if (s >> e & 1u) {
            parts.push_back(cur);
            cur.clear();
          }
          ++e;
        }
      }
      parts.push_back(cur);
    }
    // cutting both edges next to a leaf leaves an arc inside one box, which pi2 kills
    if (std::any_of(parts.begin(), parts.end(), [](const auto& x) { return x.size() < 2; })) continue;
    out.emplace_back(normalized(parts), static_cast<unsigned>(__builtin_popcountll(s)));
  }
  return out;
}

// f(T): a p2 inserted across the two boundary arcs at every internal edge. With
// p2 = id + (1/[2]) delta1 o eps1, each insertion either keeps the arcs or reconnects
// them, which cuts the part at that edge.
inline QTensor f_jw(const RiordanPartition& p) {
  QTensor out(std::vector<SlotBasis>(static_cast<std::size_t>(p.n()), SlotBasis::V2));
  for (const auto& [q, cuts] : jw_expansion(p)) out += f0(q) * QFrac(1, cuts);
  return out;
}

// f(T) assembled like W(T): a c~ per strut, a b~ per trivalent vertex with its boxes in
// cyclic order, and eps2 on every internal edge.
inline QTensor f_jw_contracted(const RiordanPartition& p) {
  const int n = p.n();
  const QTensor b = b_tilde();
  const PairingTable<QFrac> e2 = eps2_pairing();
  QTensor all = QTensor::scalar(1);
  std::vector<int> labels;  // label of each slot of `all`
  for (const auto& part : p.parts) {
    QTensor t;
    std::vector<int> tl;
    if (part.size() == 2) {
      t = c_tilde();
      tl = part;
    } else {
      // t_1 = (a_1, a_2, x); t_j = (y, a_{j+1}, x') contracted on (x, y)
      t = b;
      tl = {part[0], part[1], 0};
      for (std::size_t j = 2; j + 1 < part.size(); ++j) {
        t = tensor_product(t, b);
        const std::size_t x = tl.size() - 1;
        tl.push_back(0);
        tl.push_back(part[j]);
        tl.push_back(0);
        t = contract(t, x, x + 1, e2);
        tl.erase(tl.begin() + static_cast<long>(x), tl.begin() + static_cast<long>(x) + 2);
      }
      tl.back() = part.back();
    }
    all = tensor_product(all, t);
    labels.insert(labels.end(), tl.begin(), tl.end());
  }
  std::vector<std::size_t> perm;
  for (int l : labels) perm.push_back(static_cast<std::size_t>(l - 1));
  QTensor out = permute_slots(all, perm);
  if (static_cast<int>(out.arity()) != n) throw Error(Errc::SlotMismatch, "f_jw_contracted: slot count");
  return out;
}

// ---- specialization at q = 1 ----

// q -> 1, v^0 -> h/2, v^2 -> -e, v^-2 -> f.
inline Tensor<Rational> rho(const QTensor& t) {
  for (SlotBasis s : t.slots())
    if (s != SlotBasis::V2) throw Error(Errc::SlotMismatch, "rho needs V2 slots");
  static constexpr unsigned target[3] = {kE, kH, kF};
  const Rational factor[3] = {Rational(-1), Rational(1, 2), Rational(1)};
  Tensor<Rational> out(std::vector<SlotBasis>(t.arity(), SlotBasis::SL2));
  for (const auto& [k, v] : t.entries()) {
    Rational c = v.eval_at_one();
    PackedIndex nk = 0;
    for (std::size_t s = 0; s < t.arity(); ++s) {
      const unsigned d = digit(k, s);
      c *= factor[d];
      nk = with_digit(nk, s, target[d]);
    }
    out.add(nk, c);
  }
  return out;
}

// (-1)^deg / 2^tri for the tree of p.
inline Rational rho_scalar(const RiordanPartition& p) {
  const JacobiDiagram& d = riordan_tree(p).diagram;
  Rational s(degree(d) % 2 == 0 ? 1 : -1);
  mpz_mul_2exp(s.get_den_mpz_t(), s.get_den_mpz_t(), static_cast<mp_bitcnt_t>(d.trivalent_count()));
  s.canonicalize();
  return s;
}

inline bool check_prop_rho(const RiordanPartition& p) {
  const int n = p.n();
  const Tensor<Rational> w = project_to_sl2(weight_direct(riordan_tree(p).diagram, n).tensor);
  return rho(f_jw(p)) == w * rho_scalar(p);
}

// eps2 o (pi2 (x) pi2) = eps1 o (1 (x) eps1 (x) 1) o (p2 (x) p2) on all 16 basis inputs.
inline bool eps2_factorization_check() {
  for (unsigned x = 0; x < 16; ++x) {
    QTensor v(std::vector<SlotBasis>(4, SlotBasis::V1));
    v.add(pack({x >> 3 & 1u, x >> 2 & 1u, x >> 1 & 1u, x & 1u}), 1);
    QTensor lhs = apply_map(apply_map(apply_map(v, 0, pi2()), 1, pi2()), 0, eps2());
    QTensor rhs = apply_map(apply_map(v, 0, p2()), 2, p2());
    rhs = apply_map(apply_map(rhs, 1, eps1()), 0, eps1());
    if (!(lhs == rhs)) return false;
  }
  return true;
}

// ---- transition between the two bases ----

inline Rational eval_at(const LaurentPoly& p, const Rational& q) {
  Rational r = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational x = 1;
    const Rational b = e >= 0 ? q : 1 / q;
    for (int i = 0; i < std::abs(e); ++i) x *= b;
    r += c * x;
  }
  return r;
}

inline Rational eval_at(const QFrac& v, const Rational& q) {
  Rational r = eval_at(v.num(), q);
  const Rational two = q + 1 / q;
  for (unsigned i = 0; i < v.two_power(); ++i) r /= two;
  return r;
}

// Basis order with fewer internal edges first, ties by partition order.
inline std::vector<RiordanPartition> transition_order(int n) {
  std::vector<RiordanPartition> ps = riordan_partitions(n);
  std::stable_sort(ps.begin(), ps.end(), [](const RiordanPartition& a, const RiordanPartition& b) {
    return internal_edge_count(a) < internal_edge_count(b);
  });
  return ps;
}

// Rank of the tensors specialised at a rational q; a lower bound for the rank over Q(q).
inline std::size_t rank_at(const std::vector<QTensor>& ts, const Rational& q) {
  std::map<PackedIndex, std::size_t> pos;
  std::vector<SparseVector> rows;
  for (const auto& t : ts) {
    SparseVector r;
    for (const auto& [k, v] : t.entries()) {
      Rational x = eval_at(v, q);
      if (!is_zero(x)) r.emplace(pos.emplace(k, pos.size()).first->second, x);
    }
    rows.push_back(std::move(r));
  }
  return echelon_of(std::move(rows)).rank();
}

struct TransitionMatrix {
  int n = 0;
  std::vector<RiordanPartition> order;
  std::vector<std::vector<QFrac>> a;  // f(order[i]) = sum_j a[i][j] f0(order[j])
};

// The coefficients come from the p2 expansion; they are confirmed by comparing with the
// eps2-contracted construction exactly, and they are unique because the f0 are
// independent (full rank already at q = 2).
inline TransitionMatrix transition_matrix(int n) {
  if (n < 2 || n > 7) throw Error(Errc::PreconditionViolation, "transition_matrix needs 2 <= n <= 7");
  TransitionMatrix tm;
  tm.n = n;
  tm.order = transition_order(n);
  const std::size_t r = tm.order.size();
  std::vector<QTensor> basis;
  for (const auto& p : tm.order) basis.push_back(f0(p));
  if (rank_at(basis, Rational(2)) != r) throw Error(Errc::DependentBasis, "dual canonical basis is dependent");
  tm.a.assign(r, std::vector<QFrac>(r));
  for (std::size_t i = 0; i < r; ++i) {
    QTensor combo(std::vector<SlotBasis>(static_cast<std::size_t>(n), SlotBasis::V2));
    for (const auto& [q, cuts] : jw_expansion(tm.order[i])) {
      auto it = std::find(tm.order.begin(), tm.order.end(), q);
      if (it == tm.order.end()) throw Error(Errc::BadLabelSet, "cut tree is not Riordan: " + to_string(q));
      const std::size_t j = static_cast<std::size_t>(it - tm.order.begin());
      tm.a[i][j] += QFrac(1, cuts);
    }
    for (std::size_t j = 0; j < r; ++j)
      if (!tm.a[i][j].is_zero()) combo += basis[j] * tm.a[i][j];
    if (!(combo == f_jw_contracted(tm.order[i])))
      throw Error(Errc::NoExactSolution, "p2 expansion disagrees with the eps2 construction for " + to_string(tm.order[i]));
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const bool ok = i == j ? tm.a[i][j] == QFrac(1) : (j < i || tm.a[i][j].is_zero());
      if (!ok) throw Error(Errc::NotUnitriangular, "transition matrix is not unitriangular at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return tm;
}

}  // namespace sl2ws
