#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "riordan.hpp"
#include "tensor.hpp"

namespace sl2ws {

// Cycle lengths (or partition parts) in weakly decreasing order.
using CycleType = std::vector<int>;
using YoungShape = std::vector<int>;
using CharacterVector = std::map<CycleType, Rational>;

inline std::vector<std::vector<int>> integer_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left, int max) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(left, max); p >= 1; --p) {
      cur.push_back(p);
      self(self, left - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

inline std::string shape_string(const std::vector<int>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

inline void check_partition(const std::vector<int>& p, int n, const char* what) {
  int s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1 || (i && p[i] > p[i - 1]))
      throw Error(Errc::PreconditionViolation, std::string(what) + " must be a decreasing list of positive parts");
    s += p[i];
  }
  if (s != n) throw Error(Errc::PreconditionViolation, std::string(what) + " does not sum to " + std::to_string(n));
}

inline int mobius(int a) {
  if (a < 1) throw Error(Errc::PreconditionViolation, "mobius needs a >= 1");
  int mu = 1;
  for (int p = 2; p * p <= a; ++p)
    if (a % p == 0) {
      a /= p;
      if (a % p == 0) return 0;
      mu = -mu;
    }
  return a > 1 ? -mu : mu;
}

inline Integer int_factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Character of S_n on C_n: (n-2)! at the identity, (b-1)! a^(b-1) mu(a) on
// 1 a^b, -(b-1)! a^(b-1) mu(a) on a^b, zero elsewhere.
inline Rational chi_C(int n, const CycleType& ct) {
  if (n < 2) throw Error(Errc::PreconditionViolation, "chi_C needs n >= 2");
  check_partition(ct, n, "cycle type");
  if (ct.front() == 1) return Rational(int_factorial(n - 2));
  const int a = ct.front();
  const int ones = static_cast<int>(std::count(ct.begin(), ct.end(), 1));
  const int b = static_cast<int>(std::count(ct.begin(), ct.end(), a));
  if (ones + b != static_cast<int>(ct.size()) || ones > 1) return 0;
  Integer v = int_factorial(b - 1);
  for (int i = 0; i < b - 1; ++i) v *= a;
  v *= mobius(a);
  return Rational(ones == 1 ? v : Integer(-v));
}

// Murnaghan-Nakayama on beta-sets, memoised on (shape, cycle type).
inline long chi_irr(const YoungShape& lambda, const CycleType& ct) {
  int n = std::accumulate(lambda.begin(), lambda.end(), 0);
  check_partition(lambda, n, "shape");
  check_partition(ct, n, "cycle type");
  static std::mutex mu;
  static std::map<std::pair<YoungShape, CycleType>, long> memo;
  auto rec = [&](auto&& self, const YoungShape& lam, const CycleType& c) -> long {
    if (c.empty()) return 1;
    {
      std::lock_guard lock(mu);
      auto it = memo.find({lam, c});
      if (it != memo.end()) return it->second;
    }
    const int r = c.front();
    const CycleType rest(c.begin() + 1, c.end());
    const int k = static_cast<int>(lam.size());
    std::vector<int> beta(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) beta[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i)] + (k - 1 - i);
    long total = 0;
    for (int i = 0; i < k; ++i) {
      const int b = beta[static_cast<std::size_t>(i)] - r;
      if (b < 0 || std::find(beta.begin(), beta.end(), b) != beta.end()) continue;
      // beads strictly between b and beta_i give the leg length
      int between = 0;
      for (int x : beta)
        if (x > b && x < beta[static_cast<std::size_t>(i)]) ++between;
      std::vector<int> nb = beta;
      nb[static_cast<std::size_t>(i)] = b;
      std::sort(nb.rbegin(), nb.rend());
      YoungShape nl;
      for (int j = 0; j < k; ++j) {
        const int part = nb[static_cast<std::size_t>(j)] - (k - 1 - j);
        if (part > 0) nl.push_back(part);
      }
      const long v = self(self, nl, rest);
      total += between % 2 == 0 ? v : -v;
    }
    std::lock_guard lock(mu);
    memo[{lam, c}] = total;
    return total;
  };
  return rec(rec, lambda, ct);
}

// Size of the conjugacy class with this cycle type.
inline Integer class_size(const CycleType& ct) {
  const int n = std::accumulate(ct.begin(), ct.end(), 0);
  Integer denom = 1;
  std::map<int, int> mult;
  for (int c : ct) ++mult[c];
  for (const auto& [len, m] : mult) {
    denom *= int_factorial(m);
    for (int i = 0; i < m; ++i) denom *= len;
  }
  return int_factorial(n) / denom;
}

// Shapes with at most three rows whose consecutive row differences are even.
inline std::vector<YoungShape> invariant_shapes(int n) {
  std::vector<YoungShape> out;
  for (const auto& p : integer_partitions(n)) {
    if (p.size() > 3) continue;
    int l[3] = {0, 0, 0};
    for (std::size_t i = 0; i < p.size(); ++i) l[i] = p[i];
    if ((l[0] - l[1]) % 2 == 0 && (l[1] - l[2]) % 2 == 0) out.push_back(p);
  }
  return out;
}

inline Rational chi_inv(int n, const CycleType& ct) {
  if (n < 2) throw Error(Errc::PreconditionViolation, "chi_inv needs n >= 2");
  long v = 0;
  for (const auto& lam : invariant_shapes(n)) v += chi_irr(lam, ct);
  return v;
}

// A permutation with the given cycle type: cycles on consecutive slots.
inline std::vector<std::size_t> permutation_of(const CycleType& ct) {
  std::vector<std::size_t> perm;
  std::size_t start = 0;
  for (int c : ct) {
    for (int i = 0; i < c; ++i) perm.push_back(start + static_cast<std::size_t>((i + 1) % c));
    start += static_cast<std::size_t>(c);
  }
  return perm;
}

// Trace of the slot permutation on Inv, computed in tree-basis coordinates.
inline Rational chi_inv_trace(int n, const CycleType& ct) {
  check_partition(ct, n, "cycle type");
  const TreeBasis& tb = tree_basis(n);
  const auto perm = permutation_of(ct);
  Rational tr = 0;
  for (std::size_t i = 0; i < tb.size(); ++i) tr += tb.coordinates(permute_slots(tb.weights()[i].tensor, perm))[i];
  return tr;
}

inline CharacterVector character_of(int n, const std::function<Rational(const CycleType&)>& f) {
  CharacterVector out;
  for (const auto& ct : integer_partitions(n)) out[ct] = f(ct);
  return out;
}

inline CycleType identity_type(int n) { return CycleType(static_cast<std::size_t>(n), 1); }

inline void check_character_n(int n) {
  if (n < 2 || n > 8) throw Error(Errc::PreconditionViolation, "kernel/image characters need 2 <= n <= 8");
}

// chi_C - chi_Inv, plus the trivial character for even n >= 4 where c^n is not in the image.
inline CharacterVector chi_kernel(int n) {
  check_character_n(n);
  const int u = n % 2 == 0 && n >= 4 ? 1 : 0;
  return character_of(n, [&](const CycleType& ct) -> Rational { return chi_C(n, ct) - chi_inv(n, ct) + u; });
}

inline CharacterVector chi_image(int n) {
  check_character_n(n);
  const int u = n % 2 == 0 && n >= 4 ? 1 : 0;
  return character_of(n, [&](const CycleType& ct) -> Rational { return chi_inv(n, ct) - u; });
}

// Multiplicity of every irreducible in a character; zero multiplicities are omitted.
inline std::map<YoungShape, Integer> decompose(const CharacterVector& chi, int n) {
  const Integer nf = int_factorial(n);
  std::map<YoungShape, Integer> out;
  for (const auto& lam : integer_partitions(n)) {
    Rational s = 0;
    for (const auto& [ct, v] : chi) s += Rational(class_size(ct)) * v * chi_irr(lam, ct);
    s /= Rational(nf);
    if (s.get_den() != 1)
      throw Error(Errc::NegativeMultiplicity, "multiplicity of " + shape_string(lam) + " is not an integer: " + s.get_str());
    if (s < 0) throw Error(Errc::NegativeMultiplicity, "multiplicity of " + shape_string(lam) + " is " + s.get_str());
    if (s != 0) out[lam] = s.get_num();
  }
  return out;
}

inline Integer shape_dimension(const YoungShape& lam) {
  return Integer(chi_irr(lam, identity_type(std::accumulate(lam.begin(), lam.end(), 0))));
}

}  // namespace sl2ws
