#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "rational.hpp"

namespace sl2ws {

// Laurent polynomial in q with rational coefficients. Zero coefficients are never stored.
class LaurentPoly {
 public:
  using Terms = std::map<int, Rational>;

  LaurentPoly() = default;
  LaurentPoly(const Rational& c) { add_term(0, c); }  // NOLINT(google-explicit-constructor)
  LaurentPoly(long c) : LaurentPoly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static LaurentPoly monomial(int exponent, const Rational& c = 1) {
    LaurentPoly p;
    p.add_term(exponent, c);
    return p;
  }
  static LaurentPoly q(int exponent = 1) { return monomial(exponent); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int min_exponent() const { return terms_.begin()->first; }
  int max_exponent() const { return terms_.rbegin()->first; }

  Rational coeff(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(int exponent, const Rational& c) {
    if (sl2ws::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second += c;
      if (sl2ws::is_zero(it->second)) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r;
    for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  // Multiply by q^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
    return r;
  }

  // q -> q^{-1}
  LaurentPoly bar() const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
    return r;
  }

  Rational eval_at_one() const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rational mag = abs(c);
      os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      bool unit = mag == 1;
      if (!unit || e == 0) os << to_string(mag);
      if (e != 0) {
        if (!unit) os << "*";
        os << "q";
        if (e != 1) os << "^" << e;
      }
      first = false;
    }
    return os.str();
  }

 private:
  Terms terms_;
};

inline Rational eval_at_one(const LaurentPoly& p) { return p.eval_at_one(); }

// Exact division a / b in Q[q, q^-1]; nullopt when b does not divide a.
inline std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return LaurentPoly{};
  // Units are monomials, so divisibility reduces to polynomial division after shifting
  // both lowest terms to degree 0.
  const int sb = b.min_exponent();
  const int db = b.max_exponent() - sb;
  const Rational lead = b.coeff(b.max_exponent());
  LaurentPoly rem = a.shifted(-a.min_exponent());
  LaurentPoly quot;
  while (!rem.is_zero() && rem.max_exponent() >= db) {
    const int e = rem.max_exponent() - db;
    const Rational c = rem.coeff(rem.max_exponent()) / lead;
    quot.add_term(e, c);
    for (const auto& [eb, cb] : b.terms()) rem.add_term(e + eb - sb, -c * cb);
  }
  if (!rem.is_zero()) return std::nullopt;
  return quot.shifted(a.min_exponent() - sb);
}

inline LaurentPoly divide_or_throw(const LaurentPoly& a, const LaurentPoly& b) {
  auto r = divide_exact(a, b);
  if (!r) throw Error(Errc::InexactDivision, "(" + a.str() + ") / (" + b.str() + ")");
  return *r;
}

// Quantum integer [m] = q^{m-1} + q^{m-3} + ... + q^{1-m}.
inline LaurentPoly qint(long m) {
  if (m < 0) return -qint(-m);
  LaurentPoly r;
  for (long e = m - 1; e >= 1 - m; e -= 2) r.add_term(static_cast<int>(e), 1);
  return r;
}

inline LaurentPoly qfact(long k) {
  LaurentPoly r(1);
  for (long i = 1; i <= k; ++i) r *= qint(i);
  return r;
}

}  // namespace sl2ws
