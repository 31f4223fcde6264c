#pragma once

#include <string>

#include "laurent.hpp"

namespace sl2ws {

// num / [2]^k with [2] = q + q^{-1}. Every scalar in the FK calculus has this shape:
// the only denominators are [2] (from p2) and q^{-1} + q^{-3} = q^{-2}[2] (from eps2).
// Normal form: k is minimal, i.e. [2] does not divide num when k > 0.
class QFrac {
 public:
  QFrac() = default;
  QFrac(LaurentPoly num, unsigned two_power = 0) : num_(std::move(num)), k_(two_power) {  // NOLINT
    normalize();
  }
  QFrac(long c) : QFrac(LaurentPoly(c)) {}  // NOLINT

  static const LaurentPoly& two() {
    static const LaurentPoly t = qint(2);
    return t;
  }

  const LaurentPoly& num() const { return num_; }
  unsigned two_power() const { return k_; }
  bool is_zero() const { return num_.is_zero(); }

  friend QFrac operator+(const QFrac& a, const QFrac& b) {
    if (a.k_ == b.k_) return QFrac(a.num_ + b.num_, a.k_);
    if (a.k_ < b.k_) return QFrac(a.num_ * pow_two(b.k_ - a.k_) + b.num_, b.k_);
    return QFrac(a.num_ + b.num_ * pow_two(a.k_ - b.k_), a.k_);
  }
  friend QFrac operator-(const QFrac& a) {
    QFrac r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend QFrac operator-(const QFrac& a, const QFrac& b) { return a + (-b); }
  friend QFrac operator*(const QFrac& a, const QFrac& b) { return QFrac(a.num_ * b.num_, a.k_ + b.k_); }
  QFrac& operator+=(const QFrac& o) { return *this = *this + o; }
  QFrac& operator-=(const QFrac& o) { return *this = *this - o; }
  QFrac& operator*=(const QFrac& o) { return *this = *this * o; }

  // Both sides are in normal form, so equality is structural.
  friend bool operator==(const QFrac& a, const QFrac& b) { return a.k_ == b.k_ && a.num_ == b.num_; }

  QFrac divided_by_two() const { return QFrac(num_, k_ + 1); }

  // q = 1; [2] evaluates to 2 so no pole can occur.
  Rational eval_at_one() const {
    Rational r = num_.eval_at_one();
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), k_);
    r.canonicalize();
    return r;
  }

  // Value as a Laurent polynomial when the denominator has cleared.
  std::optional<LaurentPoly> as_laurent() const {
    if (k_ == 0) return num_;
    return std::nullopt;
  }

  std::string str() const {
    if (k_ == 0) return num_.str();
    std::string d = "[2]";
    if (k_ > 1) d += "^" + std::to_string(k_);
    return "(" + num_.str() + ")/" + d;
  }

 private:
  static LaurentPoly pow_two(unsigned k) {
    LaurentPoly r(1);
    for (unsigned i = 0; i < k; ++i) r *= two();
    return r;
  }

  void normalize() {
    if (num_.is_zero()) {
      k_ = 0;
      return;
    }
    while (k_ > 0) {
      auto d = divide_exact(num_, two());
      if (!d) break;
      num_ = std::move(*d);
      --k_;
    }
  }

  LaurentPoly num_;
  unsigned k_ = 0;
};

inline bool is_zero(const QFrac& x) { return x.is_zero(); }
inline std::string to_string(const QFrac& x) { return x.str(); }

}  // namespace sl2ws
