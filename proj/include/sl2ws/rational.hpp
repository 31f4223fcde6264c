#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace sl2ws {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r{Integer(num), Integer(den)};
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

// "p/q", or just "p" when q = 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(std::string_view s) {
  Rational r;
  if (s.empty() || r.set_str(std::string(s), 10) != 0 || sgn(r.get_den()) == 0) {
    throw Error(Errc::SchemaError, "not a rational: '" + std::string(s) + "'");
  }
  r.canonicalize();
  return r;
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace sl2ws
