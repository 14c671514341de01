#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "fragile/error.hpp"

namespace fragile {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p". The result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-')) {
      throw ParseError("malformed rational '" + s + "'");
    }
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParseError("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

/// Always "p/q", also for integers.
inline std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline BigInt parse_bigint(std::string_view text) {
  BigInt z;
  if (text.empty() || z.set_str(std::string(text), 10) != 0) {
    throw ParseError("malformed integer '" + std::string(text) + "'");
  }
  return z;
}

inline BigInt pow_big(long base, unsigned long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return r;
}

/// Smallest c >= 0 with 2^c >= x, for x >= 1.
inline int ceil_log2(std::int64_t x) {
  require(x >= 1, "ceil_log2 needs x >= 1");
  int c = 0;
  while ((std::int64_t{1} << c) < x) ++c;
  return c;
}

}  // namespace fragile
