#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdyn {

/// Arbitrary-precision integer. Job weights are positive BigInts.
using BigInt = boost::multiprecision::mpz_int;

/// Exact rational, always kept in lowest terms. All allocation and
/// fair-share values in the library are Fracs; there is no floating
/// point on any correctness path.
using Frac = boost::multiprecision::mpq_rational;

inline BigInt frac_num(const Frac& q) { return boost::multiprecision::numerator(q); }
inline BigInt frac_den(const Frac& q) { return boost::multiprecision::denominator(q); }

/// Exact sum; empty input sums to 0/1.
Frac frac_sum(const std::vector<Frac>& values);

/// True when x is a positive power of two.
bool is_pow2(const BigInt& x);

/// Index of the lowest set bit; requires x >= 1.
std::int64_t lowest_set_bit(const BigInt& x);

/// num/den in lowest terms. Equivalent to Frac(num, den) but reduces
/// by shifts alone when either side is a power of two, which covers
/// the weight patterns on all hot paths.
Frac make_frac(BigInt num, BigInt den);

/// floor(log2 x) for x >= 1.
std::int64_t floor_log2(const BigInt& x);

/// floor(log2 q) for rational q >= 1. Equals floor(log2 floor(q)).
std::int64_t floor_log2(const Frac& q);

inline BigInt pow2(std::int64_t e) {
  if (e < 0) throw std::invalid_argument("pow2: negative exponent");
  return BigInt(1) << static_cast<unsigned>(e);
}

/// Parses "p/q" or "p" (decimal integer strings, q > 0).
Frac parse_fraction(const std::string& s);

/// Renders as "p/q" ("p" when q == 1 is still rendered "p/1" for
/// round-trip stability in report files).
std::string fraction_string(const Frac& q);

/// Decimal rendering with a fixed number of significant digits,
/// truncated (not rounded) so the output is a deterministic function
/// of the exact value. Presentation only.
std::string decimal_string(const Frac& q, int significant_digits = 12);

/// Natural log of a positive rational, evaluated in double precision
/// via the bit length so arbitrarily large components do not overflow.
/// Presentation-side only (rate reporting).
double log_approx(const Frac& q);

/// Exact rational on int64 components, for hot enumeration paths where
/// all values provably stay small. Same contract as Frac: lowest terms,
/// positive denominator, exact comparisons. Throws on overflow rather
/// than silently wrapping.
struct SmallFrac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  SmallFrac() = default;
  SmallFrac(std::int64_t n) : num(n), den(1) {}
  SmallFrac(std::int64_t n, std::int64_t d);

  friend SmallFrac operator+(const SmallFrac& a, const SmallFrac& b);
  friend SmallFrac operator-(const SmallFrac& a, const SmallFrac& b);
  friend SmallFrac operator*(const SmallFrac& a, const SmallFrac& b);
  friend SmallFrac operator/(const SmallFrac& a, const SmallFrac& b);
  friend bool operator==(const SmallFrac& a, const SmallFrac& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const SmallFrac& a, const SmallFrac& b) { return !(a == b); }
  friend bool operator<(const SmallFrac& a, const SmallFrac& b);
  friend bool operator<=(const SmallFrac& a, const SmallFrac& b) { return !(b < a); }
  friend bool operator>(const SmallFrac& a, const SmallFrac& b) { return b < a; }
  friend bool operator>=(const SmallFrac& a, const SmallFrac& b) { return !(a < b); }

  Frac to_frac() const { return Frac(num, den); }
};

}  // namespace fairdyn
