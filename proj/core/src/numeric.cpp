#include "fairdyn/numeric.hpp"

#include <cmath>
#include <numeric>

namespace fairdyn {

Frac frac_sum(const std::vector<Frac>& values) {
  Frac total{0};
  for (const auto& v : values) total += v;
  return total;
}

std::int64_t floor_log2(const BigInt& x) {
  if (x <= 0) throw std::invalid_argument("floor_log2: argument must be >= 1");
  return static_cast<std::int64_t>(boost::multiprecision::msb(x));
}

bool is_pow2(const BigInt& x) {
  return x > 0 && mpz_popcount(x.backend().data()) == 1;
}

std::int64_t lowest_set_bit(const BigInt& x) {
  if (x < 1) throw std::invalid_argument("lowest_set_bit: argument must be >= 1");
  return static_cast<std::int64_t>(mpz_scan1(x.backend().data(), 0));
}

Frac make_frac(BigInt num, BigInt den) {
  if (den <= 0) throw std::invalid_argument("make_frac: denominator must be positive");
  if (num == 0) return Frac(0);
  Frac out;
  if (is_pow2(num < 0 ? BigInt(-num) : num) || is_pow2(den)) {
    // One side is 2^e: the whole gcd is the shared power of two, so
    // shifting both sides leaves a coprime pair.
    const std::int64_t s =
        std::min(lowest_set_bit(num < 0 ? BigInt(-num) : num), lowest_set_bit(den));
    if (s > 0) {
      num >>= static_cast<unsigned>(s);
      den >>= static_cast<unsigned>(s);
    }
    mpq_set_num(out.backend().data(), num.backend().data());
    mpq_set_den(out.backend().data(), den.backend().data());
    return out;
  }
  return Frac(std::move(num), std::move(den));
}

std::int64_t floor_log2(const Frac& q) {
  if (q < 1) throw std::invalid_argument("floor_log2: argument must be >= 1");
  return floor_log2(BigInt(frac_num(q) / frac_den(q)));
}

Frac parse_fraction(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_fraction: empty input");
  auto slash = s.find('/');
  if (slash == std::string::npos) return Frac(BigInt(s));
  if (slash == 0 || slash + 1 == s.size())
    throw std::invalid_argument("parse_fraction: missing numerator or denominator");
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den <= 0) throw std::invalid_argument("parse_fraction: denominator must be positive");
  return Frac(num, den);
}

std::string fraction_string(const Frac& q) {
  return frac_num(q).str() + "/" + frac_den(q).str();
}

std::string decimal_string(const Frac& q, int significant_digits) {
  if (q == 0) return "0";
  BigInt num = frac_num(q);
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  const BigInt den = frac_den(q);
  // Decimal exponent of the leading digit.
  std::int64_t exp = 0;
  {
    BigInt n = num, d = den;
    while (n >= d * 10) {
      d *= 10;
      ++exp;
    }
    while (n < d) {
      n *= 10;
      --exp;
    }
  }
  // digits = floor(num / den * 10^(sig-1-exp)), truncated.
  BigInt scaled_num = num, scaled_den = den;
  std::int64_t shift = significant_digits - 1 - exp;
  if (shift >= 0)
    scaled_num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift));
  else
    scaled_den *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-shift));
  std::string digits = BigInt(scaled_num / scaled_den).str();
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string mantissa = digits.substr(0, 1);
  if (digits.size() > 1) mantissa += "." + digits.substr(1);
  if (exp == 0) return sign + mantissa;
  return sign + mantissa + "e" + std::to_string(exp);
}

double log_approx(const Frac& q) {
  if (q <= 0) throw std::invalid_argument("log_approx: argument must be positive");
  auto log_int = [](const BigInt& x) {
    const std::int64_t bits = floor_log2(x);
    // Top 64 bits carry all the precision a double can hold.
    const std::int64_t drop = bits > 62 ? bits - 62 : 0;
    const double head = static_cast<double>(BigInt(x >> static_cast<unsigned>(drop)));
    return std::log(head) + static_cast<double>(drop) * std::log(2.0);
  };
  return log_int(frac_num(q)) - log_int(frac_den(q));
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("SmallFrac overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("SmallFrac overflow");
  return r;
}

}  // namespace

SmallFrac::SmallFrac(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("SmallFrac: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

SmallFrac operator+(const SmallFrac& a, const SmallFrac& b) {
  return SmallFrac(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                   checked_mul(a.den, b.den));
}

SmallFrac operator-(const SmallFrac& a, const SmallFrac& b) {
  return SmallFrac(checked_add(checked_mul(a.num, b.den), -checked_mul(b.num, a.den)),
                   checked_mul(a.den, b.den));
}

SmallFrac operator*(const SmallFrac& a, const SmallFrac& b) {
  return SmallFrac(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
}

SmallFrac operator/(const SmallFrac& a, const SmallFrac& b) {
  if (b.num == 0) throw std::invalid_argument("SmallFrac: division by zero");
  return SmallFrac(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
}

bool operator<(const SmallFrac& a, const SmallFrac& b) {
  return checked_mul(a.num, b.den) < checked_mul(b.num, a.den);
}

}  // namespace fairdyn
