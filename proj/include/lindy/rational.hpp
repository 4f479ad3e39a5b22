// Exact rational scalars and q-th root extraction.
//
// Exact mode represents d^{-1/p} as the rational d^{-q} when 1/p = q is a
// positive integer; |a|^p = |a|^{1/q} is then rational exactly when a is a
// perfect q-th power of a rational, which covers every entry produced by the
// basis construction itself.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace lindy {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline Rational rational_pow(Rational base, unsigned e) {
  Rational acc(1);
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

inline BigInt bigint_pow(BigInt base, unsigned e) {
  BigInt acc(1);
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

// Largest r with r^q <= v (v >= 0), by bisection on the bit length.
inline BigInt floor_nth_root(const BigInt& v, unsigned q) {
  if (q == 1 || v <= 1) return v;
  BigInt lo(1), hi(1);
  hi <<= (msb(v) / q + 1);
  while (lo < hi) {           // invariant: lo^q <= v < (hi+1)^q
    BigInt mid = (lo + hi + 1) / 2;
    if (bigint_pow(mid, q) <= v)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

inline std::optional<BigInt> exact_nth_root(const BigInt& v, unsigned q) {
  if (v < 0) return std::nullopt;
  BigInt r = floor_nth_root(v, q);
  if (bigint_pow(r, q) == v) return r;
  return std::nullopt;
}

// |a|^{1/q} when |a| is a perfect q-th power of a rational.
inline std::optional<Rational> exact_abs_root(const Rational& a, unsigned q) {
  Rational v = a < 0 ? Rational(-a) : a;
  auto n = exact_nth_root(numerator(v), q);
  if (!n) return std::nullopt;
  auto d = exact_nth_root(denominator(v), q);
  if (!d) return std::nullopt;
  return Rational(*n, *d);
}

// Largest dyadic t/2^bits with (t/2^bits)^q <= r: a certified rational lower
// bound for r^{1/q}, used when the exact root does not exist in the field.
inline Rational rational_root_lower(const Rational& r, unsigned q, unsigned bits = 64) {
  if (r <= 0) return Rational(0);
  BigInt scaled = numerator(r) << (q * bits);
  scaled /= denominator(r);
  return Rational(floor_nth_root(scaled, q), BigInt(1) << bits);
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Parses "num", "num/den" or a plain decimal like "-0.25".
inline Rational parse_rational(const std::string& text) {
  // cpp_int reads a leading 0 as octal, so digit strings are cleaned first
  auto to_int = [](std::string s) {
    bool negative = !s.empty() && s[0] == '-';
    if (negative || (!s.empty() && s[0] == '+')) s.erase(0, 1);
    s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
    BigInt v(s);
    return negative ? BigInt(-v) : v;
  };
  auto slash = text.find('/');
  if (slash != std::string::npos)
    return Rational(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(to_int(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  BigInt den = bigint_pow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
  return Rational(to_int(digits), den);
}

} // namespace lindy
