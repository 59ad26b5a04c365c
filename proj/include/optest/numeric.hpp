#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace optest {

// Exact number mode: arbitrary-precision rationals, closed under +, *, and
// division by nonzero values. The float mode is plain binary64. A whole
// computation runs in one mode; the library is templated on the scalar so
// the two never mix.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
concept ProbScalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <ProbScalar S>
S ratio(long long num, long long den) {
  if constexpr (std::same_as<S, Rational>) {
    return Rational(num, den);
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <ProbScalar S>
S scalar_abs(const S& x) {
  if constexpr (std::same_as<S, Rational>) {
    return x < 0 ? S(-x) : x;
  } else {
    return std::fabs(x);
  }
}

// 2^-k, exact in rational mode.
template <ProbScalar S>
S pow2_inverse(int k) {
  if constexpr (std::same_as<S, Rational>) {
    return Rational(BigInt(1), BigInt(1) << k);
  } else {
    return std::ldexp(1.0, -k);
  }
}

// Canonical text form: "p/q" (or a plain integer) for rationals, shortest
// round-trip decimal for doubles. Used by CSV and JSON emitters; stable
// across runs.
inline std::string scalar_str(const Rational& x) { return x.str(); }
inline std::string scalar_str(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline Rational rational_pow10(int exp) {
  BigInt p = 1;
  for (int i = 0; i < (exp < 0 ? -exp : exp); ++i) p *= 10;
  return exp >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

// Decimal or scientific literal -> exact rational ("0.7" -> 7/10).
inline Rational rational_from_decimal(std::string_view text) {
  std::string s(text);
  bool negative = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  int frac_len = 0;
  int exponent = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_dot) ++frac_len;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      int ex = 0;
      bool ex_neg = false;
      ++i;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        ex_neg = s[i] == '-';
        ++i;
      }
      if (i >= s.size()) throw std::invalid_argument("bad number: " + s);
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad number: " + s);
        ex = ex * 10 + (s[i] - '0');
      }
      exponent = ex_neg ? -ex : ex;
      break;
    } else {
      throw std::invalid_argument("bad number: " + s);
    }
  }
  if (!seen_digit) throw std::invalid_argument("bad number: " + s);
  Rational value(digits);
  value *= rational_pow10(exponent - frac_len);
  return negative ? Rational(-value) : value;
}

}  // namespace detail

// Parses "a/b", decimal, or scientific notation in either mode.
template <ProbScalar S>
S parse_scalar(std::string_view text) {
  auto slash = text.find('/');
  if constexpr (std::same_as<S, Rational>) {
    if (slash != std::string_view::npos) {
      Rational num = detail::rational_from_decimal(text.substr(0, slash));
      Rational den = detail::rational_from_decimal(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
      return num / den;
    }
    return detail::rational_from_decimal(text);
  } else {
    auto parse_double = [](std::string_view t) {
      std::string s(t);
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(s, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad number: " + s);
      }
      if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
      return v;
    };
    if (slash != std::string_view::npos) {
      double den = parse_double(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
      return parse_double(text.substr(0, slash)) / den;
    }
    return parse_double(text);
  }
}

// Deterministic 64-bit generator; identical streams on every platform.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 rng(master ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  return rng.next();
}

}  // namespace optest
