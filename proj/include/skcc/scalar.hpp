#pragma once

// Scalar types used throughout skcc.
//
// PIN-model quantities are exact rationals; quantities derived from tabular
// distributions (logarithms) are binary64. ScalarTraits gives both a common
// comparison vocabulary so the partition and LP code can be written once.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skcc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Comparison tolerance for the binary64 path.
inline constexpr double kTolerance = 1e-9;

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static bool less_equal(const Rational& a, const Rational& b) { return a <= b; }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational from_int(long long v) { return Rational(v); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x) { return std::fabs(x) <= kTolerance; }
  static bool equal(double a, double b) { return std::fabs(a - b) <= kTolerance; }
  // Strictly less beyond tolerance.
  static bool less(double a, double b) { return a < b - kTolerance; }
  static bool less_equal(double a, double b) { return a <= b + kTolerance; }
  static double to_double(double x) { return x; }
  static double from_int(long long v) { return static_cast<double>(v); }
};

inline BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Exact binary expansion of a finite double.
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an integer for every finite double
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r(scaled);
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << (-exponent));
  }
  return r;
}

inline std::string to_fraction_string(const Rational& x) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(x) << '/' << boost::multiprecision::denominator(x);
  return os.str();
}

// Parses "num/den", an integer, or a finite decimal literal ("0.125", "-3e-2")
// into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a number: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    auto is_int = [](std::string_view s) {
      if (s.empty()) return false;
      std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
      return true;
    };
    if (!is_int(num) || !is_int(den)) fail();
    auto integer = [](std::string_view s) {
      const bool neg = s[0] == '-';
      if (s[0] == '-' || s[0] == '+') s.remove_prefix(1);
      const auto nz = s.find_first_not_of('0');
      const BigInt v = nz == std::string_view::npos ? BigInt(0) : BigInt(std::string(s.substr(nz)));
      return neg ? BigInt(-v) : v;
    };
    const BigInt n = integer(num);
    const BigInt d = integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }
  // decimal: sign, digits, optional fraction, optional exponent
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  std::string digits;
  long long scale = 0;
  bool any = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, any = true) digits += text[i];
  if (i < text.size() && text[i] == '.') {
    for (++i; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, any = true) {
      digits += text[i];
      --scale;
    }
  }
  if (!any) fail();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    if (i == text.size()) fail();
    long long e = 0;
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9' || e > 100000) fail();
      e = e * 10 + (text[i] - '0');
    }
    scale += eneg ? -e : e;
  }
  if (i != text.size()) fail();
  // a leading 0 would make the BigInt constructor read octal
  const auto nz = digits.find_first_not_of('0');
  Rational r{nz == std::string::npos ? BigInt(0) : BigInt(digits.substr(nz))};
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  if (scale < 0) r /= Rational(ten_pow);
  else r *= Rational(ten_pow);
  return negative ? Rational(-r) : r;
}

// Text rendering: integers as "5 (= 5/1)", everything else as
// "1.500000 (= 3/2)".
inline std::string render_rational(const Rational& x) {
  std::ostringstream os;
  if (boost::multiprecision::denominator(x) == 1) {
    os << boost::multiprecision::numerator(x);
  } else {
    os.setf(std::ios::fixed);
    os.precision(6);
    os << x.convert_to<double>();
  }
  os << " (= " << to_fraction_string(x) << ')';
  return os.str();
}

inline std::string render_real(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(9);
  os << x;
  return os.str();
}

inline std::string render_scalar(const Rational& x) { return render_rational(x); }
inline std::string render_scalar(double x) { return render_real(x); }

}  // namespace skcc
