#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>

#include "urnlab/errors.hpp"

namespace urnlab {

/// Exact arbitrary-precision rational.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "p/q", an integer, or a finite decimal such as "0.4" or "-1.25",
/// exactly.
inline Rational parse_rational(std::string_view text) {
  using boost::multiprecision::cpp_int;
  auto fail = [&] {
    return ParameterError("not an exact rational: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw fail();
    return num / den;
  }
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  cpp_int digits = 0;
  cpp_int scale = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits = digits * 10 + (ch - '0');
      if (seen_point) scale *= 10;
      seen_digit = true;
    } else {
      throw fail();
    }
  }
  if (!seen_digit) throw fail();
  Rational r(digits, scale);
  return negative ? Rational(-r) : r;
}

}  // namespace urnlab
