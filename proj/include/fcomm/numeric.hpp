#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fcomm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-7/2" or "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Fixed-point decimal rendering truncated toward negative infinity.
std::string to_decimal(const Rational& q, int digits);

}  // namespace fcomm
