#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace chshq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders as "num/den" (always with a denominator, "1/1" for one).
std::string to_string(const Rational& r);

/// Accepts "num/den", a bare integer, or an exact decimal like "0.65". Throws InvalidInput otherwise.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

Rational pow(const Rational& base, unsigned exponent);

}  // namespace chshq
