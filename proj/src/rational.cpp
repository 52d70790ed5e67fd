#include "chshq/rational.hpp"

#include <cctype>

#include "chshq/errors.hpp"

namespace chshq {

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw InvalidInput("malformed rational: '" + std::string(whole) + "'");
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      throw InvalidInput("malformed rational: '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(text[0] == '+' ? text.substr(1) : text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    if (text.find('/') != std::string_view::npos) {
      throw InvalidInput("malformed rational: '" + std::string(text) + "'");
    }
    const std::string_view frac = text.substr(dot + 1);
    const std::string digits = std::string(text.substr(0, dot)) + std::string(frac);
    const BigInt num = parse_integer(digits, text);
    BigInt den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    return Rational(num, den);
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const BigInt num = parse_integer(text.substr(0, slash), text);
  const BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

}  // namespace chshq
