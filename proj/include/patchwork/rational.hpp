#pragma once

// Exact integer and rational scalars shared by every patchwork module.

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace patchwork {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest integer not greater than x.
BigInt floor_of(const Rational& x);

/// base^exponent, exact for any sign of exponent. base must be nonzero.
Rational radix_power(std::uint32_t base, long exponent);

/// base^exponent for exponent >= 0.
BigInt int_power(std::uint32_t base, unsigned long exponent);

/// Parses "[+-]digits[.digits]" into an exact rational. Throws
/// std::invalid_argument on anything else (no exponents, no whitespace).
Rational parse_decimal(std::string_view text);

/// Decimal rendering with exactly frac_digits digits after the point. The
/// magnitude is truncated, never rounded; negative values get a leading '-'.
std::string to_decimal_string(const Rational& x, int frac_digits);

/// "num/den", or just "num" for integers.
std::string to_fraction_string(const Rational& x);

}  // namespace patchwork
