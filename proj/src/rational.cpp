#include "patchwork/rational.hpp"

#include <stdexcept>

namespace patchwork {

BigInt floor_of(const Rational& x) {
  const BigInt& num = boost::multiprecision::numerator(x);
  const BigInt& den = boost::multiprecision::denominator(x);
  BigInt quot;
  BigInt rem;
  boost::multiprecision::divide_qr(num, den, quot, rem);
  // divide_qr truncates toward zero; denominators are always positive.
  if (rem < 0) {
    --quot;
  }
  return quot;
}

BigInt int_power(std::uint32_t base, unsigned long exponent) {
  BigInt result = 1;
  BigInt factor = base;
  while (exponent != 0) {
    if (exponent & 1U) {
      result *= factor;
    }
    exponent >>= 1U;
    if (exponent != 0) {
      factor *= factor;
    }
  }
  return result;
}

Rational radix_power(std::uint32_t base, long exponent) {
  if (base == 0) {
    throw std::invalid_argument("radix_power: zero base");
  }
  if (exponent >= 0) {
    return Rational(int_power(base, static_cast<unsigned long>(exponent)));
  }
  return Rational(BigInt(1), int_power(base, static_cast<unsigned long>(-exponent)));
}

Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  BigInt mantissa = 0;
  long scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_point) {
        throw std::invalid_argument("malformed decimal '" + original + "'");
      }
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') {
      throw std::invalid_argument("malformed decimal '" + original + "'");
    }
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point) {
      ++scale;
    }
  }
  if (!seen_digit) {
    throw std::invalid_argument("malformed decimal '" + original + "'");
  }
  Rational value(mantissa, int_power(10, static_cast<unsigned long>(scale)));
  return negative ? Rational(-value) : value;
}

std::string to_decimal_string(const Rational& x, int frac_digits) {
  if (frac_digits < 0) {
    throw std::invalid_argument("to_decimal_string: negative digit count");
  }
  const bool negative = x < 0;
  const Rational magnitude = negative ? Rational(-x) : x;
  const BigInt scaled =
      floor_of(magnitude * Rational(int_power(10, static_cast<unsigned long>(frac_digits))));
  std::string digits = scaled.str();
  if (digits.size() <= static_cast<std::size_t>(frac_digits)) {
    digits.insert(0, static_cast<std::size_t>(frac_digits) + 1 - digits.size(), '0');
  }
  std::string out = negative && scaled != 0 ? "-" : "";
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(frac_digits));
  if (frac_digits > 0) {
    out += '.';
    out += digits.substr(digits.size() - static_cast<std::size_t>(frac_digits));
  }
  return out;
}

std::string to_fraction_string(const Rational& x) {
  const BigInt& den = boost::multiprecision::denominator(x);
  if (den == 1) {
    return boost::multiprecision::numerator(x).str();
  }
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

}  // namespace patchwork
