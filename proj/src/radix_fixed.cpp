#include "patchwork/radix_fixed.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace patchwork {

namespace {

void require_radix(std::uint32_t radix) {
  if (radix < 2) {
    throw std::invalid_argument("RadixFixed requires radix >= 2, got " + std::to_string(radix));
  }
}

// Little-endian base-p digits of n >= 0.
std::vector<Digit> expand(BigInt n, std::uint32_t radix) {
  std::vector<Digit> out;
  const BigInt word_limit = std::numeric_limits<std::uint64_t>::max();
  while (n > word_limit) {
    BigInt quot;
    BigInt rem;
    boost::multiprecision::divide_qr(n, BigInt(radix), quot, rem);
    out.push_back(rem.convert_to<Digit>());
    n = std::move(quot);
  }
  auto small = n.convert_to<std::uint64_t>();
  while (small != 0) {
    out.push_back(static_cast<Digit>(small % radix));
    small /= radix;
  }
  return out;
}

char digit_char(Digit d) {
  return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
}

}  // namespace

RadixFixed::RadixFixed(std::uint32_t radix, int low_index) : RadixFixed(radix, low_index, {}) {}

RadixFixed::RadixFixed(std::uint32_t radix, int low_index, std::vector<Digit> digits)
    : radix_(radix), low_index_(low_index), digits_(std::move(digits)) {
  require_radix(radix_);
  trim();
}

void RadixFixed::trim() {
  while (!digits_.empty() && digits_.back() == 0) {
    digits_.pop_back();
  }
}

RadixFixed RadixFixed::from_digits(std::uint32_t radix, int low_index, std::vector<Digit> digits) {
  require_radix(radix);
  for (Digit d : digits) {
    if (d >= radix) {
      throw std::invalid_argument("digit " + std::to_string(d) + " out of range for radix " +
                                  std::to_string(radix));
    }
  }
  return RadixFixed(radix, low_index, std::move(digits));
}

RadixFixed RadixFixed::from_rational(const Rational& x, std::uint32_t radix, int frac_digits) {
  require_radix(radix);
  if (x < 0) {
    throw std::domain_error("negative operands are not supported");
  }
  const BigInt scaled = floor_of(x * radix_power(radix, frac_digits));
  return RadixFixed(radix, -frac_digits, expand(scaled, radix));
}

RadixFixed RadixFixed::from_decimal_string(std::string_view text, std::uint32_t radix,
                                           int frac_digits) {
  if (frac_digits < 0) {
    throw std::invalid_argument("fractional digit count must be >= 0");
  }
  return from_rational(parse_decimal(text), radix, frac_digits);
}

std::optional<int> RadixFixed::high_index() const noexcept {
  if (digits_.empty()) {
    return std::nullopt;
  }
  return low_index_ + static_cast<int>(digits_.size()) - 1;
}

Digit RadixFixed::digit_at(int k) const noexcept {
  const long offset = static_cast<long>(k) - low_index_;
  if (offset < 0 || offset >= static_cast<long>(digits_.size())) {
    return 0;
  }
  return digits_[static_cast<std::size_t>(offset)];
}

Rational RadixFixed::value() const {
  BigInt mantissa = 0;
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
    mantissa = mantissa * radix_ + *it;
  }
  return Rational(mantissa) * radix_power(radix_, low_index_);
}

Digit digit(std::uint32_t p, int k, const Rational& x) {
  if (p == 0) {
    throw std::invalid_argument("digit: radix 0 is undefined");
  }
  if (x < 0) {
    throw std::domain_error("digit: negative operands are not supported");
  }
  if (p == 1) {
    return 0;
  }
  const BigInt low = floor_of(x / radix_power(p, k));
  const BigInt high = floor_of(x / radix_power(p, static_cast<long>(k) + 1));
  return BigInt(low - p * high).convert_to<Digit>();
}

Digit digit(std::uint32_t p, int k, const RadixFixed& x) {
  if (p == x.radix()) {
    return x.digit_at(k);
  }
  return digit(p, k, x.value());
}

RadixFixed coarse_grain(const RadixFixed& x, int depth) {
  const int new_low = std::max(x.low_index(), -depth);
  std::vector<Digit> kept;
  const auto top = x.high_index();
  if (top && *top >= new_low) {
    kept.reserve(static_cast<std::size_t>(*top - new_low + 1));
    for (int k = new_low; k <= *top; ++k) {
      kept.push_back(x.digit_at(k));
    }
  }
  return RadixFixed::from_digits(x.radix(), new_low, std::move(kept));
}

RadixFixed scale_by_radix_power(const RadixFixed& x, int m) {
  const auto digits = x.digits();
  return RadixFixed::from_digits(x.radix(), x.low_index() + m,
                                 std::vector<Digit>(digits.begin(), digits.end()));
}

bool mixed_radix_identity_check(std::uint32_t n, std::uint32_t p, int k, const Rational& x) {
  if (n == 0 || p == 0) {
    throw std::invalid_argument("mixed_radix_identity_check: n and p must be positive");
  }
  const BigInt lhs = digit(n * p, k, x);
  const BigInt first = BigInt(digit(p, k, x / radix_power(n, k))) +
                       BigInt(p) * digit(n, k, x / radix_power(p, static_cast<long>(k) + 1));
  const BigInt second = BigInt(digit(n, k, x / radix_power(p, k))) +
                        BigInt(n) * digit(p, k, x / radix_power(n, static_cast<long>(k) + 1));
  return lhs == first && lhs == second;
}

std::string to_digit_string(const RadixFixed& x) {
  const bool wide = x.radix() > 36;
  const int top = std::max(x.high_index().value_or(0), 0);
  const int bottom = std::min(x.low_index(), 0);
  std::string out;
  for (int k = top; k >= bottom; --k) {
    if (k == -1) {
      out += '.';
    } else if (wide && k != top) {
      out += ':';
    }
    const Digit d = x.digit_at(k);
    out += wide ? std::to_string(d) : std::string(1, digit_char(d));
  }
  out += '_';
  out += std::to_string(x.radix());
  return out;
}

}  // namespace patchwork
