#pragma once

/**
 * @file radix_fixed.hpp
 * @brief Exact nonnegative fixed-point numbers stored as radix-p digits.
 *
 * A RadixFixed holds the digits d_k of a value x = sum_k p^k d_k over a
 * window [low_index, high_index]. The low end of the window is the precision
 * floor (for numbers parsed with F fractional digits it is -F); digits below
 * it are zero by construction, digits above the most significant nonzero
 * digit are never stored. Digit extraction on this type is a table lookup,
 * so it never suffers from binary floating-point representation error.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchwork/rational.hpp"

namespace patchwork {

using Digit = std::uint32_t;

/// Fractional radix digits kept when a caller does not ask for a depth.
inline constexpr int kDefaultFracDigits = 12;

class RadixFixed {
 public:
  /// Zero in the given radix with precision floor low_index.
  explicit RadixFixed(std::uint32_t radix, int low_index = 0);

  /// digits[i] is the digit at index low_index + i. Leading zeros are trimmed.
  static RadixFixed from_digits(std::uint32_t radix, int low_index, std::vector<Digit> digits);

  /// floor(p^F x) / p^F expanded into radix p; x must be nonnegative.
  static RadixFixed from_rational(const Rational& x, std::uint32_t radix,
                                  int frac_digits = kDefaultFracDigits);

  /// Same as from_rational on the exact value of a decimal literal.
  static RadixFixed from_decimal_string(std::string_view text, std::uint32_t radix,
                                        int frac_digits = kDefaultFracDigits);

  std::uint32_t radix() const noexcept { return radix_; }
  int low_index() const noexcept { return low_index_; }
  /// Number of digits the window keeps after the radix point.
  int frac_digits() const noexcept { return low_index_ < 0 ? -low_index_ : 0; }
  bool is_zero() const noexcept { return digits_.empty(); }
  /// Index of the most significant nonzero digit, floor(log_p x); empty for zero.
  std::optional<int> high_index() const noexcept;

  /// Digit at index k; zero outside the stored window.
  Digit digit_at(int k) const noexcept;
  /// Stored digits, least significant (index low_index) first.
  std::span<const Digit> digits() const noexcept { return digits_; }

  Rational value() const;

  friend bool operator==(const RadixFixed&, const RadixFixed&) = default;

 private:
  RadixFixed(std::uint32_t radix, int low_index, std::vector<Digit> digits);
  void trim();

  std::uint32_t radix_;
  int low_index_;
  std::vector<Digit> digits_;
};

/// k-th radix-p digit of x >= 0: floor(x / p^k) - p floor(x / p^(k+1)).
/// p == 1 yields 0 for every k and x; p == 0 and negative x are rejected.
Digit digit(std::uint32_t p, int k, const Rational& x);

/// Same digit for a fixed-point operand. Uses the stored digits when the radix
/// matches and the exact value otherwise.
Digit digit(std::uint32_t p, int k, const RadixFixed& x);

inline RadixFixed from_decimal_string(std::string_view text, std::uint32_t radix,
                                      int frac_digits = kDefaultFracDigits) {
  return RadixFixed::from_decimal_string(text, radix, frac_digits);
}

inline Rational reconstruct(const RadixFixed& x) { return x.value(); }

/// p^(-D) floor(p^D x): drops every digit below index -D.
RadixFixed coarse_grain(const RadixFixed& x, int depth);

/// p^m x as a pure index shift of the digits (precision floor moves too).
RadixFixed scale_by_radix_power(const RadixFixed& x, int m);

/// Checks both forms of the mixed-radix digit identity
///   d_np(k,x) = d_p(k, x/n^k) + p d_n(k, x/p^(k+1))
///             = d_n(k, x/p^k) + n d_p(k, x/n^(k+1))
/// in exact arithmetic.
bool mixed_radix_identity_check(std::uint32_t n, std::uint32_t p, int k, const Rational& x);

/// "d_hi...d_0.d_-1...d_low_p", e.g. "3.1415_10". Radices above 36 print
/// each digit in decimal separated by ':'.
std::string to_digit_string(const RadixFixed& x);

}  // namespace patchwork
