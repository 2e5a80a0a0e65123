#include "patchwork/bitwise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace patchwork {

namespace {

void require_out_radix(std::uint32_t q) {
  if (q < 2) {
    throw std::invalid_argument("output radix q must be >= 2, got " + std::to_string(q));
  }
}

// Same value with the precision floor lowered to new_low (zero digits appended below).
RadixFixed lower_floor(const RadixFixed& x, int new_low) {
  if (new_low >= x.low_index()) {
    return x;
  }
  std::vector<Digit> digits(static_cast<std::size_t>(x.low_index() - new_low), 0);
  digits.insert(digits.end(), x.digits().begin(), x.digits().end());
  return RadixFixed::from_digits(x.radix(), new_low, std::move(digits));
}

void require_same_radix(const RadixFixed& a, const RadixFixed& b) {
  if (a.radix() != b.radix()) {
    throw std::invalid_argument("radix mismatch: " + std::to_string(a.radix()) + " vs " +
                                std::to_string(b.radix()));
  }
}

BitwiseResult eval_pair(const MagmaOp& op, const RadixFixed& a, const RadixFixed& b) {
  const int low = std::min(a.low_index(), b.low_index());
  const RadixFixed pair[] = {lower_floor(a, low), lower_floor(b, low)};
  return bitwise_eval(op, pair, a.radix());
}

}  // namespace

BitwiseResult::BitwiseResult(std::uint32_t in_radix, std::uint32_t out_radix, int low_index)
    : in_radix_(in_radix), out_radix_(out_radix), low_index_(low_index) {
  require_out_radix(out_radix);
}

BitwiseResult::BitwiseResult(std::uint32_t in_radix, std::uint32_t out_radix, int low_index,
                             int k_max, std::vector<Digit> coeffs)
    : in_radix_(in_radix),
      out_radix_(out_radix),
      low_index_(low_index),
      k_max_(k_max),
      coeffs_(std::move(coeffs)) {
  require_out_radix(out_radix);
  const long expected = std::max(0L, static_cast<long>(k_max) - low_index + 1);
  if (static_cast<long>(coeffs_.size()) != expected) {
    throw std::invalid_argument("coefficient window does not match [low, k_max]");
  }
}

Digit BitwiseResult::coeff(int k) const noexcept {
  const long offset = static_cast<long>(k) - low_index_;
  if (offset < 0 || offset >= static_cast<long>(coeffs_.size())) {
    return 0;
  }
  return coeffs_[static_cast<std::size_t>(offset)];
}

Rational BitwiseResult::value() const {
  BigInt mantissa = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    mantissa = mantissa * out_radix_ + *it;
  }
  return Rational(mantissa) * radix_power(out_radix_, low_index_);
}

double BitwiseResult::to_double() const noexcept {
  if (coeffs_.empty()) {
    return 0.0;
  }
  const double q = out_radix_;
  const int top = *k_max_;
  double whole = 0.0;
  for (int k = top; k >= 0; --k) {
    whole = whole * q + coeff(k);
  }
  double frac = 0.0;
  for (int k = low_index_; k < 0; ++k) {
    frac = (frac + coeff(k)) / q;
  }
  return whole + frac;
}

double BitwiseResult::roughness_exponent() const noexcept {
  return std::log(static_cast<double>(out_radix_)) / std::log(static_cast<double>(in_radix_));
}

BitwiseResult bitwise_eval(const MagmaOp& op, std::span<const RadixFixed> operands,
                           std::uint32_t q) {
  require_out_radix(q);
  if (operands.size() != op.arity()) {
    throw std::invalid_argument("arity mismatch: operator takes " + std::to_string(op.arity()) +
                                " operands, got " + std::to_string(operands.size()));
  }
  const std::uint32_t p = op.radix();
  const int low = operands.front().low_index();
  std::optional<int> k_max;
  for (const auto& u : operands) {
    if (u.radix() != p) {
      throw std::invalid_argument("radix mismatch: operator radix " + std::to_string(p) +
                                  ", operand radix " + std::to_string(u.radix()));
    }
    if (u.low_index() != low) {
      throw std::invalid_argument("operands must share one precision floor");
    }
    if (auto top = u.high_index()) {
      k_max = std::max(k_max.value_or(*top), *top);
    }
  }
  if (!k_max) {
    return BitwiseResult(p, q, low);
  }
  std::vector<Digit> coeffs;
  coeffs.reserve(static_cast<std::size_t>(*k_max - low + 1));
  for (int k = low; k <= *k_max; ++k) {
    std::size_t index = 0;
    for (std::size_t i = operands.size(); i-- > 0;) {
      index = index * p + operands[i].digit_at(k);
    }
    coeffs.push_back(op.entry(index));
  }
  return BitwiseResult(p, q, low, *k_max, std::move(coeffs));
}

RadixFixed materialize(const BitwiseResult& result) {
  const auto coeffs = result.coeffs();
  return RadixFixed::from_digits(result.out_radix(), result.low_index(),
                                 std::vector<Digit>(coeffs.begin(), coeffs.end()));
}

RadixFixed mod_p_add(const RadixFixed& a, const RadixFixed& b) {
  require_same_radix(a, b);
  return materialize(eval_pair(mod_add_code(a.radix()), a, b));
}

RadixFixed carry_sum(const RadixFixed& a, const RadixFixed& b) {
  require_same_radix(a, b);
  return scale_by_radix_power(materialize(eval_pair(carry_code(a.radix()), a, b)), 1);
}

bool check_sum_decomposition(const RadixFixed& a, const RadixFixed& b) {
  return a.value() + b.value() == mod_p_add(a, b).value() + carry_sum(a, b).value();
}

bool check_self_affinity(const MagmaOp& op, std::span<const RadixFixed> operands,
                         std::uint32_t q) {
  std::vector<RadixFixed> scaled;
  scaled.reserve(operands.size());
  for (const auto& u : operands) {
    scaled.push_back(scale_by_radix_power(u, 1));
  }
  const BitwiseResult base = bitwise_eval(op, operands, q);
  const BitwiseResult up = bitwise_eval(op, scaled, q);

  bool digits_shifted = up.low_index() == base.low_index() + 1 &&
                        up.k_max().has_value() == base.k_max().has_value();
  if (digits_shifted && base.k_max()) {
    digits_shifted = *up.k_max() == *base.k_max() + 1;
    for (int k = up.low_index(); digits_shifted && k <= *up.k_max(); ++k) {
      digits_shifted = up.coeff(k) == base.coeff(k - 1);
    }
  }
  const bool value_scaled = up.value() == Rational(q) * base.value();
  return digits_shifted && value_scaled;
}

CoarseLimitReport check_coarse_limit(const MagmaOp& op, std::span<const RadixFixed> operands,
                                     std::uint32_t q) {
  if (q < op.radix()) {
    throw std::invalid_argument("coarse-limit check requires q >= p");
  }
  const BitwiseResult bq = bitwise_eval(op, operands, q);
  CoarseLimitReport report;
  if (!bq.k_max()) {
    report.digit_match = true;
    return report;
  }
  const int top = *bq.k_max();
  const Rational exact = bq.value();
  report.digit_match = true;
  // Two guard positions on each side confirm nothing leaks outside the window.
  for (int k = bq.low_index() - 2; k <= top + 2; ++k) {
    if (digit(q, k, exact) != bq.coeff(k)) {
      report.digit_match = false;
      break;
    }
  }
  const std::uint32_t p = op.radix();
  const Rational bp = bitwise_eval(op, operands, p).value();
  const BigInt leading = floor_of(bp / radix_power(p, top));
  if (leading != 0) {
    const Rational asymptote = Rational(leading) * radix_power(q, top);
    report.rel_deviation = (exact - asymptote) / asymptote;
  }
  return report;
}

BitwiseResult coarse_grain_result(const BitwiseResult& result, int depth) {
  const int new_low = std::max(result.low_index(), -depth);
  if (!result.k_max()) {
    return BitwiseResult(result.in_radix(), result.out_radix(), new_low);
  }
  std::vector<Digit> kept;
  for (int k = new_low; k <= *result.k_max(); ++k) {
    kept.push_back(result.coeff(k));
  }
  return BitwiseResult(result.in_radix(), result.out_radix(), new_low, *result.k_max(),
                       std::move(kept));
}

}  // namespace patchwork
