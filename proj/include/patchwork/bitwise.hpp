#pragma once

/**
 * @file bitwise.hpp
 * @brief The generalized bitwise operator b_q and its executable identities.
 *
 * b_q(op; u_0..u_{N-1}) applies op to the k-th radix-p digits of every operand
 * and reads the resulting coefficient string in powers of q:
 *
 *     b_q = sum_{k=low}^{k_max} q^k op(d_p(k,u_0), ..., d_p(k,u_{N-1}))
 *
 * with k_max = max floor(log_p u_i) over the nonzero operands and low the
 * operands' shared precision floor. Coefficients lie in [0, p-1]; for q < p
 * they are kept as polynomial coefficients and never renormalized.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "patchwork/magma.hpp"
#include "patchwork/radix_fixed.hpp"
#include "patchwork/rational.hpp"

namespace patchwork {

class BitwiseResult {
 public:
  /// The empty result (value 0) for all-zero operands.
  BitwiseResult(std::uint32_t in_radix, std::uint32_t out_radix, int low_index);
  /// coeffs[i] is the coefficient at index low_index + i; k_max is the index
  /// of the last one.
  BitwiseResult(std::uint32_t in_radix, std::uint32_t out_radix, int low_index, int k_max,
                std::vector<Digit> coeffs);

  std::uint32_t in_radix() const noexcept { return in_radix_; }
  std::uint32_t out_radix() const noexcept { return out_radix_; }
  int low_index() const noexcept { return low_index_; }
  std::optional<int> k_max() const noexcept { return k_max_; }
  std::span<const Digit> coeffs() const noexcept { return coeffs_; }
  /// Coefficient at index k; zero outside the window.
  Digit coeff(int k) const noexcept;

  /// Exact sum_k q^k coeff_k.
  Rational value() const;
  /// Double rendering, accumulated in a fixed order so it is reproducible.
  double to_double() const noexcept;
  /// Roughness exponent H = log_p q.
  double roughness_exponent() const noexcept;

 private:
  std::uint32_t in_radix_;
  std::uint32_t out_radix_;
  int low_index_;
  std::optional<int> k_max_;
  std::vector<Digit> coeffs_;
};

/// Evaluates b_q. Operands must all be in radix op.radix() and share one
/// precision floor; their count must equal op.arity(). Throws
/// std::invalid_argument otherwise.
BitwiseResult bitwise_eval(const MagmaOp& op, std::span<const RadixFixed> operands,
                           std::uint32_t q);

/// Coefficient string read back as a radix-q fixed-point number. Requires
/// every coefficient to be a valid radix-q digit.
RadixFixed materialize(const BitwiseResult& result);

/// Digitwise addition modulo p (carries dropped).
RadixFixed mod_p_add(const RadixFixed& a, const RadixFixed& b);

/// Total contribution of the carries: sum_k p^(k+1) d_p(1, d_p(k,a) + d_p(k,b)).
/// Carries do not cascade.
RadixFixed carry_sum(const RadixFixed& a, const RadixFixed& b);

/// a + b == mod_p_add(a, b) + carry_sum(a, b), exactly.
bool check_sum_decomposition(const RadixFixed& a, const RadixFixed& b);

/// Scaling every operand by p shifts the coefficient string up by one index,
/// hence b_q(p u) == q b_q(u). Returns the conjunction of the digit-level and
/// value-level checks.
bool check_self_affinity(const MagmaOp& op, std::span<const RadixFixed> operands,
                         std::uint32_t q);

struct CoarseLimitReport {
  /// Radix-q digits of b_q equal the coefficient string.
  bool digit_match = false;
  /// (b_q - L q^k_max) / (L q^k_max) with L = floor(b_p / p^k_max); empty when
  /// L is zero (including the all-zero result).
  std::optional<Rational> rel_deviation;
};

/// Compares b_q to its leading-digit asymptote. Requires q >= p.
CoarseLimitReport check_coarse_limit(const MagmaOp& op, std::span<const RadixFixed> operands,
                                     std::uint32_t q);

/// q^(-D) floor(q^D b_q) taken on the coefficient string: drops every
/// coefficient below index -D.
BitwiseResult coarse_grain_result(const BitwiseResult& result, int depth);

}  // namespace patchwork
