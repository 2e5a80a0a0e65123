#pragma once

/**
 * @file surface.hpp
 * @brief Sampling b_q over rectangular (u, v) domains ("patchwork quilts").
 *
 * Sample coordinates are u_i = u_min + i (u_max - u_min) / (nu - 1), formed in
 * exact rational arithmetic from the decimal bounds and then truncated to F
 * radix-p digits. Every sample is evaluated independently; rows of the grid
 * are sharded across worker threads and the result does not depend on the
 * worker count.
 *
 * Grids are indexed [i][j] with i along u and j along v, stored u-major.
 */

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "patchwork/bitwise.hpp"
#include "patchwork/magma.hpp"
#include "patchwork/radix_fixed.hpp"
#include "patchwork/rational.hpp"

namespace patchwork {

struct Domain {
  std::string u_min = "0";
  std::string u_max = "1";
  std::string v_min = "0";
  std::string v_max = "1";

  /// [lo, hi] on both axes.
  static Domain square(std::string lo, std::string hi) { return {lo, hi, lo, hi}; }
};

struct Resolution {
  std::size_t nu = 2;
  std::size_t nv = 2;
};

/// Exact coordinate of sample i of n along [lo, hi]; n == 1 yields lo.
Rational axis_coordinate(const Rational& lo, const Rational& hi, std::size_t n, std::size_t i);

/// Worker count actually used: requested (0 = hardware concurrency), capped by
/// the PATCHWORK_THREADS environment variable when it is set.
unsigned effective_workers(unsigned requested);

/// Operand digits and operator coefficients at every sample. Independent of q,
/// so one field backs a whole q sweep.
class CoefficientField {
 public:
  CoefficientField(const MagmaOp& op, const Domain& domain, Resolution res, int frac_digits,
                   unsigned workers);

  const MagmaOp& op() const noexcept { return op_; }
  const Domain& domain() const noexcept { return domain_; }
  Resolution resolution() const noexcept { return res_; }
  int frac_digits() const noexcept { return frac_digits_; }
  /// Lowest coefficient index (-F).
  int low_index() const noexcept { return -frac_digits_; }
  /// Highest coefficient index present anywhere in the grid.
  int top_index() const noexcept { return low_index() + static_cast<int>(width_) - 1; }

  const RadixFixed& u_operand(std::size_t i) const { return u_axis_.at(i); }
  const RadixFixed& v_operand(std::size_t j) const { return v_axis_.at(j); }
  /// k_max at a sample; empty when both operands are zero.
  std::optional<int> k_max(std::size_t i, std::size_t j) const;
  Digit coeff(std::size_t i, std::size_t j, int k) const;

 private:
  MagmaOp op_;
  Domain domain_;
  Resolution res_;
  int frac_digits_;
  std::size_t width_ = 0;
  std::vector<RadixFixed> u_axis_;
  std::vector<RadixFixed> v_axis_;
  std::vector<Digit> coeffs_;  // [(i * nv + j) * width_ + (k - low)]
};

class SurfaceGrid {
 public:
  SurfaceGrid(std::shared_ptr<const CoefficientField> field, std::uint32_t q,
              std::optional<int> coarse_depth, unsigned workers);

  const MagmaOp& op() const noexcept { return field_->op(); }
  std::uint32_t q() const noexcept { return q_; }
  const Domain& domain() const noexcept { return field_->domain(); }
  Resolution resolution() const noexcept { return field_->resolution(); }
  int frac_digits() const noexcept { return field_->frac_digits(); }
  std::optional<int> coarse_depth() const noexcept { return coarse_depth_; }
  /// H = log_p q.
  double roughness_exponent() const noexcept;
  const CoefficientField& field() const noexcept { return *field_; }

  double value(std::size_t i, std::size_t j) const { return values_.at(index(i, j)); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// The sample as b_q (with the coarse-graining depth applied, if any).
  BitwiseResult result_at(std::size_t i, std::size_t j) const;
  Rational exact_value(std::size_t i, std::size_t j) const { return result_at(i, j).value(); }

 private:
  std::size_t index(std::size_t i, std::size_t j) const { return i * resolution().nv + j; }

  std::shared_ptr<const CoefficientField> field_;
  std::uint32_t q_;
  std::optional<int> coarse_depth_;
  std::vector<double> values_;
};

struct SurfaceSpec {
  MagmaOp op;
  std::uint32_t q = 2;
  Domain domain;
  Resolution resolution;
  int frac_digits = kDefaultFracDigits;
  std::optional<int> coarse_depth;
  unsigned workers = 0;
};

/// Throws std::invalid_argument for min >= max, nu or nv < 2, or N != 2.
SurfaceGrid sample_surface(const SurfaceSpec& spec);

/// One grid per q, all sharing a single coefficient field.
std::vector<SurfaceGrid> q_sweep(const MagmaOp& op, const Domain& domain, Resolution res,
                                 int frac_digits, const std::vector<std::uint32_t>& q_list,
                                 unsigned workers = 0);

struct MonotonicityViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint32_t q_low = 0;
  std::uint32_t q_high = 0;
};

/// Samples whose exact value decreases between consecutive grids of a sweep
/// (grids taken in ascending q).
std::vector<MonotonicityViolation> q_monotonicity_violations(
    const std::vector<SurfaceGrid>& sweep);

/// x + y, x +_p y and the carry sum over one grid, as exact values.
struct IdentityField {
  Resolution resolution;
  std::vector<Rational> f;
  std::vector<Rational> g;
  std::vector<Rational> h;
  /// g + h == f at every sample.
  bool identity_holds = false;

  static std::vector<double> to_doubles(const std::vector<Rational>& values);
};

IdentityField pointwise_identity_field(const Domain& domain, Resolution res, std::uint32_t p,
                                       int frac_digits, unsigned workers = 0);

/// values[i][j] == values[j][i] for every sample, compared exactly. Throws
/// std::invalid_argument unless the grid and its domain are square.
bool symmetry_probe(const SurfaceGrid& grid);

}  // namespace patchwork
