#pragma once

/**
 * @file magma.hpp
 * @brief N-ary laws of composition on the alphabet {0, ..., p-1}.
 *
 * An operator _N R_p is a table a_0 ... a_{p^N - 1}; the result for arguments
 * (x_0, ..., x_{N-1}) is a_n with n = sum_k p^k x_k, i.e. x_0 is the least
 * significant position. The code R = sum_n a_n p^n packs the table into one
 * integer, so a_n is simply the n-th radix-p digit of R.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchwork/radix_fixed.hpp"
#include "patchwork/rational.hpp"

namespace patchwork {

/// p^N, throwing std::length_error when the table would not be addressable.
std::size_t table_size(std::uint32_t radix, unsigned arity);

class MagmaOp {
 public:
  /// Reads a_n off as the base-p digits of code; throws std::out_of_range
  /// unless 0 <= code <= p^(p^N) - 1.
  static MagmaOp from_code(const BigInt& code, std::uint32_t radix, unsigned arity);
  static MagmaOp from_table(std::vector<Digit> table, std::uint32_t radix, unsigned arity);

  std::uint32_t radix() const noexcept { return radix_; }
  unsigned arity() const noexcept { return arity_; }
  std::span<const Digit> table() const noexcept { return table_; }
  const BigInt& code() const noexcept { return code_; }

  /// Table entry at a packed argument index.
  Digit entry(std::size_t n) const { return table_.at(n); }

  Digit apply(std::span<const Digit> args) const;
  Digit apply(std::initializer_list<Digit> args) const {
    return apply(std::span<const Digit>(args.begin(), args.size()));
  }

  friend bool operator==(const MagmaOp& a, const MagmaOp& b) {
    return a.radix_ == b.radix_ && a.arity_ == b.arity_ && a.table_ == b.table_;
  }

 private:
  MagmaOp(std::uint32_t radix, unsigned arity, std::vector<Digit> table, BigInt code);

  std::uint32_t radix_;
  unsigned arity_;
  std::vector<Digit> table_;
  BigInt code_;
};

/// R = sum_n a_n p^n. Throws std::invalid_argument on a bad entry or length.
BigInt to_code(std::span<const Digit> table, std::uint32_t radix, unsigned arity);

/// Addition modulo p: a_n = d_p(0, d_p(0,n) + d_p(1,n)).
MagmaOp mod_add_code(std::uint32_t radix);

/// Carry out of a single digit addition: a_n = d_p(1, d_p(0,n) + d_p(1,n)).
MagmaOp carry_code(std::uint32_t radix);

/// a_{x+py} == a_{y+px} for all digit pairs. Binary operators only.
bool is_commutative(const MagmaOp& op);

/// "N:R:p" with R in decimal.
std::string to_literal(const MagmaOp& op);

/// Parses "N:R:p". Throws std::invalid_argument with a description on failure.
MagmaOp parse_operator_literal(std::string_view text);

/// Builds an operator from a comma-separated table such as "0,1,1,1"; the
/// arity is inferred from the table length, which must be a power of radix.
MagmaOp parse_table_literal(std::string_view text, std::uint32_t radix);

}  // namespace patchwork
