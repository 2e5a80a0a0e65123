#pragma once

// Randomized and exhaustive verifier suites behind `patchwork check`.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "patchwork/magma.hpp"
#include "patchwork/radix_fixed.hpp"

namespace patchwork {

enum class Suite { decomposition, self_affinity, coarse_limit, mixed_radix, roundtrip };

Suite parse_suite(std::string_view name);
std::string_view suite_name(Suite suite);

struct SuiteOptions {
  std::optional<std::size_t> trials;  // suite default when unset
  std::optional<std::uint32_t> p;     // random per trial when unset
  std::optional<MagmaOp> op;
  std::uint32_t q_max = 301;
  int frac_digits = kDefaultFracDigits;
  std::uint64_t seed = 1;
};

struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::optional<std::string> counterexample;  // first failing input
  std::vector<std::string> warnings;
  std::vector<std::string> table;  // extra report lines

  bool passed() const noexcept { return failures == 0; }
};

SuiteReport run_suite(Suite suite, const SuiteOptions& options);

/// Random fixed-point number with floor -frac_digits and up to int_digits
/// integer digits. Roughly one draw in sixteen is zero.
RadixFixed random_fixed(std::mt19937_64& rng, std::uint32_t radix, int frac_digits,
                        int int_digits);

/// Operator with a uniformly random table.
MagmaOp random_magma(std::mt19937_64& rng, std::uint32_t radix, unsigned arity);

}  // namespace patchwork
