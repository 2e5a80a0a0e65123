#include "patchwork/suites.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "patchwork/bitwise.hpp"

namespace patchwork {

namespace {

template <typename T>
T uniform(std::mt19937_64& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

std::uint32_t pick_radix(std::mt19937_64& rng, const SuiteOptions& options,
                         std::initializer_list<std::uint32_t> choices) {
  if (options.p) {
    return *options.p;
  }
  const auto at = uniform<std::size_t>(rng, 0, choices.size() - 1);
  return *(choices.begin() + static_cast<std::ptrdiff_t>(at));
}

std::string describe(const RadixFixed& x) { return to_digit_string(x); }

SuiteReport new_report(std::string name, std::size_t trials) {
  SuiteReport report;
  report.name = std::move(name);
  report.trials = trials;
  return report;
}

void record_failure(SuiteReport& report, std::string input) {
  ++report.failures;
  if (!report.counterexample) {
    report.counterexample = std::move(input);
  }
}

SuiteReport run_decomposition(const SuiteOptions& options, std::size_t trials) {
  SuiteReport report = new_report("decomposition", trials);
  std::mt19937_64 rng(options.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint32_t p = pick_radix(rng, options, {2, 3, 10});
    const auto a = random_fixed(rng, p, options.frac_digits, 8);
    const auto b = random_fixed(rng, p, options.frac_digits, 8);
    if (!check_sum_decomposition(a, b)) {
      record_failure(report, "a=" + describe(a) + " b=" + describe(b));
    }
  }
  return report;
}

SuiteReport run_self_affinity(const SuiteOptions& options, std::size_t trials) {
  SuiteReport report = new_report("self-affinity", trials);
  std::mt19937_64 rng(options.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const MagmaOp op =
        options.op ? *options.op : random_magma(rng, pick_radix(rng, options, {2, 3, 5}), 2);
    const auto q = uniform<std::uint32_t>(rng, 2, 12);
    std::vector<RadixFixed> operands;
    for (unsigned n = 0; n < op.arity(); ++n) {
      operands.push_back(random_fixed(rng, op.radix(), options.frac_digits, 6));
    }
    if (!check_self_affinity(op, operands, q)) {
      std::string input = "op=" + to_literal(op) + " q=" + std::to_string(q);
      for (const auto& u : operands) {
        input += " " + describe(u);
      }
      record_failure(report, std::move(input));
    }
  }
  return report;
}

SuiteReport run_coarse_limit(const SuiteOptions& options, std::size_t trials) {
  const MagmaOp op = options.op ? *options.op : MagmaOp::from_code(13903, 3, 2);
  const std::uint32_t p = op.radix();
  SuiteReport report = new_report("coarse-limit", trials);
  if (options.q_max < p) {
    report.warnings.push_back("q_max below p; only digit checks at q = p are meaningful");
  }
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<RadixFixed>> samples;
  std::size_t undefined = 0;
  while (samples.size() < trials && undefined < 100 * trials + 100) {
    std::vector<RadixFixed> operands;
    for (unsigned n = 0; n < op.arity(); ++n) {
      operands.push_back(random_fixed(rng, p, options.frac_digits, 6));
    }
    if (!check_coarse_limit(op, operands, p).rel_deviation) {
      ++undefined;
      continue;
    }
    samples.push_back(std::move(operands));
  }
  if (undefined != 0) {
    report.warnings.push_back(std::to_string(undefined) +
                              " draws skipped: leading coefficient 0, deviation undefined");
  }
  report.table.push_back("q      max rel_deviation    bound p/(q-1)");
  for (std::uint32_t q = std::max<std::uint32_t>(p, 2); q <= std::max(options.q_max, p); ++q) {
    const Rational bound(BigInt(p), BigInt(q - 1));
    Rational worst = 0;
    for (const auto& operands : samples) {
      const auto r = check_coarse_limit(op, operands, q);
      const bool within = r.rel_deviation && *r.rel_deviation >= 0 && *r.rel_deviation < bound;
      if (!r.digit_match || !within) {
        std::string input = "op=" + to_literal(op) + " q=" + std::to_string(q);
        for (const auto& u : operands) {
          input += " " + describe(u);
        }
        record_failure(report, std::move(input));
      }
      if (r.rel_deviation) {
        worst = std::max(worst, *r.rel_deviation);
      }
    }
    if (q < p + 10 || q % 50 == 0 || q == options.q_max) {
      char line[96];
      std::snprintf(line, sizeof line, "%-6u %-20.12f %.12f", q, worst.convert_to<double>(),
                    bound.convert_to<double>());
      report.table.emplace_back(line);
    }
  }
  return report;
}

SuiteReport run_mixed_radix(const SuiteOptions& options, std::size_t trials) {
  SuiteReport report = new_report("mixed-radix", trials);
  std::mt19937_64 rng(options.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto n = uniform<std::uint32_t>(rng, 1, 10);
    const std::uint32_t p = options.p ? *options.p : uniform<std::uint32_t>(rng, 2, 10);
    const auto k = uniform<int>(rng, -4, 4);
    const Rational x(BigInt(uniform<std::uint64_t>(rng, 0, 10'000'000)),
                     BigInt(uniform<std::uint64_t>(rng, 1, 5'000)));
    if (!mixed_radix_identity_check(n, p, k, x)) {
      record_failure(report, "n=" + std::to_string(n) + " p=" + std::to_string(p) +
                                 " k=" + std::to_string(k) + " x=" + to_fraction_string(x));
    }
  }
  return report;
}

SuiteReport run_roundtrip(const SuiteOptions& options, std::size_t trials) {
  SuiteReport report = new_report("roundtrip", trials);
  std::mt19937_64 rng(options.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint32_t p = options.p ? *options.p : uniform<std::uint32_t>(rng, 2, 16);
    const int frac = options.frac_digits;

    std::string text = std::to_string(uniform<std::uint64_t>(rng, 0, 999'999)) + ".";
    for (int d = uniform<int>(rng, 1, 10); d > 0; --d) {
      text += static_cast<char>('0' + uniform<int>(rng, 0, 9));
    }
    const Rational exact = parse_decimal(text);
    const RadixFixed x = RadixFixed::from_decimal_string(text, p, frac);
    const Rational err = exact - x.value();
    bool ok = err >= 0 && err < radix_power(p, -frac);

    const MagmaOp op = random_magma(rng, p <= 6 ? p : 3, 2);
    ok = ok && MagmaOp::from_code(op.code(), op.radix(), 2) == op &&
         to_code(op.table(), op.radix(), 2) == op.code();

    const auto m = uniform<int>(rng, -6, 6);
    const auto k = uniform<int>(rng, -frac - 8, 8);
    ok = ok && digit(p, k, scale_by_radix_power(x, m)) == digit(p, k - m, x);

    if (!ok) {
      record_failure(report, "x=" + text + " p=" + std::to_string(p) + " op=" + to_literal(op) +
                                 " m=" + std::to_string(m) + " k=" + std::to_string(k));
    }
  }
  return report;
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "decomposition") return Suite::decomposition;
  if (name == "self-affinity") return Suite::self_affinity;
  if (name == "coarse-limit") return Suite::coarse_limit;
  if (name == "mixed-radix") return Suite::mixed_radix;
  if (name == "roundtrip") return Suite::roundtrip;
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::decomposition: return "decomposition";
    case Suite::self_affinity: return "self-affinity";
    case Suite::coarse_limit: return "coarse-limit";
    case Suite::mixed_radix: return "mixed-radix";
    case Suite::roundtrip: return "roundtrip";
  }
  return "";
}

RadixFixed random_fixed(std::mt19937_64& rng, std::uint32_t radix, int frac_digits,
                        int int_digits) {
  if (uniform<int>(rng, 0, 15) == 0) {
    return RadixFixed(radix, -frac_digits);
  }
  const auto length = uniform<int>(rng, 1, frac_digits + int_digits);
  std::vector<Digit> digits(static_cast<std::size_t>(length));
  for (auto& d : digits) {
    d = uniform<Digit>(rng, 0, radix - 1);
  }
  return RadixFixed::from_digits(radix, -frac_digits, std::move(digits));
}

MagmaOp random_magma(std::mt19937_64& rng, std::uint32_t radix, unsigned arity) {
  std::vector<Digit> table(table_size(radix, arity));
  for (auto& a : table) {
    a = uniform<Digit>(rng, 0, radix - 1);
  }
  return MagmaOp::from_table(std::move(table), radix, arity);
}

SuiteReport run_suite(Suite suite, const SuiteOptions& options) {
  std::size_t defaults = 1000;
  switch (suite) {
    case Suite::decomposition: defaults = 1000; break;
    case Suite::self_affinity: defaults = 200; break;
    case Suite::coarse_limit: defaults = 20; break;
    case Suite::mixed_radix: defaults = 1000; break;
    case Suite::roundtrip: defaults = 1000; break;
  }
  const std::size_t trials = options.trials.value_or(defaults);
  SuiteReport report;
  switch (suite) {
    case Suite::decomposition: report = run_decomposition(options, trials); break;
    case Suite::self_affinity: report = run_self_affinity(options, trials); break;
    case Suite::coarse_limit: report = run_coarse_limit(options, trials); break;
    case Suite::mixed_radix: report = run_mixed_radix(options, trials); break;
    case Suite::roundtrip: report = run_roundtrip(options, trials); break;
  }
  if (trials == 0) {
    report.warnings.push_back("no trials run; pass is vacuous");
  }
  return report;
}

}  // namespace patchwork
