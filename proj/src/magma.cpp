#include "patchwork/magma.hpp"

#include <charconv>
#include <stdexcept>

namespace patchwork {

namespace {

constexpr std::size_t kMaxTableSize = std::size_t{1} << 26;

// d_p(k, n) for a small nonnegative integer n.
Digit small_digit(std::uint32_t p, unsigned k, std::uint64_t n) {
  for (unsigned i = 0; i < k; ++i) {
    n /= p;
  }
  return static_cast<Digit>(n % p);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

template <typename T>
bool parse_unsigned(std::string_view text, T& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

}  // namespace

std::size_t table_size(std::uint32_t radix, unsigned arity) {
  if (radix < 2) {
    throw std::invalid_argument("operator radix must be >= 2");
  }
  if (arity < 1) {
    throw std::invalid_argument("operator arity must be >= 1");
  }
  std::size_t size = 1;
  for (unsigned i = 0; i < arity; ++i) {
    if (size > kMaxTableSize / radix) {
      throw std::length_error("operator table p^N too large for p=" + std::to_string(radix) +
                              ", N=" + std::to_string(arity));
    }
    size *= radix;
  }
  return size;
}

MagmaOp::MagmaOp(std::uint32_t radix, unsigned arity, std::vector<Digit> table, BigInt code)
    : radix_(radix), arity_(arity), table_(std::move(table)), code_(std::move(code)) {}

BigInt to_code(std::span<const Digit> table, std::uint32_t radix, unsigned arity) {
  if (table.size() != table_size(radix, arity)) {
    throw std::invalid_argument("operator table has " + std::to_string(table.size()) +
                                " entries, expected p^N = " +
                                std::to_string(table_size(radix, arity)));
  }
  BigInt code = 0;
  for (auto it = table.rbegin(); it != table.rend(); ++it) {
    if (*it >= radix) {
      throw std::invalid_argument("table entry " + std::to_string(*it) + " outside [0, " +
                                  std::to_string(radix - 1) + "]");
    }
    code = code * radix + *it;
  }
  return code;
}

MagmaOp MagmaOp::from_table(std::vector<Digit> table, std::uint32_t radix, unsigned arity) {
  BigInt code = to_code(table, radix, arity);
  return MagmaOp(radix, arity, std::move(table), std::move(code));
}

MagmaOp MagmaOp::from_code(const BigInt& code, std::uint32_t radix, unsigned arity) {
  const std::size_t size = table_size(radix, arity);
  if (code < 0) {
    throw std::out_of_range("operator code must be nonnegative");
  }
  std::vector<Digit> table;
  table.reserve(size);
  BigInt rest = code;
  for (std::size_t n = 0; n < size; ++n) {
    BigInt quot;
    BigInt rem;
    boost::multiprecision::divide_qr(rest, BigInt(radix), quot, rem);
    table.push_back(rem.convert_to<Digit>());
    rest = std::move(quot);
  }
  if (rest != 0) {
    throw std::out_of_range("operator code " + code.str() + " exceeds p^(p^N) - 1 for p=" +
                            std::to_string(radix) + ", N=" + std::to_string(arity));
  }
  return MagmaOp(radix, arity, std::move(table), code);
}

Digit MagmaOp::apply(std::span<const Digit> args) const {
  if (args.size() != arity_) {
    throw std::invalid_argument("operator of arity " + std::to_string(arity_) + " applied to " +
                                std::to_string(args.size()) + " arguments");
  }
  std::size_t index = 0;
  for (std::size_t k = args.size(); k-- > 0;) {
    if (args[k] >= radix_) {
      throw std::invalid_argument("argument " + std::to_string(args[k]) +
                                  " outside the alphabet of radix " + std::to_string(radix_));
    }
    index = index * radix_ + args[k];
  }
  return table_[index];
}

MagmaOp mod_add_code(std::uint32_t radix) {
  const std::size_t size = table_size(radix, 2);
  std::vector<Digit> table(size);
  for (std::size_t n = 0; n < size; ++n) {
    table[n] = small_digit(radix, 0, small_digit(radix, 0, n) + small_digit(radix, 1, n));
  }
  return MagmaOp::from_table(std::move(table), radix, 2);
}

MagmaOp carry_code(std::uint32_t radix) {
  const std::size_t size = table_size(radix, 2);
  std::vector<Digit> table(size);
  for (std::size_t n = 0; n < size; ++n) {
    table[n] = small_digit(radix, 1, small_digit(radix, 0, n) + small_digit(radix, 1, n));
  }
  return MagmaOp::from_table(std::move(table), radix, 2);
}

bool is_commutative(const MagmaOp& op) {
  if (op.arity() != 2) {
    throw std::invalid_argument("is_commutative is defined for binary operators only");
  }
  const std::size_t p = op.radix();
  for (std::size_t x = 0; x < p; ++x) {
    for (std::size_t y = x + 1; y < p; ++y) {
      if (op.entry(x + p * y) != op.entry(y + p * x)) {
        return false;
      }
    }
  }
  return true;
}

std::string to_literal(const MagmaOp& op) {
  return std::to_string(op.arity()) + ":" + op.code().str() + ":" + std::to_string(op.radix());
}

MagmaOp parse_operator_literal(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("operator literal '" + std::string(text) +
                                "' must have the form N:R:p");
  }
  unsigned arity = 0;
  std::uint32_t radix = 0;
  if (!parse_unsigned(parts[0], arity)) {
    throw std::invalid_argument("bad arity '" + std::string(parts[0]) + "' in operator literal");
  }
  if (!parse_unsigned(parts[2], radix)) {
    throw std::invalid_argument("bad radix '" + std::string(parts[2]) + "' in operator literal");
  }
  for (char c : parts[1]) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("bad code '" + std::string(parts[1]) +
                                  "' in operator literal");
    }
  }
  if (parts[1].empty()) {
    throw std::invalid_argument("empty code in operator literal");
  }
  try {
    return MagmaOp::from_code(BigInt(std::string(parts[1])), radix, arity);
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(e.what());
  } catch (const std::length_error& e) {
    throw std::invalid_argument(e.what());
  }
}

MagmaOp parse_table_literal(std::string_view text, std::uint32_t radix) {
  std::vector<Digit> table;
  for (auto part : split(text, ',')) {
    Digit d = 0;
    if (!parse_unsigned(part, d)) {
      throw std::invalid_argument("bad table entry '" + std::string(part) + "'");
    }
    table.push_back(d);
  }
  if (radix < 2) {
    throw std::invalid_argument("operator radix must be >= 2");
  }
  unsigned arity = 0;
  std::size_t size = 1;
  while (size < table.size()) {
    size *= radix;
    ++arity;
  }
  if (size != table.size() || arity == 0) {
    throw std::invalid_argument("table length " + std::to_string(table.size()) +
                                " is not a power p^N (N >= 1) of radix " + std::to_string(radix));
  }
  return MagmaOp::from_table(std::move(table), radix, arity);
}

}  // namespace patchwork
