#include "patchwork/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

namespace patchwork {

namespace {

// Runs body(begin, end) over contiguous row blocks of [0, rows).
void for_row_blocks(std::size_t rows, unsigned workers,
                    const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(workers, rows));
  if (shards == 1) {
    body(0, rows);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = rows * s / shards;
    const std::size_t end = rows * (s + 1) / shards;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

std::vector<RadixFixed> sample_axis(const std::string& lo_text, const std::string& hi_text,
                                    std::size_t n, std::uint32_t radix, int frac_digits,
                                    const char* axis) {
  if (n < 1) {
    throw std::invalid_argument(std::string("resolution along ") + axis + " must be >= 1");
  }
  const Rational lo = parse_decimal(lo_text);
  const Rational hi = parse_decimal(hi_text);
  if (lo < 0) {
    throw std::invalid_argument(std::string(axis) + " range must be nonnegative");
  }
  if (n > 1 ? lo >= hi : lo > hi) {
    throw std::invalid_argument(std::string("invalid ") + axis + " range [" + lo_text + ", " +
                                hi_text + "]: min must be below max");
  }
  std::vector<RadixFixed> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(RadixFixed::from_rational(axis_coordinate(lo, hi, n, i), radix, frac_digits));
  }
  return out;
}

}  // namespace

Rational axis_coordinate(const Rational& lo, const Rational& hi, std::size_t n, std::size_t i) {
  if (n <= 1) {
    return lo;
  }
  return lo + (hi - lo) * Rational(BigInt(i), BigInt(n - 1));
}

unsigned effective_workers(unsigned requested) {
  unsigned workers = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("PATCHWORK_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && parsed >= 1) {
      workers = std::min(workers, static_cast<unsigned>(parsed));
    }
  }
  return workers;
}

CoefficientField::CoefficientField(const MagmaOp& op, const Domain& domain, Resolution res,
                                   int frac_digits, unsigned workers)
    : op_(op), domain_(domain), res_(res), frac_digits_(frac_digits) {
  if (op.arity() != 2) {
    throw std::invalid_argument("surfaces need a binary operator, got arity " +
                                std::to_string(op.arity()));
  }
  if (frac_digits < 0) {
    throw std::invalid_argument("fractional digit count must be >= 0");
  }
  u_axis_ = sample_axis(domain.u_min, domain.u_max, res.nu, op.radix(), frac_digits, "u");
  v_axis_ = sample_axis(domain.v_min, domain.v_max, res.nv, op.radix(), frac_digits, "v");

  int top = low_index() - 1;
  for (const auto* axis : {&u_axis_, &v_axis_}) {
    for (const auto& x : *axis) {
      top = std::max(top, x.high_index().value_or(top));
    }
  }
  width_ = static_cast<std::size_t>(top - low_index() + 1);
  coeffs_.assign(res.nu * res.nv * width_, 0);

  const std::size_t p = op.radix();
  for_row_blocks(res.nu, effective_workers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < res_.nv; ++j) {
        const auto k_top = k_max(i, j);
        if (!k_top) {
          continue;
        }
        Digit* cell = &coeffs_[(i * res_.nv + j) * width_];
        for (int k = low_index(); k <= *k_top; ++k) {
          cell[k - low_index()] =
              op_.entry(u_axis_[i].digit_at(k) + p * v_axis_[j].digit_at(k));
        }
      }
    }
  });
}

std::optional<int> CoefficientField::k_max(std::size_t i, std::size_t j) const {
  const auto top_u = u_axis_.at(i).high_index();
  const auto top_v = v_axis_.at(j).high_index();
  if (!top_u) {
    return top_v;
  }
  if (!top_v) {
    return top_u;
  }
  return std::max(*top_u, *top_v);
}

Digit CoefficientField::coeff(std::size_t i, std::size_t j, int k) const {
  if (i >= res_.nu || j >= res_.nv) {
    throw std::out_of_range("sample index outside the grid");
  }
  if (k < low_index() || k > top_index()) {
    return 0;
  }
  return coeffs_[(i * res_.nv + j) * width_ + static_cast<std::size_t>(k - low_index())];
}

SurfaceGrid::SurfaceGrid(std::shared_ptr<const CoefficientField> field, std::uint32_t q,
                         std::optional<int> coarse_depth, unsigned workers)
    : field_(std::move(field)), q_(q), coarse_depth_(coarse_depth) {
  if (q < 2) {
    throw std::invalid_argument("output radix q must be >= 2, got " + std::to_string(q));
  }
  const Resolution res = field_->resolution();
  values_.assign(res.nu * res.nv, 0.0);
  const int low = coarse_depth_ ? std::max(field_->low_index(), -*coarse_depth_)
                                : field_->low_index();
  const double qd = q_;
  // Same accumulation order as BitwiseResult::to_double.
  for_row_blocks(res.nu, effective_workers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < res.nv; ++j) {
        const auto top = field_->k_max(i, j);
        if (!top || *top < low) {
          continue;
        }
        double whole = 0.0;
        for (int k = *top; k >= 0; --k) {
          whole = whole * qd + (k >= low ? field_->coeff(i, j, k) : 0);
        }
        double frac = 0.0;
        for (int k = low; k < 0; ++k) {
          frac = (frac + (k <= *top ? field_->coeff(i, j, k) : 0)) / qd;
        }
        values_[index(i, j)] = whole + frac;
      }
    }
  });
}

double SurfaceGrid::roughness_exponent() const noexcept {
  return std::log(static_cast<double>(q_)) / std::log(static_cast<double>(op().radix()));
}

BitwiseResult SurfaceGrid::result_at(std::size_t i, std::size_t j) const {
  const auto top = field_->k_max(i, j);
  const int low = field_->low_index();
  BitwiseResult full = [&] {
    if (!top) {
      return BitwiseResult(op().radix(), q_, low);
    }
    std::vector<Digit> coeffs;
    for (int k = low; k <= *top; ++k) {
      coeffs.push_back(field_->coeff(i, j, k));
    }
    return BitwiseResult(op().radix(), q_, low, *top, std::move(coeffs));
  }();
  return coarse_depth_ ? coarse_grain_result(full, *coarse_depth_) : full;
}

SurfaceGrid sample_surface(const SurfaceSpec& spec) {
  if (spec.resolution.nu < 2 || spec.resolution.nv < 2) {
    throw std::invalid_argument("surface resolution must be at least 2x2");
  }
  auto field = std::make_shared<const CoefficientField>(spec.op, spec.domain, spec.resolution,
                                                        spec.frac_digits, spec.workers);
  return SurfaceGrid(std::move(field), spec.q, spec.coarse_depth, spec.workers);
}

std::vector<SurfaceGrid> q_sweep(const MagmaOp& op, const Domain& domain, Resolution res,
                                 int frac_digits, const std::vector<std::uint32_t>& q_list,
                                 unsigned workers) {
  if (q_list.empty()) {
    throw std::invalid_argument("q sweep needs at least one q");
  }
  if (res.nu < 2 || res.nv < 2) {
    throw std::invalid_argument("surface resolution must be at least 2x2");
  }
  auto field = std::make_shared<const CoefficientField>(op, domain, res, frac_digits, workers);
  std::vector<SurfaceGrid> grids;
  grids.reserve(q_list.size());
  for (std::uint32_t q : q_list) {
    grids.emplace_back(field, q, std::nullopt, workers);
  }
  return grids;
}

std::vector<MonotonicityViolation> q_monotonicity_violations(
    const std::vector<SurfaceGrid>& sweep) {
  std::vector<const SurfaceGrid*> ordered;
  for (const auto& g : sweep) {
    ordered.push_back(&g);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SurfaceGrid* a, const SurfaceGrid* b) { return a->q() < b->q(); });
  std::vector<MonotonicityViolation> violations;
  for (std::size_t g = 1; g < ordered.size(); ++g) {
    const SurfaceGrid& lower = *ordered[g - 1];
    const SurfaceGrid& upper = *ordered[g];
    const Resolution res = lower.resolution();
    if (res.nu != upper.resolution().nu || res.nv != upper.resolution().nv) {
      throw std::invalid_argument("sweep grids differ in resolution");
    }
    for (std::size_t i = 0; i < res.nu; ++i) {
      for (std::size_t j = 0; j < res.nv; ++j) {
        if (upper.exact_value(i, j) < lower.exact_value(i, j)) {
          violations.push_back({i, j, lower.q(), upper.q()});
        }
      }
    }
  }
  return violations;
}

std::vector<double> IdentityField::to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    out.push_back(v.convert_to<double>());
  }
  return out;
}

IdentityField pointwise_identity_field(const Domain& domain, Resolution res, std::uint32_t p,
                                       int frac_digits, unsigned workers) {
  const auto u_axis = sample_axis(domain.u_min, domain.u_max, res.nu, p, frac_digits, "u");
  const auto v_axis = sample_axis(domain.v_min, domain.v_max, res.nv, p, frac_digits, "v");
  IdentityField field;
  field.resolution = res;
  const std::size_t total = res.nu * res.nv;
  field.f.resize(total);
  field.g.resize(total);
  field.h.resize(total);
  std::vector<char> holds(res.nu, 1);
  for_row_blocks(res.nu, effective_workers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < res.nv; ++j) {
        const std::size_t at = i * res.nv + j;
        field.f[at] = u_axis[i].value() + v_axis[j].value();
        field.g[at] = mod_p_add(u_axis[i], v_axis[j]).value();
        field.h[at] = carry_sum(u_axis[i], v_axis[j]).value();
        if (field.g[at] + field.h[at] != field.f[at]) {
          holds[i] = 0;
        }
      }
    }
  });
  field.identity_holds = std::all_of(holds.begin(), holds.end(), [](char c) { return c != 0; });
  return field;
}

bool symmetry_probe(const SurfaceGrid& grid) {
  const Resolution res = grid.resolution();
  const Domain& d = grid.domain();
  if (res.nu != res.nv || parse_decimal(d.u_min) != parse_decimal(d.v_min) ||
      parse_decimal(d.u_max) != parse_decimal(d.v_max)) {
    throw std::invalid_argument("symmetry probe needs a square grid over a square domain");
  }
  for (std::size_t i = 0; i < res.nu; ++i) {
    for (std::size_t j = i + 1; j < res.nv; ++j) {
      if (grid.value(i, j) != grid.value(j, i) || grid.exact_value(i, j) != grid.exact_value(j, i)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace patchwork
