#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "patchwork/export.hpp"
#include "patchwork/surface.hpp"

using namespace patchwork;

namespace {

SurfaceSpec spec_for(const MagmaOp& op, std::uint32_t q, Domain domain, std::size_t n,
                     int frac = 12) {
  SurfaceSpec spec{op, q, std::move(domain), {n, n}, frac, std::nullopt, 0};
  return spec;
}

std::shared_ptr<const CoefficientField> field_for(const MagmaOp& op, Domain domain,
                                                  Resolution res, int frac = 12) {
  return std::make_shared<const CoefficientField>(op, domain, res, frac, 1);
}

}  // namespace

TEST_SUITE("surface") {

TEST_CASE("axis coordinates are exact") {
  CHECK(axis_coordinate(0, 1, 3, 1) == Rational(1, 2));
  CHECK(axis_coordinate(0, 100, 4, 1) == Rational(100, 3));
  CHECK(axis_coordinate(2, 5, 2, 1) == 5);
  CHECK(axis_coordinate(7, 9, 1, 0) == 7);
}

TEST_CASE("every sample equals a direct evaluation") {
  for (const char* literal : {"2:6:2", "2:14:2", "2:13903:3", "2:9815:3", "2:13427417:5"}) {
    CAPTURE(literal);
    const auto op = parse_operator_literal(literal);
    const Domain domain{"0", "37.5", "1.25", "20"};
    const auto grid = sample_surface({op, 4, domain, {9, 7}, 8, std::nullopt, 2});
    CHECK(grid.roughness_exponent() > 0);
    for (std::size_t i = 0; i < 9; ++i) {
      for (std::size_t j = 0; j < 7; ++j) {
        const RadixFixed pair[] = {
            RadixFixed::from_rational(axis_coordinate(0, parse_decimal("37.5"), 9, i),
                                      op.radix(), 8),
            RadixFixed::from_rational(
                axis_coordinate(parse_decimal("1.25"), 20, 7, j), op.radix(), 8)};
        const auto direct = bitwise_eval(op, pair, 4);
        CHECK(grid.exact_value(i, j) == direct.value());
        CHECK(grid.value(i, j) == direct.to_double());
        CHECK(grid.field().u_operand(i) == pair[0]);
        CHECK(grid.field().v_operand(j) == pair[1]);
      }
    }
  }
}

TEST_CASE("roughness exponent") {
  const auto op = MagmaOp::from_code(13903, 3, 2);
  auto field = field_for(op, Domain::square("0", "1"), {2, 2});
  CHECK(SurfaceGrid(field, 3, std::nullopt, 1).roughness_exponent() == doctest::Approx(1.0));
  CHECK(SurfaceGrid(field, 9, std::nullopt, 1).roughness_exponent() == doctest::Approx(2.0));
  CHECK(SurfaceGrid(field, 2, std::nullopt, 1).roughness_exponent() < 1.0);
}

TEST_CASE("bad specs are rejected") {
  const auto op = MagmaOp::from_code(6, 2, 2);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 2, Domain::square("1", "1"), 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 2, Domain::square("2", "1"), 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 2, Domain::square("-1", "1"), 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 2, Domain::square("0", "x"), 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 2, Domain::square("0", "1"), 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(MagmaOp::from_code(1, 2, 3), 2,
                                          Domain::square("0", "1"), 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 1, Domain::square("0", "1"), 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_surface(spec_for(op, 2, Domain::square("0", "1"), 4, -1)),
                  std::invalid_argument);
  CHECK_THROWS(q_sweep(op, Domain::square("0", "1"), {4, 4}, 12, {}));
}

TEST_CASE("samples below the precision floor are all zero") {
  const auto op = MagmaOp::from_code(15, 2, 2);
  const auto grid = sample_surface(spec_for(op, 2, Domain::square("0", "0.0000000000001"), 5));
  for (double v : grid.values()) {
    CHECK(v == 0.0);
  }
  CHECK_FALSE(grid.result_at(4, 4).k_max());
}

TEST_CASE("scaling the domain by p scales the grid by q") {
  std::mt19937_64 rng(211);
  for (const char* literal : {"2:6:2", "2:13903:3", "2:9815:3"}) {
    CAPTURE(literal);
    const auto op = parse_operator_literal(literal);
    const std::string big = std::to_string(37 * op.radix());
    for (std::uint32_t q : {2u, 3u, 7u}) {
      const auto small_grid =
          sample_surface(spec_for(op, q, Domain{"0", "37", "0", "37"}, 11, 10));
      const auto big_grid = sample_surface(spec_for(op, q, Domain{"0", big, "0", big}, 11, 9));
      for (std::size_t i = 0; i < 11; ++i) {
        for (std::size_t j = 0; j < 11; ++j) {
          CHECK(big_grid.exact_value(i, j) == Rational(q) * small_grid.exact_value(i, j));
        }
      }
    }
  }
}

TEST_CASE("worker count does not change the output") {
  const auto op = MagmaOp::from_code(13903, 3, 2);
  auto spec = spec_for(op, 3, Domain::square("0", "50"), 40);
  spec.workers = 1;
  const auto one = sample_surface(spec);
  spec.workers = 8;
  const auto eight = sample_surface(spec);
  const auto again = sample_surface(spec);
  CHECK(one.values() == eight.values());
  CHECK(eight.values() == again.values());
  CHECK(render_pgm(one) == render_pgm(eight));
}

TEST_CASE("thread cap from the environment") {
  ::setenv("PATCHWORK_THREADS", "2", 1);
  CHECK(effective_workers(8) == 2);
  CHECK(effective_workers(1) == 1);
  ::setenv("PATCHWORK_THREADS", "junk", 1);
  CHECK(effective_workers(8) == 8);
  ::unsetenv("PATCHWORK_THREADS");
  CHECK(effective_workers(5) == 5);
  CHECK(effective_workers(0) >= 1);
}

TEST_CASE("coarse graining never raises a sample") {
  const auto op = MagmaOp::from_code(9815, 3, 2);
  auto field = field_for(op, Domain::square("0", "100"), {24, 24});
  const SurfaceGrid raw(field, 3, std::nullopt, 1);
  for (int depth : {3, 1, 0, -1, -2}) {
    const SurfaceGrid coarse(field, 3, depth, 2);
    CHECK(coarse.coarse_depth() == depth);
    for (std::size_t i = 0; i < 24; ++i) {
      for (std::size_t j = 0; j < 24; ++j) {
        const Rational gap = raw.exact_value(i, j) - coarse.exact_value(i, j);
        CHECK(gap >= 0);
        CHECK(gap < radix_power(3, -depth));
        CHECK(coarse.value(i, j) == coarse.result_at(i, j).to_double());
      }
    }
  }
}

TEST_CASE("pointwise identity field") {
  const auto fig = pointwise_identity_field(Domain::square("0", "1"), {33, 33}, 2, 12);
  CHECK(fig.identity_holds);
  CHECK(fig.f.size() == 33 * 33);

  const auto single = pointwise_identity_field(Domain::square("0", "0"), {1, 1}, 2, 12);
  CHECK(single.identity_holds);
  CHECK(single.f == std::vector<Rational>{0});
  CHECK(single.g == std::vector<Rational>{0});
  CHECK(single.h == std::vector<Rational>{0});

  std::mt19937_64 rng(223);
  for (int t = 0; t < 3; ++t) {
    const auto lo = std::uniform_int_distribution<int>(0, 500)(rng);
    const auto hi = lo + std::uniform_int_distribution<int>(1, 500)(rng);
    const auto field = pointwise_identity_field(
        Domain{std::to_string(lo) + ".37", std::to_string(hi) + ".9", "0.001",
               std::to_string(hi)},
        {17, 17}, 10, 6, 3);
    CHECK(field.identity_holds);
  }
  const auto doubles = IdentityField::to_doubles({Rational(1, 4), Rational(3)});
  CHECK(doubles == std::vector<double>{0.25, 3.0});
}

TEST_CASE("commutative operators give symmetric grids") {
  for (int code : {6, 14, 8, 15, 0}) {
    const auto op = MagmaOp::from_code(code, 2, 2);
    REQUIRE(is_commutative(op));
    CHECK(symmetry_probe(sample_surface(spec_for(op, 2, Domain::square("0", "100"), 32))));
  }
  CHECK(symmetry_probe(sample_surface(spec_for(mod_add_code(5), 7, Domain::square("0", "9"), 16))));

  const auto one_by_one = std::make_shared<const CoefficientField>(
      MagmaOp::from_code(6, 2, 2), Domain::square("3", "3"), Resolution{1, 1}, 12, 1);
  CHECK(symmetry_probe(SurfaceGrid(one_by_one, 2, std::nullopt, 1)));

  CHECK_FALSE(symmetry_probe(
      sample_surface(spec_for(MagmaOp::from_code(2, 2, 2), 2, Domain::square("0", "100"), 32))));
  CHECK_FALSE(symmetry_probe(
      sample_surface(spec_for(MagmaOp::from_code(13903, 3, 2), 3, Domain::square("0", "9"), 10))));

  CHECK_THROWS_AS(symmetry_probe(sample_surface(
                      {MagmaOp::from_code(6, 2, 2), 2, Domain::square("0", "1"), {4, 5}, 12,
                       std::nullopt, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(symmetry_probe(sample_surface(spec_for(MagmaOp::from_code(6, 2, 2), 2,
                                                         Domain{"0", "1", "0", "2"}, 4))),
                  std::invalid_argument);
}

TEST_CASE("q sweep shares one coefficient field") {
  const auto op = MagmaOp::from_code(13903, 3, 2);
  const auto domain = Domain::square("0", "100");
  const auto sweep = q_sweep(op, domain, {12, 12}, 12, {3, 5, 4}, 1);
  REQUIRE(sweep.size() == 3);
  CHECK(&sweep[0].field() == &sweep[2].field());
  CHECK(sweep[1].q() == 5);

  const auto base = q_sweep(op, domain, {12, 12}, 12, {3});
  REQUIRE(base.size() == 1);
  CHECK(base[0].values() == sample_surface(spec_for(op, 3, domain, 12)).values());
}

TEST_CASE("fractional samples break monotonicity in q") {
  const auto op = MagmaOp::from_code(13903, 3, 2);
  // u = 1, v = 0 sits on the grid and carries a_0 = 1 in every fractional position.
  const auto sweep = q_sweep(op, Domain::square("0", "1"), {2, 2}, 12, {3, 4, 5});
  const auto violations = q_monotonicity_violations(sweep);
  bool found = false;
  for (const auto& v : violations) {
    CHECK(v.q_low + 1 == v.q_high);
    found = found || (v.i == 1 && v.j == 0 && v.q_low == 3);
  }
  CHECK(found);

  // Without fractional positions the coefficient polynomial has only
  // nonnegative powers and the values grow with q.
  const auto integral = q_sweep(op, Domain::square("0", "80"), {81, 81}, 0, {5, 3, 4, 11, 7});
  CHECK(q_monotonicity_violations(integral).empty());
}

TEST_CASE("golden checksum of the 512x512 quilt") {
  const auto grid = sample_surface(spec_for(MagmaOp::from_code(13903, 3, 2), 3,
                                            Domain::square("0", "200"), 512));
  const auto summary = summarize(grid.values());
  CHECK(summary.max > summary.min);
  char line[96];
  std::snprintf(line, sizeof line, "%08x min=%.17g max=%.17g", checksum(render_pgm(grid)),
                summary.min, summary.max);
  const std::string path = std::string(PATCHWORK_GOLDEN_DIR) + "/quilt_13903_q3_512.txt";
  if (std::getenv("PATCHWORK_UPDATE_GOLDEN")) {
    std::ofstream(path) << line << '\n';
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in, "missing golden file ", path);
  std::string pinned;
  std::getline(in, pinned);
  CHECK(pinned == line);
}

}
