#include <cmath>
#include <numbers>

#include "doctest.h"
#include "davoid/norms.hpp"
#include "fixtures.hpp"

using namespace davoid;
using fixtures::q;

namespace {

NormSpec square_poly() { return NormSpec::parse("poly:[(1,0),(0,1),(1/2,1/2)]", 2); }

}  // namespace

TEST_SUITE("norms") {
  TEST_CASE("exact values on rational points") {
    const RationalVector x{q("3"), q("-4")};
    CHECK(eval_exact(NormSpec::l1(2), x) == ScaleValue::rational(7));
    CHECK(eval_exact(NormSpec::l2(2), x) == ScaleValue::rational(5));
    CHECK(eval_exact(NormSpec::linf(2), x) == ScaleValue::rational(4));
    const RationalVector y{q("1"), q("1")};
    CHECK(eval_exact(NormSpec::l2(2), y) == ScaleValue::sqrt(2));
    CHECK(eval_exact(square_poly(), x) == ScaleValue::rational(4));
    const std::vector<long> v{3, -4};
    CHECK(eval_lattice(NormSpec::l2(2), v) == ScaleValue::rational(5));
  }

  TEST_CASE("general exponents give enclosures and refuse exact evaluation") {
    const NormSpec p3 = NormSpec::parse("lp:3", 2);
    CHECK_FALSE(p3.exact_capable());
    const RationalVector x{q("1"), q("1")};
    const NormValue v = eval_norm(p3, x, Rational(1, 1 << 30));
    CHECK_FALSE(v.exact);
    CHECK(pow(v.lo, 3) <= 2);
    CHECK(pow(v.hi, 3) >= 2);
    CHECK(v.hi - v.lo <= Rational(1, 1 << 30));
    CHECK_THROWS_AS(eval_exact(p3, x), NotExact);
  }

  TEST_CASE("parsing") {
    CHECK(NormSpec::parse("linf", 3).is_linf());
    CHECK(NormSpec::parse("lp:1", 2).is_l1());
    CHECK(square_poly().to_string() == "poly:[(1,0),(0,1),(1/2,1/2)]");
    CHECK_THROWS_AS(NormSpec::parse("l7x", 2), ConfigError);
    CHECK_THROWS_AS(NormSpec::parse("poly:[(1,1),(2,2)]", 2), ConfigError);  // degenerate
    CHECK_THROWS_AS(NormSpec::parse("poly:[(1,0,0)]", 2), ConfigError);
    CHECK_THROWS_AS(NormSpec::parse("lp:1/2", 2), ConfigError);
  }

  TEST_CASE("value grids") {
    CHECK(NormSpec::l1(2).grid_denominator() == 1);
    CHECK(NormSpec::l2(1).has_value_grid());
    CHECK_FALSE(NormSpec::l2(2).has_value_grid());
    CHECK(square_poly().grid_denominator() == 2);
  }

  TEST_CASE("equivalence constants") {
    CHECK(equivalence_constants(NormSpec::l2(3)) == EquivalenceConstants{1, 1});
    const auto l1 = equivalence_constants(NormSpec::l1(2));
    CHECK(l1.c_lo == 1);
    CHECK(l1.C_hi == q("46341/32768"));
    CHECK(l1.C_hi * l1.C_hi >= 2);
    const auto linf = equivalence_constants(NormSpec::linf(2));
    CHECK(linf.c_lo == q("11585/16384"));
    CHECK(linf.C_hi == 1);
    CHECK(2 * linf.c_lo * linf.c_lo <= 1);
    const auto poly = equivalence_constants(square_poly());
    CHECK(poly.c_lo == q("11585/16384"));
    CHECK(poly.C_hi == 1);
  }

  TEST_CASE("shortest lattice vector") {
    CHECK(min_lattice_norm(NormSpec::l2(3)) == ScaleValue::rational(1));
    CHECK(min_lattice_norm(square_poly()) == ScaleValue::rational(1));
    // rows (1/3, 0), (0, 1/3): rho(e1) = 1/3
    CHECK(min_lattice_norm(NormSpec::parse("poly:[(1/3,0),(0,1/3)]", 2)) == ScaleValue::rational(q("1/3")));
    // rho = max(|x + y|, |x - y|) / 2 has rho(1, 1) = 1 and rho(1, 0) = 1/2
    CHECK(min_lattice_norm(NormSpec::parse("poly:[(1/2,1/2),(1/2,-1/2)]", 2)) == ScaleValue::rational(q("1/2")));
  }

  TEST_CASE("lattice shell enumeration") {
    std::uint64_t count = 0;
    enumerate_lattice_shell(2, 0, 25, 1'000'000, [&](std::span<const long>) { ++count; });
    CHECK(count == 81);  // Gauss circle count for radius 5
    count = 0;
    enumerate_lattice_shell(3, 25, 25, 1'000'000, [&](std::span<const long> v) {
      CHECK(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] == 25);
      ++count;
    });
    CHECK(count == 30);  // r_3(25)
    CHECK_THROWS_AS(enumerate_lattice_shell(2, 0, 10'000, 100, [](std::span<const long>) {}), BudgetExceeded);
  }

  TEST_CASE("unit ball volumes") {
    const auto disc = unit_ball_volume(NormSpec::l2(2), 1, 0.95);
    CHECK(disc.kind == VolumeEstimate::Kind::Exact);
    CHECK(disc.coefficient == 1);
    CHECK(disc.pi_power == 1);
    const auto ball = unit_ball_volume(NormSpec::l2(3), 1, 0.95);
    CHECK(ball.coefficient == q("4/3"));
    CHECK(ball.pi_power == 1);
    CHECK(ball.value() == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
    CHECK(unit_ball_volume(NormSpec::l1(3), 1, 0.95).coefficient == q("4/3"));
    CHECK(unit_ball_volume(NormSpec::linf(3), 1, 0.95).coefficient == 8);
    CHECK(unit_ball_volume(NormSpec::l2(4), 1, 0.95).coefficient == q("1/2"));

    const auto mc = unit_ball_volume(square_poly(), 200'000, 0.99, 7);
    CHECK(mc.kind == VolumeEstimate::Kind::Statistical);
    CHECK(std::abs(mc.estimate - 4.0) <= 4 * mc.standard_error + 1e-12);
    CHECK(mc.lower_bound <= 4.0);
    const auto forced = unit_ball_volume(NormSpec::l2(2), 200'000, 0.99, 7, VolumeMethod::Statistical);
    CHECK(std::abs(forced.estimate - std::numbers::pi) <= 4 * forced.standard_error);
    CHECK_THROWS_AS(unit_ball_volume(square_poly(), 0, 0.95), ConfigError);
  }
}
