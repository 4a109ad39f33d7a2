#include <cmath>

#include "doctest.h"
#include "davoid/oracle.hpp"
#include "fixtures.hpp"

using namespace davoid;
using fixtures::q;

TEST_SUITE("oracle") {
  TEST_CASE("membership") {
    const auto& m = fixtures::line_manifest();
    CHECK(contains(m, RationalVector{q("111/10")}));
    CHECK_FALSE(contains(m, RationalVector{q("23/2")}));
    CHECK_FALSE(contains(m, RationalVector{q("0")}));
    CHECK(contains(m, RationalVector{q("36")}));
    CHECK_FALSE(contains(m, RationalVector{q("37")}));
    CHECK_FALSE(contains(m, RationalVector{q("45/4")}));  // exactly r away: open ball
    CHECK(contains(m, RationalVector{q("1006")}));
    CHECK_FALSE(contains(fixtures::plane_manifest(), RationalVector{q("0"), q("0")}));
    CHECK_THROWS_AS(contains(m, RationalVector{q("1"), q("2")}), ConfigError);
  }

  TEST_CASE("samples lie in the set") {
    for (const auto* m : {&fixtures::line_manifest(), &fixtures::plane_manifest()}) {
      PointSampler s(*m, 11);
      for (int i = 0; i < 300; ++i) {
        const RationalVector p = s.sample(std::nullopt);
        CHECK(contains(*m, p));
      }
    }
    PointSampler s(fixtures::line_manifest(), 3);
    for (int i = 0; i < 200; ++i) {
      const Rational x = s.sample(1)[0];
      CHECK(x > q("43/4"));
      CHECK(x < q("145/4"));
    }
    PointSampler p(fixtures::plane_manifest(), 5);
    for (int i = 0; i < 50; ++i) {
      const RationalVector x = p.sample(2);
      CHECK(eval_exact(NormSpec::l2(2), x) > fixtures::plane_manifest().stages[0].R.scaled(10));
    }
    CHECK_THROWS_AS(p.sample(4), ConfigError);
    CHECK_THROWS_AS(p.sample(0), ConfigError);
  }

  TEST_CASE("sampling replays for a fixed seed") {
    PointSampler a(fixtures::plane_manifest(), 42), b(fixtures::plane_manifest(), 42);
    for (int i = 0; i < 20; ++i) CHECK(a.sample(std::nullopt) == b.sample(std::nullopt));
  }

  TEST_CASE("pair margins") {
    const MarginReport r = pair_margin(fixtures::line_manifest(), {1, 20'000, std::nullopt});
    CHECK(r.pairs == 20'000);
    CHECK(r.predicted == q("1/8"));
    CHECK(r.certified_lower >= r.predicted - Rational(1, 1'000'000'000));
    const MarginReport s1 = pair_margin(fixtures::plane_manifest(), {2, 5'000, 1});
    CHECK(s1.certified_lower >= q("1/2"));
    CHECK_THROWS_AS(pair_margin(fixtures::line_manifest(), {1, 0, std::nullopt}), ConfigError);
  }

  TEST_CASE("Monte Carlo density") {
    const DensityEstimate d = mc_density(fixtures::line_manifest(), 1, {9, 100'000, std::nullopt});
    CHECK(d.exact == ScaleValue::rational(q("13/201")));
    CHECK(d.bound == doctest::Approx(2.0 / 201.0));
    CHECK(std::abs(d.estimate - 13.0 / 201.0) <= 4 * d.standard_error);
    CHECK(d.estimate > d.bound);
    CHECK_THROWS_AS(mc_density(fixtures::line_manifest(), 1, {9, 0, std::nullopt}), ConfigError);
    CHECK_THROWS_AS(mc_density(fixtures::line_manifest(), 3, {9, 10, std::nullopt}), ConfigError);
    const DensityEstimate two = mc_density(fixtures::line_manifest(), 2, {9, 1000, std::nullopt});
    // 13 + 2513 / 8 over 20101
    CHECK(two.exact == ScaleValue::rational(q("2617/160808")));
  }

  TEST_CASE("thickened lattice demo") {
    for (const char* norm : {"linf", "l1"}) {
      const DemoReport r = thickened_lattice_demo(NormSpec::parse(norm, 2), q("1/8"), {1, 10'000, std::nullopt});
      CHECK(r.all_near_integers);
      CHECK(r.min_half_distance >= q("1/4"));
      CHECK(r.guaranteed == q("1/4"));
    }
    CHECK(thickened_lattice_demo(NormSpec::linf(2), q("1/8"), {1, 10, std::nullopt}).cell_density == q("1/16"));
    CHECK(thickened_lattice_demo(NormSpec::l1(2), q("1/8"), {1, 10, std::nullopt}).cell_density == q("1/32"));
    CHECK_THROWS_AS(thickened_lattice_demo(NormSpec::linf(2), q("1/4"), {}), ConfigError);
    CHECK_THROWS_AS(thickened_lattice_demo(NormSpec::l2(2), q("1/8"), {}), ConfigError);
  }

  TEST_CASE("brute force over center pairs") {
    const auto& m = fixtures::line_manifest();
    const BruteReport r1 = brute_pair_check(m, 1);
    CHECK(r1.passed);
    CHECK(r1.differences == 51);
    CHECK(brute_pair_check(m, 2).passed);
    CHECK(brute_pair_check(fixtures::plane_manifest(), 1).passed);
    CHECK_THROWS_AS(brute_pair_check(fixtures::plane_manifest(), 2), BudgetExceeded);

    ConstructionManifest bad = m;
    bad.stages[0].R = ScaleValue::rational(100);
    const BruteReport r = brute_pair_check(bad, 2);
    CHECK_FALSE(r.passed);
    CHECK(r.offending_j == 1);
  }
}
