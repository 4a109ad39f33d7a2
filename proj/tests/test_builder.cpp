#include "doctest.h"
#include "davoid/builder.hpp"
#include "fixtures.hpp"

using namespace davoid;
using fixtures::q;

TEST_SUITE("builder") {
  TEST_CASE("one-dimensional worked example") {
    const auto& m = fixtures::line_manifest();
    REQUIRE(m.stages.size() == 2);
    CHECK(m.eps0 == 1);
    const Stage& s1 = m.stages[0];
    CHECK(s1.R == ScaleValue::rational(q("201/2")));
    CHECK(s1.eps == q("1/4"));
    CHECK(s1.anchor == IntegerVector{11});
    CHECK(s1.side == 25);
    CHECK(s1.ball_count == 26);
    CHECK(s1.ball_radius == q("1/4"));
    CHECK(s1.ball_count * 2 * s1.ball_radius == 13);  // total length of P_1
    CHECK_FALSE(s1.shrunk());
    const Stage& s2 = m.stages[1];
    CHECK(s2.R == ScaleValue::rational(q("20101/2")));
    CHECK(s2.eps == q("1/4"));
    CHECK(s2.anchor == IntegerVector{1006});
    CHECK(s2.side == 2512);
    CHECK(s2.ball_radius == q("1/16"));
    CHECK(m.certification.certified());
  }

  TEST_CASE("planar construction") {
    const auto& m = fixtures::plane_manifest();
    REQUIRE(m.stages.size() == 3);
    const Stage& s1 = m.stages[0];
    CHECK(s1.R == ScaleValue::sqrt(65538));
    CHECK(s1.R >= ScaleValue::rational(256));
    CHECK(s1.R <= ScaleValue::rational(300));
    CHECK(s1.eps == q("1/2048"));
    CHECK(s1.anchor == IntegerVector{11, 0});
    CHECK(s1.side == 64);
    CHECK(s1.ball_count == 4225);
    const Stage& s2 = m.stages[1];
    CHECK(s2.R == ScaleValue::sqrt((Integer(1) << 60) + 2));
    CHECK(s2.eps == Rational(1, Integer(1) << 33));
    CHECK(s2.ball_radius == q("1/8192"));
    CHECK(s2.anchor == IntegerVector{2562, 0});
    const Stage& s3 = m.stages[2];
    CHECK(s3.R >= s2.R.scaled(100));
    CHECK(s3.eps <= s2.eps);
    CHECK(m.certification.certified());
  }

  TEST_CASE("initial epsilon") {
    CHECK(initial_epsilon(ScaleValue::rational(1)) == 1);
    CHECK(initial_epsilon(ScaleValue::sqrt(2)) == 1);
    CHECK(initial_epsilon(ScaleValue::rational(q("1/3"))) == q("1/4"));
    CHECK(initial_epsilon(ScaleValue::rational(q("1/2"))) == q("1/2"));
  }

  TEST_CASE("cube placement") {
    const NormSpec l2 = NormSpec::l2(2);
    const auto consts = equivalence_constants(l2);
    const auto fits = place_cube(l2, consts, ScaleValue::rational(1000), ScaleValue::rational(1), 250, 1, q("1/4"));
    CHECK(fits.fits);
    CHECK(fits.anchor == IntegerVector{11, 0});
    const auto too_big = place_cube(l2, consts, ScaleValue::rational(1000), ScaleValue::rational(1), 400, 1, q("1/4"));
    CHECK_FALSE(too_big.fits);
    // c_lo < 1 pushes the anchor out: (10 + 1) / (11585/16384) = 15.55...
    const NormSpec linf = NormSpec::linf(2);
    const auto a = place_cube(linf, equivalence_constants(linf), ScaleValue::rational(1000), ScaleValue::rational(1), 1,
                              1, q("1/4"));
    CHECK(a.anchor == IntegerVector{16, 0});
  }

  TEST_CASE("planning a single stage") {
    PlanContext ctx{NormSpec::l2(1), FSpec::inv_poly(1), {1, 1}, ScaleValue::rational(1), 1, {}};
    const Stage s = plan_stage(ctx, StageSeed{0, ScaleValue::rational(1), 1});
    CHECK(s.n == 1);
    CHECK(s.R == ScaleValue::rational(q("201/2")));
    const Stage t = plan_stage(ctx, StageSeed{1, s.R, s.eps});
    CHECK(t.n == 2);
    CHECK(t.R == ScaleValue::rational(q("20101/2")));
  }

  TEST_CASE("shrinking the cube") {
    const auto m = build(NormSpec::l2(4), FSpec::inv_poly(2), 1);
    const Stage& s = m.stages[0];
    CHECK(s.shrunk());
    CHECK(s.initial_side == 128);
    CHECK(s.side == 125);
  }

  TEST_CASE("other norms and decay functions certify") {
    CHECK(build(NormSpec::l1(2), FSpec::inv_poly(1), 2).certification.certified());
    CHECK(build(NormSpec::linf(2), FSpec::inv_poly(q("1/2")), 2).certification.certified());
    CHECK(build(NormSpec::l2(3), FSpec::inv_poly(1), 2).certification.certified());
    CHECK(build(NormSpec::parse("poly:[(1,0),(0,1),(1/2,1/2)]", 2), FSpec::inv_poly(1), 2).certification.certified());
    CHECK(build(NormSpec::l2(1), FSpec::inv_log(), 2).certification.certified());
    CHECK(build(NormSpec::l2(2), FSpec::parse("step_table:(10,1/2),(100,1/100),(1000,0)"), 2)
              .certification.certified());
  }

  TEST_CASE("invalid requests") {
    CHECK_THROWS_AS(build(NormSpec::l2(2), FSpec::inv_poly(1), 0), ConfigError);
    CHECK_THROWS_AS(build(NormSpec::parse("lp:3", 2), FSpec::inv_poly(1), 1), NotExact);
    CHECK_THROWS_AS(build(NormSpec::l2(2), FSpec::parse("step_table:(1,1)"), 1), ConfigError);
  }

  TEST_CASE("deterministic") {
    CHECK(build(NormSpec::l2(2), FSpec::inv_poly(1), 2) == build(NormSpec::l2(2), FSpec::inv_poly(1), 2));
  }
}
