#include <algorithm>

#include "doctest.h"
#include "davoid/certify.hpp"
#include "fixtures.hpp"
#include "mutations.hpp"

using namespace davoid;
using fixtures::q;

namespace {

bool fails(const CertReport& r, CheckId id) {
  return std::any_of(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.check == id && !c.passed; });
}

}  // namespace

TEST_SUITE("certify") {
  TEST_CASE("built manifests certify in both modes") {
    for (const auto* m : {&fixtures::line_manifest(), &fixtures::plane_manifest()}) {
      const CertReport shallow = certify(*m);
      const CertReport deep = certify(*m, {true, {}});
      CHECK(shallow.certified());
      CHECK(deep.certified());
      CHECK(shallow.status() == "certified");
      CHECK(shallow == certify(*m));  // deterministic
    }
  }

  TEST_CASE("every check id appears") {
    const CertReport r = certify(fixtures::line_manifest());
    for (CheckId id : {CheckId::Constants, CheckId::GapA, CheckId::GrowthB, CheckId::DensityC, CheckId::CubeFit,
                       CheckId::InnerExclusion, CheckId::BallDisjoint, CheckId::CrossBlockSeparation,
                       CheckId::AvoidanceMargin}) {
      CHECK(std::any_of(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.check == id; }));
      CHECK(parse_check_id(to_string(id)) == id);
    }
  }

  TEST_CASE("mutation corpus is rejected by the intended check") {
    for (const auto* base : {&fixtures::line_manifest(), &fixtures::plane_manifest()}) {
      for (const auto& mut : mutations::corpus(*base)) {
        CAPTURE(mut.name);
        const CertReport r = certify(mut.manifest);
        CHECK_FALSE(r.certified());
        CHECK(fails(r, mut.expected));
        CHECK_FALSE(certify(mut.manifest, {true, {}}).certified());
      }
    }
  }

  TEST_CASE("condition (a) reports the offending lattice vector") {
    ConstructionManifest m = fixtures::line_manifest();
    m.stages[0].R = ScaleValue::rational(100);
    m.stages[0].gap.R = m.stages[0].R;
    const CheckOutcome o = check_condition_a(m, 1);
    CHECK_FALSE(o.passed);
    REQUIRE(o.violating_vector);
    CHECK(*o.violating_vector == std::vector<Integer>{100});
    CHECK(check_condition_a(fixtures::line_manifest(), 2).passed);
  }

  TEST_CASE("growth") {
    CHECK(check_growth(fixtures::line_manifest()).passed);
    ConstructionManifest m = fixtures::line_manifest();
    m.stages[1].R = m.stages[0].R.scaled(99);
    const CheckOutcome o = check_growth(m);
    CHECK_FALSE(o.passed);
    CHECK(o.stage == 2);
    ConstructionManifest empty = m;
    empty.stages.clear();
    CHECK_FALSE(check_growth(empty).passed);
    CHECK_FALSE(certify(empty).certified());
  }

  TEST_CASE("density report") {
    const DensityReport r = check_density(fixtures::line_manifest());
    CHECK(r.passed);
    REQUIRE(r.stages.size() == 2);
    CHECK(r.stages[0].lhs == q("13/2"));
    CHECK(r.stages[0].slack == doctest::Approx(6.5));
    CHECK(r.stages[0].set_volume == doctest::Approx(13.0));
    CHECK(r.stages[0].ball_volume == doctest::Approx(201.0));
    CHECK_FALSE(r.stages[0].volumes_estimated);
    const DensityReport poly =
        check_density(build(NormSpec::parse("poly:[(1,0),(0,1),(1/2,1/2)]", 2), FSpec::inv_poly(1), 1));
    CHECK(poly.passed);
    CHECK(poly.stages[0].volumes_estimated);
  }

  TEST_CASE("density requires disjoint balls") {
    ConstructionManifest m = fixtures::line_manifest();
    m.stages[0].ball_radius = 1;
    const DensityReport r = check_density(m);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.stages[0].passed);
  }

  TEST_CASE("cube fit and inner exclusion separately") {
    const CubeFitOutcome ok = check_cube_fit(fixtures::plane_manifest(), 2);
    CHECK(ok.passed());
    ConstructionManifest m = fixtures::plane_manifest();
    m.stages[1].anchor = {Integer(0), Integer(0)};
    const CubeFitOutcome inner = check_cube_fit(m, 2);
    CHECK(inner.outer);
    CHECK_FALSE(inner.inner);
    // A box straddling the origin has q = 0.
    m.stages[1].anchor = {Integer(-5), Integer(-5)};
    CHECK_FALSE(check_cube_fit(m, 2).inner);
    ConstructionManifest far = fixtures::plane_manifest();
    far.stages[0].anchor = {Integer(200), Integer(0)};
    const CubeFitOutcome outer = check_cube_fit(far, 1);
    CHECK_FALSE(outer.outer);
    CHECK(outer.inner);
  }

  TEST_CASE("avoidance margins") {
    const AvoidanceReport r = check_avoidance(fixtures::line_manifest());
    CHECK(r.passed);
    bool saw_gap = false;
    for (const Margin& mg : r.margins) {
      if (mg.kind == "gap") {
        CHECK(mg.n == 2);
        CHECK(mg.j == 1);
        CHECK(mg.lower_bound == q("1/8"));  // 1/4 - 2 * 1/16
        saw_gap = true;
      }
      CHECK(mg.lower_bound >= 0);
    }
    CHECK(saw_gap);
    ConstructionManifest m = fixtures::line_manifest();
    m.stages[1].anchor = {Integer(30)};  // overlaps the first block's distance range
    CHECK_FALSE(check_avoidance(m).passed);
  }

  TEST_CASE("ball disjointness checks eps bookkeeping") {
    ConstructionManifest m = fixtures::line_manifest();
    CHECK(check_ball_disjoint(m, 2).passed);
    m.stages[1].eps_prev = q("1/2");
    CHECK_FALSE(check_ball_disjoint(m, 2).passed);
    CHECK_FALSE(check_ball_disjoint(m, 7).passed);
  }

  TEST_CASE("constants") {
    CHECK(check_constants(fixtures::plane_manifest()).passed);
    ConstructionManifest m = fixtures::plane_manifest();
    m.constants.C_hi = q("1/2");
    CHECK_FALSE(check_constants(m).passed);
    m = fixtures::plane_manifest();
    m.s_min = ScaleValue::rational(2);
    CHECK_FALSE(check_constants(m).passed);
    m = fixtures::plane_manifest();
    m.norm = NormSpec::parse("lp:3", 2);
    CHECK_FALSE(check_constants(m).passed);
  }
}
