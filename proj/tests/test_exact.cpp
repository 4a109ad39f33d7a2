#include "doctest.h"
#include "davoid/exact.hpp"
#include "fixtures.hpp"

using namespace davoid;
using fixtures::q;

TEST_SUITE("exact") {
  TEST_CASE("rational parsing rejects decimals") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational(" 201/2 ") == Rational(201, 2));
    CHECK_THROWS_AS(parse_rational("0.25"), ConfigError);
    CHECK_THROWS_AS(parse_rational("1e3"), ConfigError);
    CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
    CHECK_THROWS_AS(parse_rational(""), ConfigError);
  }

  TEST_CASE("integers print without a denominator") {
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK(to_string(Rational(-3, 9)) == "-1/3");
  }

  TEST_CASE("floor and ceiling") {
    CHECK(floor_of(q("-1/2")) == -1);
    CHECK(ceil_of(q("-1/2")) == 0);
    CHECK(floor_of(q("7/7")) == 1);
    CHECK(ceil_of(q("7/7")) == 1);
  }

  TEST_CASE("dyadic floor") {
    CHECK(dyadic_floor(q("1")) == 1);
    CHECK(dyadic_floor(q("3/4")) == Rational(1, 2));
    CHECK(dyadic_floor(q("1/3")) == Rational(1, 4));
    CHECK(dyadic_floor(q("5")) == 4);
    CHECK(dyadic_floor(RadicalSum::sqrt_of(2)) == 1);
    CHECK(dyadic_floor(RadicalSum::sqrt_of(q("1/8"))) == Rational(1, 4));
  }

  TEST_CASE("scale values collapse perfect squares") {
    const ScaleValue a = ScaleValue::sqrt(q("9/4"));
    CHECK(a.is_rational());
    CHECK(a.rational_value() == Rational(3, 2));
    CHECK(a.to_string() == "3/2");
    const ScaleValue b = ScaleValue::sqrt(65538);
    CHECK_FALSE(b.is_rational());
    CHECK(b.to_string() == "sqrt:65538");
    CHECK_THROWS_AS(b.rational_value(), Error);
    CHECK(ScaleValue::parse("sqrt:65538") == b);
    CHECK(ScaleValue::parse("sqrt:4") == ScaleValue::rational(2));
    CHECK(b.scaled(2) == ScaleValue::sqrt(4 * 65538));
    CHECK(ScaleValue::rational(256) < b);
    CHECK(b < ScaleValue::rational(257));
  }

  TEST_CASE("sqrt bounds bracket the root") {
    auto [lo, hi] = sqrt_bounds(2, 40);
    CHECK(lo * lo < 2);
    CHECK(hi * hi > 2);
    CHECK(hi - lo <= Rational(1, Integer(1) << 40));
    auto [a, b] = sqrt_bounds(q("9/16"), 10);
    CHECK(a == Rational(3, 4));
    CHECK(b == Rational(3, 4));
  }

  TEST_CASE("signs of radical sums") {
    // sqrt(2) + sqrt(3) - sqrt(10) < 0 (3.146 < 3.162)
    CHECK(sign(RadicalSum::sqrt_of(2) + RadicalSum::sqrt_of(3) - RadicalSum::sqrt_of(10)) == -1);
    // sqrt(8) - 2 sqrt(2) = 0
    CHECK(sign(RadicalSum::sqrt_of(8) - RadicalSum::sqrt_of(2, 2)) == 0);
    // 1/2 * sqrt(65538) - 128 > 0
    CHECK(is_positive(RadicalSum::sqrt_of(65538, q("1/2")) - RadicalSum(Rational(128))));
    // sqrt(65537) - sqrt(65538) + 1/512 > 0 (difference is about 1/512.0039)
    CHECK(sign(RadicalSum::sqrt_of(65537) - RadicalSum::sqrt_of(65538) + RadicalSum(q("1/512"))) == 1);
    CHECK(sign(RadicalSum::sqrt_of(65537) - RadicalSum::sqrt_of(65538) + RadicalSum(q("1/513"))) == -1);
  }

  TEST_CASE("floor of a radical sum") {
    CHECK(floor_of(RadicalSum::sqrt_of(65538)) == 256);
    CHECK(ceil_of(RadicalSum::sqrt_of(65538)) == 257);
    CHECK(floor_of(RadicalSum::sqrt_of(65536)) == 256);
    CHECK(floor_of(-RadicalSum::sqrt_of(2)) == -2);
  }
}
