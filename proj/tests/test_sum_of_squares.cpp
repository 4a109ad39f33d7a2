#include <set>
#include <vector>

#include "doctest.h"
#include "davoid/sum_of_squares.hpp"

using namespace davoid;

namespace {

// All k <= limit that are sums of d squares, by exhaustive search.
std::vector<bool> brute_sums(int d, int limit) {
  std::vector<bool> hit(limit + 1, false);
  std::vector<int> squares;
  for (int a = 0; a * a <= limit; ++a) squares.push_back(a * a);
  std::vector<bool> cur(limit + 1, false);
  cur[0] = true;
  for (int i = 0; i < d; ++i) {
    std::vector<bool> next(limit + 1, false);
    for (int s = 0; s <= limit; ++s) {
      if (!cur[s]) continue;
      for (int sq : squares) {
        if (s + sq > limit) break;
        next[s + sq] = true;
      }
    }
    cur = next;
  }
  return cur;
}

}  // namespace

TEST_SUITE("sum_of_squares") {
  TEST_CASE("small values") {
    CHECK_FALSE(representable(2, 3));
    CHECK(representable(2, 25));
    CHECK_FALSE(representable(2, 99));
    CHECK_FALSE(representable(3, 7));
    CHECK(representable(3, 6));
    CHECK_FALSE(representable(3, 28));
    CHECK(representable(4, 7));
    CHECK(representable(1, 0));
    CHECK_FALSE(representable(1, 2));
    CHECK_FALSE(representable(2, 65538));
    CHECK(representable(2, 65537));
  }

  TEST_CASE("agrees with exhaustive search up to 2500") {
    for (int d = 1; d <= 4; ++d) {
      const auto truth = brute_sums(d, 2500);
      for (int k = 0; k <= 2500; ++k) {
        const auto v = classify_sum_of_squares(d, k);
        REQUIRE(v.verdict != Representability::Unknown);
        CHECK_MESSAGE((v.verdict == Representability::Representable) == truth[k], "d=" << d << " k=" << k);
        if (v.verdict == Representability::NotRepresentable) CHECK(check_witness(d, k, v.witness));
      }
    }
  }

  TEST_CASE("witness shapes") {
    const auto two = classify_sum_of_squares(2, 65538);
    REQUIRE(two.verdict == Representability::NotRepresentable);
    const Integer m = two.witness.cofactor;
    CHECK(m % 4 == 3);
    CHECK(65538 % m == 0);
    CHECK(gcd(m, Integer(65538 / m)) == 1);

    const auto three = classify_sum_of_squares(3, 4 * 4 * 15);
    REQUIRE(three.verdict == Representability::NotRepresentable);
    CHECK(three.witness.four_power == 2);

    // A bogus witness is rejected.
    CHECK_FALSE(check_witness(2, 65538, NonRepresentabilityWitness{Integer(7), 0}));
    CHECK_FALSE(check_witness(2, 25, NonRepresentabilityWitness{Integer(3), 0}));
    CHECK_FALSE(check_witness(3, 15, NonRepresentabilityWitness{Integer(0), 1}));
  }

  TEST_CASE("large inputs") {
    const Integer k = (Integer(1) << 60) + 2;
    CHECK_FALSE(representable(2, k));
    CHECK(representable(2, (Integer(1) << 60) + 1));
    CHECK_FALSE(representable(3, (Integer(1) << 24) + 7));
  }

  TEST_CASE("factorization budget exhaustion is reported, not guessed") {
    // Product of two primes that are 1 mod 4 and far beyond trial division.
    const Integer p("1073741833");  // 2^30 + 9, prime, 1 mod 4
    const Integer q("1073741857");  // 2^30 + 33, prime, 1 mod 4
    const auto v = classify_sum_of_squares(2, p * q, 1);
    CHECK(v.verdict == Representability::Unknown);
    CHECK_THROWS_AS(representable(2, p * q, 1), BudgetExceeded);
    CHECK(representable(2, p * q));
  }

  TEST_CASE("factorize and decompose") {
    const auto f = factorize(Integer(65538), 1 << 16);
    REQUIRE(f);
    Integer prod = 1;
    for (const auto& [prime, e] : *f) {
      for (unsigned i = 0; i < e; ++i) prod *= prime;
    }
    CHECK(prod == 65538);
    CHECK(f->size() == 4);
    for (int d = 2; d <= 4; ++d) {
      for (int k : {1, 2, 5, 25, 50, 65, 325, 1000}) {
        if (!representable(d, k)) continue;
        const auto v = find_decomposition(d, k);
        REQUIRE(v);
        Integer s = 0;
        for (const auto& x : *v) s += x * x;
        CHECK(s == k);
      }
    }
  }
}
