#pragma once

// Representability of integers as sums of d squares, with checkable
// evidence for the negative answers.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "davoid/exact.hpp"

namespace davoid {

inline constexpr std::uint64_t kDefaultFactorBudget = 1u << 18;

enum class Representability { Representable, NotRepresentable, Unknown };

// Evidence that k is not a sum of d squares.
//   d = 1: none needed (k is not a perfect square).
//   d = 2: a cofactor m with m | k, gcd(m, k/m) = 1 and m = 3 (mod 4); some
//          prime 3 (mod 4) then divides k to an odd power.
//   d = 3: the exponent a in k = 4^a (8b + 7).
struct NonRepresentabilityWitness {
  Integer cofactor{0};
  unsigned long four_power = 0;
  friend bool operator==(const NonRepresentabilityWitness&, const NonRepresentabilityWitness&) = default;
};

struct SumOfSquaresVerdict {
  Representability verdict = Representability::Unknown;
  NonRepresentabilityWitness witness;
};

// Never throws on budget: d = 2 inputs whose factorization does not finish
// within `factor_budget` Pollard-rho steps come back Unknown.
SumOfSquaresVerdict classify_sum_of_squares(int d, const Integer& k,
                                            std::uint64_t factor_budget = kDefaultFactorBudget);

// True iff k is a sum of d integer squares. Throws BudgetExceeded when d = 2
// and the factorization budget runs out.
bool representable(int d, const Integer& k, std::uint64_t factor_budget = kDefaultFactorBudget);

// Pure arithmetic check of a stored witness.
bool check_witness(int d, const Integer& k, const NonRepresentabilityWitness& w);

// Prime factorization (probable primes for large factors). nullopt when the
// Pollard-rho budget is exhausted.
std::optional<std::vector<std::pair<Integer, unsigned>>> factorize(const Integer& n,
                                                                   std::uint64_t budget);

// Some v in Z^d with |v|^2 = k, searched within `budget` steps.
std::optional<IntegerVector> find_decomposition(int d, const Integer& k, std::uint64_t budget = 1u << 22);

}  // namespace davoid
