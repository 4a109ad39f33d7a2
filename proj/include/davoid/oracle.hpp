#pragma once

// Randomized, construction-independent evidence about a built set: exact
// membership, uniform sampling, pairwise distance margins, Monte Carlo
// density, and the thickened-lattice example for l1 / l-infinity.
//
// Sampling is evidence only. The universally quantified statements about all
// pairs of points are proved by certify; nothing here can certify a manifest.

#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "davoid/manifest.hpp"

namespace davoid {

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 10'000;
  std::optional<int> stage;  // restrict to one block
};

// y lies in some block P_n: rho(x - y) < eps_{n-1} / 4 for an x in L_n.
bool contains(const ConstructionManifest& m, std::span<const Rational> y);

// Deterministic stream of exact sample points.
class PointSampler {
 public:
  PointSampler(const ConstructionManifest& m, std::uint64_t seed);

  // Uniform point of P_n: a uniform center, then a uniform offset in the ball
  // by rejection from its bounding box. Throws ConfigError for a bad stage and
  // BudgetExceeded when rejection keeps failing.
  RationalVector sample(int n);
  // Block chosen uniformly among the stages (or the configured one).
  RationalVector sample(const std::optional<int>& stage);
  // Uniform point of the open rho-ball of the given radius around 0.
  RationalVector in_ball(const Rational& radius);

 private:
  Integer uniform_integer(const Integer& upper);  // in [0, upper]
  Rational uniform_unit();                        // dyadic in (0, 1)

  const ConstructionManifest& m_;
  std::mt19937_64 rng_;
};

struct MarginReport {
  std::uint64_t pairs = 0;
  Rational certified_lower;  // min over pairs and j of a lower bound on |rho(x - y) - R_j|
  double observed = 0.0;     // the same minimum in floating point
  int worst_j = 0;
  // min over stages of eps_{n-1} / 2, the predicted floor.
  Rational predicted;
};

MarginReport pair_margin(const ConstructionManifest& m, const SamplerConfig& config);

struct DensityEstimate {
  int n = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  // sum_{m <= n} N_m r_m^d / R_n^d: blocks are disjoint and every block up to
  // n lies inside B(R_n), every later one outside.
  ScaleValue exact;
  double bound = 0.0;  // f(R_n)
};

DensityEstimate mc_density(const ConstructionManifest& m, int n, const SamplerConfig& config);

struct DemoReport {
  std::uint64_t pairs = 0;
  bool all_near_integers = false;  // every distance within 2t of an integer
  Rational min_half_distance;      // least distance to a half-integer seen
  Rational guaranteed;             // 1/2 - 2t
  Rational cell_density;           // volume of Z^d + B(t) per unit cell
};

// Z^d thickened by open rho-balls of radius t, for l1 or l-infinity.
DemoReport thickened_lattice_demo(const NormSpec& norm, const Rational& t, const SamplerConfig& config);

struct BruteReport {
  bool passed = false;
  std::uint64_t differences = 0;
  std::optional<IntegerVector> offending;
  int offending_j = 0;
  std::string detail;
};

// Every pair of centers of L_n: the interval rho(u - v) +- eps_{n-1} / 2 must
// miss every R_j. Throws BudgetExceeded when (2 M_n + 1)^d exceeds the budget.
BruteReport brute_pair_check(const ConstructionManifest& m, int n, std::uint64_t budget = 4'000'000);

}  // namespace davoid
