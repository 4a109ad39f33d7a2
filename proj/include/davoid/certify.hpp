#pragma once

// Independent re-verification of a construction manifest. Nothing here calls
// into the planner; every condition is re-derived from the stored numbers.

#include <optional>
#include <string>
#include <vector>

#include "davoid/manifest.hpp"

namespace davoid {

struct CertifyOptions {
  // Re-decide every gap from scratch instead of re-checking stored witnesses.
  bool deep = false;
  Budgets budgets;
};

struct CheckOutcome {
  bool passed = false;
  int stage = 0;
  std::string detail;
  // A lattice vector with rho(v) inside a claimed gap, when one exists.
  std::optional<std::vector<Integer>> violating_vector;
};

// Stored constants are sound (c_lo no larger, C_hi no smaller than the
// recomputed ones) and s_min matches.
CheckOutcome check_constants(const ConstructionManifest& m);

// No lattice rho-value lies in (R_j - eps_n, R_j + eps_n) for j <= n.
CheckOutcome check_condition_a(const ConstructionManifest& m, int n, const CertifyOptions& opts = {});

// R_n >= 100 R_{n-1} for every stage (R_0 = 1).
CheckOutcome check_growth(const ConstructionManifest& m);

struct DensityStage {
  int n = 0;
  bool passed = false;
  Rational lhs;   // N_n * r_n^d
  double slack = 0.0;  // lhs / (f(R_n) R_n^d)
  // Absolute volumes mu(P_n) and mu(B(R_n)); exact closed forms or estimates.
  double set_volume = 0.0;
  double ball_volume = 0.0;
  bool volumes_estimated = false;
  std::string detail;
};

struct DensityReport {
  bool passed = false;
  std::vector<DensityStage> stages;
};

// N_n r_n^d >= f(R_n) R_n^d; needs disjoint balls in every stage.
DensityReport check_density(const ConstructionManifest& m);

// 2 r_n <= s_min and r_n = eps_{n-1} / 4 with eps_{n-1} the previous stage's eps.
CheckOutcome check_ball_disjoint(const ConstructionManifest& m, int n);

struct CubeFitOutcome {
  bool outer = false;  // rho(w) + r_n < R_n / 2 at every cube vertex
  bool inner = false;  // c_lo |q_n| >= 10 R_{n-1} + r_n, q_n the box point nearest 0
  std::string detail;
  bool passed() const { return outer && inner; }
};

CubeFitOutcome check_cube_fit(const ConstructionManifest& m, int n);

struct Margin {
  int n = 0;  // block
  int j = 0;  // avoided distance R_j
  std::string kind;  // "gap", "diameter" or "cross-block"
  int m = 0;  // second block for cross-block margins
  Rational lower_bound;  // a certified lower bound of the margin
};

struct AvoidanceReport {
  bool passed = false;
  std::vector<Margin> margins;
  std::vector<CheckOutcome> failures;
};

// Within a block: |rho(x - y) - R_j| >= margin for j < n, rho(x - y) < R_j for
// j >= n. Across blocks m < n: every R_j lies outside the interval of possible
// distances.
AvoidanceReport check_avoidance(const ConstructionManifest& m, const CertifyOptions& opts = {});

// Runs every check in a fixed order. Deterministic for a given manifest.
CertReport certify(const ConstructionManifest& m, const CertifyOptions& opts = {});

}  // namespace davoid
