#pragma once

// Stage-by-stage construction of a set that avoids a growing sequence of
// distances R_1 < R_2 < ... while keeping density at least f(R_n) in B(R_n).

#include <optional>

#include "davoid/manifest.hpp"

namespace davoid {

struct BuildOptions {
  Budgets budgets;
  // How often a stage may push its lower bound up after a failed density test.
  int max_escalations = 64;
};

// Everything a stage needs from the construction so far.
struct PlanContext {
  NormSpec norm;
  FSpec f;
  EquivalenceConstants constants;
  ScaleValue s_min;
  Rational eps0;
  BuildOptions options;
};

// (R_n, eps_n) of the last completed stage; n = 0 is the initial state
// R_0 = 1, eps_0.
struct StageSeed {
  int n = 0;
  ScaleValue R = ScaleValue::rational(1);
  Rational eps;
};

// eps_0 = min(1, largest power of two <= s_min).
Rational initial_epsilon(const ScaleValue& s_min);

struct Placement {
  bool fits = false;
  IntegerVector anchor;
};

// Anchor t = (a, 0, ..., 0) with a the least integer such that
// c_lo * a >= 10 R_prev + eps0; fits when every vertex w of t + [0, M]^d has
// rho(w) + ball_radius < R_n / 2.
Placement place_cube(const NormSpec& norm, const EquivalenceConstants& consts, const ScaleValue& R_n,
                     const ScaleValue& R_prev, const Integer& M, const Rational& eps0,
                     const Rational& ball_radius);

// Plans stage prev.n + 1. Throws Error when no admissible stage is found
// within the escalation limit, BudgetExceeded from the gap search.
Stage plan_stage(const PlanContext& ctx, const StageSeed& prev);

// Builds and certifies `stages` stages. Throws ConfigError on invalid input
// and Error when the result does not certify.
ConstructionManifest build(const NormSpec& norm, const FSpec& f, int stages,
                           const BuildOptions& options = {});

}  // namespace davoid
