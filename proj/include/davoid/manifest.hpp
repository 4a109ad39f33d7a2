#pragma once

// Data model of a finite-stage construction and its certification report.

#include <string>
#include <vector>

#include "davoid/fspec.hpp"
#include "davoid/norms.hpp"
#include "davoid/spectrum.hpp"

namespace davoid {

// One block of the construction: the cube L_n = anchor + {0..side}^d of
// lattice points, thickened by open rho-balls of radius ball_radius.
struct Stage {
  int n = 0;
  ScaleValue R;          // avoided distance R_n
  Rational eps;          // eps_n
  Rational eps_prev;     // eps_{n-1}
  IntegerVector anchor;  // t_n
  Integer side{0};       // M_n
  Rational ball_radius;  // eps_{n-1} / 4
  Integer ball_count{0};  // (M_n + 1)^d
  Integer initial_side{0};  // floor(R_n / (4 C_hi)) before any shrinking
  GapCertificate gap;     // evidence for (R_n, gap.eps), gap.eps >= eps_n

  bool shrunk() const { return side != initial_side; }
  friend bool operator==(const Stage&, const Stage&) = default;
};

enum class CheckId {
  Constants,
  GapA,
  GrowthB,
  DensityC,
  CubeFit,
  InnerExclusion,
  BallDisjoint,
  CrossBlockSeparation,
  AvoidanceMargin,
};

std::string to_string(CheckId id);
CheckId parse_check_id(const std::string& text);

struct CheckResult {
  CheckId check = CheckId::Constants;
  int stage = 0;  // 0 for manifest-wide checks
  bool passed = false;
  std::string detail;
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct CertReport {
  std::vector<CheckResult> checks;

  bool certified() const;
  std::string status() const { return certified() ? "certified" : "failed"; }
  std::vector<CheckResult> failures() const;
  friend bool operator==(const CertReport&, const CertReport&) = default;
};

struct ConstructionManifest {
  int dim = 1;
  NormSpec norm;
  FSpec f;
  Rational eps0{1};
  EquivalenceConstants constants;
  ScaleValue s_min;
  std::vector<Stage> stages;
  CertReport certification;

  const Stage& stage(int n) const;
  // R_0 = 1, R_n for n >= 1.
  ScaleValue radius(int n) const;
  // eps_0 for n = 0, eps_n otherwise.
  Rational epsilon(int n) const;

  friend bool operator==(const ConstructionManifest&, const ConstructionManifest&) = default;
};

}  // namespace davoid
