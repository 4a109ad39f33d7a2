#pragma once

// The lattice distance spectrum rho(Z^d): complete windows by enumeration,
// and certified gaps (R - eps, R + eps) free of lattice values.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "davoid/norms.hpp"
#include "davoid/sum_of_squares.hpp"

namespace davoid {

struct Budgets {
  std::uint64_t enumeration = 4'000'000;  // lattice points per enumeration
  std::uint64_t factor = kDefaultFactorBudget;  // Pollard-rho steps per integer
  std::uint64_t scan = 4096;  // integers scanned per Euclidean gap search
};

struct SpectrumEntry {
  ScaleValue value;
  std::vector<long> witness;  // some v in Z^d with rho(v) = value
};

struct SpectrumWindow {
  ScaleValue from;
  ScaleValue to;
  std::vector<SpectrumEntry> values;  // strictly increasing
  // Euclidean shell that was enumerated: from/C_hi <= |v|_2 <= to/c_lo.
  Rational shell_min_sq;
  Rational shell_max_sq;
  std::uint64_t examined = 0;
};

// Complete sorted spectrum on [from, to]. Throws BudgetExceeded when the
// Euclidean shell holds more than budget points.
SpectrumWindow spectrum_window(const NormSpec& norm, const ScaleValue& from, const ScaleValue& to,
                               std::uint64_t budget);

struct EuclideanWitness {
  Integer k;  // an integer strictly inside ((R - eps)^2, (R + eps)^2)
  NonRepresentabilityWitness witness;
  friend bool operator==(const EuclideanWitness&, const EuclideanWitness&) = default;
};

// Exact evidence that no lattice rho-value lies in (R - eps, R + eps).
struct GapCertificate {
  enum class Evidence {
    Euclidean,   // l2: every integer square in the window is non-representable
    Enumerated,  // the window [R - eps, R + eps] was enumerated and is empty
    Grid,        // all values lie in (1/L)Z and the window holds no multiple of 1/L
  };
  ScaleValue R;
  Rational eps;
  Evidence evidence = Evidence::Euclidean;
  std::vector<EuclideanWitness> witnesses;  // Euclidean
  Integer grid_denominator{1};              // Grid
  std::uint64_t enumerated = 0;             // Enumerated: points examined

  friend bool operator==(const GapCertificate&, const GapCertificate&) = default;
};

std::string to_string(GapCertificate::Evidence e);
GapCertificate::Evidence parse_evidence(const std::string& text);

// Smallest admissible R >= lower with the largest power-of-two eps not
// exceeding half the distance from R to the nearest spectrum value.
GapCertificate find_gap(const NormSpec& norm, const ScaleValue& lower, const Budgets& budgets = {});

enum class VerifyMode {
  Witnesses,  // arithmetic re-check of the stored evidence
  Rederive,   // ignore stored witnesses and decide every value from scratch
};

struct GapVerdict {
  bool ok = false;
  std::string reason;
  // A lattice vector with rho inside the window, when one was found.
  std::optional<std::vector<Integer>> violating_vector;
  // For Euclidean evidence: an integer k = |v|^2 inside the squared window
  // that is representable (or could not be shown non-representable).
  std::optional<Integer> violating_square;
};

GapVerdict verify_gap(const NormSpec& norm, const GapCertificate& cert, const Budgets& budgets = {},
                      VerifyMode mode = VerifyMode::Rederive);

}  // namespace davoid
