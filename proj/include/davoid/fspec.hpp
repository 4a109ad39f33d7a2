#pragma once

// Decay functions f with computable tail thresholds.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "davoid/exact.hpp"

namespace davoid {

class FSpec {
 public:
  enum class Family { InvPoly, InvLog, StepTable };

  // f(R) = min(1, R^-alpha), alpha > 0.
  static FSpec inv_poly(const Rational& alpha);
  // f(R) = min(1, 1 / ln(e + R)).
  static FSpec inv_log();
  // f(R) = 1 below the first scale, value_i on [R_i, R_{i+1}), and the last
  // value from the last scale on. Scales strictly increase, values are in
  // [0, 1] and non-increasing.
  static FSpec step_table(std::vector<std::pair<Rational, Rational>> table);

  // `inv_poly:<alpha>`, `inv_log`, `step_table:(R1,v1),(R2,v2),...`.
  static FSpec parse(std::string_view text);
  std::string to_string() const;

  Family family() const { return family_; }
  const Rational& alpha() const { return alpha_; }
  const std::vector<std::pair<Rational, Rational>>& table() const { return table_; }

  bool tends_to_zero() const;
  double approx(double R) const;

  friend bool operator==(const FSpec& a, const FSpec& b) { return a.to_string() == b.to_string(); }

 private:
  Family family_ = Family::InvPoly;
  Rational alpha_{1};
  std::vector<std::pair<Rational, Rational>> table_;
};

// Least supported scale T with f(R) <= delta for every R >= T, rounded
// outward to a rational. Throws ConfigError when delta <= 0 or when f never
// gets that small, BudgetExceeded when T is astronomically large.
ScaleValue threshold(const FSpec& f, const Rational& delta);

// Exact decision of lhs >= f(R) * R^d (lhs >= 0). Transcendental families
// use directed-rounding bounds and answer false unless the bound proves it.
bool density_bound_holds(const FSpec& f, const ScaleValue& R, int d, const Rational& lhs);

// lhs / (f(R) R^d), for reports.
double density_slack(const FSpec& f, const ScaleValue& R, int d, const Rational& lhs);

}  // namespace davoid
