#pragma once

// Norms on R^d: l^p norms and symmetric polytope norms max_i |a_i . x|.
// Exact evaluation for p in {1, 2, inf} and rational polytopes; enclosures
// for the remaining exponents.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "davoid/exact.hpp"

namespace davoid {

class NormSpec {
 public:
  enum class Kind { Lp, Polytope };

  // The Euclidean norm on R^1.
  NormSpec() = default;

  static NormSpec l1(int dim);
  static NormSpec l2(int dim);
  static NormSpec linf(int dim);
  // Finite exponent p >= 1.
  static NormSpec lp(int dim, const Rational& p);
  // Functionals must span R^d.
  static NormSpec polytope(int dim, std::vector<RationalVector> functionals);

  // `l1`, `l2`, `linf`, `lp:<p>`, `poly:[(a11,a12,...),(a21,...),...]`.
  static NormSpec parse(std::string_view text, int dim);
  std::string to_string() const;

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  bool is_infinity() const { return kind_ == Kind::Lp && infinite_; }
  // Finite exponent; throws for polytopes and l-infinity.
  const Rational& exponent() const;
  bool is_l1() const { return kind_ == Kind::Lp && !infinite_ && p_ == 1; }
  bool is_l2() const { return kind_ == Kind::Lp && !infinite_ && p_ == 2; }
  bool is_linf() const { return is_infinity(); }

  // True for p in {1, 2, inf} and polytopes.
  bool exact_capable() const;

  const std::vector<RationalVector>& functionals() const { return functionals_; }

  // For norms whose values on Z^d lie in (1/L)Z: l1, linf (L = 1), polytopes
  // (L = lcm of all functional denominators) and l2 in one dimension.
  bool has_value_grid() const;
  const Integer& grid_denominator() const;
  // Polytope rows scaled by the grid denominator (integral).
  const std::vector<IntegerVector>& scaled_functionals() const { return scaled_; }

  friend bool operator==(const NormSpec& a, const NormSpec& b) {
    return a.to_string() == b.to_string() && a.dim_ == b.dim_;
  }

 private:
  NormSpec(int dim, Kind kind) : dim_(dim), kind_(kind) {}
  void finish_polytope();

  int dim_ = 1;
  Kind kind_ = Kind::Lp;
  bool infinite_ = false;
  Rational p_{2};
  std::vector<RationalVector> functionals_;
  std::vector<IntegerVector> scaled_;
  Integer grid_{1};
};

// Value of a norm at a point: exact for exact-capable norms, otherwise a
// guaranteed enclosure [lo, hi] narrower than the requested width.
struct NormValue {
  bool exact = false;
  ScaleValue value;  // meaningful when exact
  Rational lo;
  Rational hi;
};

NormValue eval_norm(const NormSpec& norm, std::span<const Rational> x,
                    const Rational& width = Rational(1, 1 << 20));

// Exact value; throws NotExact for general exponents.
ScaleValue eval_exact(const NormSpec& norm, std::span<const Rational> x);
ScaleValue eval_exact(const NormSpec& norm, std::span<const Integer> x);
// Small-coordinate lattice fast path.
ScaleValue eval_lattice(const NormSpec& norm, std::span<const long> v);

// Floating evaluation for estimates only.
double eval_approx(const NormSpec& norm, std::span<const double> x);

// Exact three-way comparison of rho(x) with t.
std::strong_ordering compare_norm_to(const NormSpec& norm, std::span<const Rational> x,
                                     const ScaleValue& t);

// c_lo |x|_2 <= rho(x) <= C_hi |x|_2, both rational and outward-rounded.
struct EquivalenceConstants {
  Rational c_lo;
  Rational C_hi;
  friend bool operator==(const EquivalenceConstants&, const EquivalenceConstants&) = default;
};

EquivalenceConstants equivalence_constants(const NormSpec& norm);

// Visits every v in Z^d with min_sq <= |v|_2^2 <= max_sq. Throws
// BudgetExceeded once more than `budget` points would be visited. Returns the
// number of visited points.
std::uint64_t enumerate_lattice_shell(int dim, const Rational& min_sq, const Rational& max_sq,
                                      std::uint64_t budget,
                                      const std::function<void(std::span<const long>)>& visit);

// min { rho(v) : v in Z^d \ {0} }.
ScaleValue min_lattice_norm(const NormSpec& norm, std::uint64_t budget = 10'000'000);

struct VolumeEstimate {
  enum class Kind { Exact, Statistical };
  Kind kind = Kind::Exact;
  // Exact: coefficient * pi^pi_power.
  Rational coefficient{0};
  int pi_power = 0;
  // Statistical fields (also filled with the numeric value for exact ones).
  double estimate = 0.0;
  double standard_error = 0.0;
  double lower_bound = 0.0;
  double confidence = 1.0;
  std::uint64_t samples = 0;

  double value() const { return estimate; }
  std::string describe() const;
};

enum class VolumeMethod { Auto, Statistical };

// Volume of the open unit ball. Closed forms for l1, l2, linf; bounding-box
// Monte Carlo otherwise (or when Statistical is forced).
VolumeEstimate unit_ball_volume(const NormSpec& norm, std::uint64_t budget, double confidence,
                                std::uint64_t seed = 1, VolumeMethod method = VolumeMethod::Auto);

}  // namespace davoid
