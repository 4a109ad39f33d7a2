#pragma once

// Exact arithmetic layer: GMP integers and rationals, scales of the form
// q or sqrt(q), and sign decisions for short sums of square roots.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace davoid {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

// Error taxonomy. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed text, violated precondition, unsupported combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An explicit enumeration, factorization, or retry budget ran out.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The norm has no exact evaluation, so certification is unavailable.
class NotExact : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Parses "p/q", "-p/q" or a decimal integer. Decimal points and exponents
// are rejected: certified quantities never pass through floating point.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

// q^e for any integer e (q != 0 when e < 0).
Rational pow(const Rational& q, long e);
Integer pow(const Integer& z, unsigned long e);

// Exact square root when q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

// Largest 2^j (j any integer) with 2^j <= h. Requires h > 0.
Rational dyadic_floor(const Rational& h);

// Rational bounds lo <= sqrt(q) <= hi with hi - lo <= 2^-bits.
std::pair<Rational, Rational> sqrt_bounds(const Rational& q, unsigned bits);

// Outward roundings of sqrt(q) onto the grid 2^-bits.
Rational sqrt_round_down(const Rational& q, unsigned bits);
Rational sqrt_round_up(const Rational& q, unsigned bits);

// Non-negative scale stored as either a rational q or sqrt(q). The square is
// always kept, so ordering reduces to comparing rationals.
class ScaleValue {
 public:
  ScaleValue() = default;

  static ScaleValue rational(Rational q);
  // Collapses to the rational form when q is a perfect rational square.
  static ScaleValue sqrt(Rational q);

  bool is_rational() const { return root_.has_value(); }
  const Rational& square() const { return square_; }
  // Throws when the value is irrational.
  const Rational& rational_value() const;

  // c * this for rational c >= 0.
  ScaleValue scaled(const Rational& c) const;

  double approx() const;
  // "p/q" for rationals, "sqrt:p/q" otherwise.
  std::string to_string() const;
  static ScaleValue parse(std::string_view text);

  friend bool operator==(const ScaleValue& a, const ScaleValue& b) {
    return cmp(a.square_, b.square_) == 0;
  }
  friend std::strong_ordering operator<=>(const ScaleValue& a, const ScaleValue& b) {
    int c = cmp(a.square_, b.square_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational square_{0};
  std::optional<Rational> root_{Rational(0)};
};

const ScaleValue& max(const ScaleValue& a, const ScaleValue& b);

// constant + sum_i coef_i * sqrt(radicand_i). Closed under addition and
// rational scaling; the sign is decided exactly for up to two distinct
// irrational terms and by refined enclosures beyond that.
class RadicalSum {
 public:
  RadicalSum() = default;
  RadicalSum(Rational constant);  // NOLINT(google-explicit-constructor)
  RadicalSum(const ScaleValue& s);  // NOLINT(google-explicit-constructor)
  RadicalSum(Integer constant) : RadicalSum(Rational(constant)) {}  // NOLINT

  static RadicalSum sqrt_of(const Rational& radicand, const Rational& coef = 1);

  RadicalSum& operator+=(const RadicalSum& other);
  RadicalSum& operator-=(const RadicalSum& other);
  RadicalSum& operator*=(const Rational& c);
  friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
  friend RadicalSum operator-(RadicalSum a, const RadicalSum& b) { return a -= b; }
  friend RadicalSum operator*(const Rational& c, RadicalSum a) { return a *= c; }
  RadicalSum operator-() const;

  const Rational& constant() const { return constant_; }
  const std::vector<std::pair<Rational, Rational>>& terms() const { return terms_; }

  // Bounds of width at most about 2^-bits times the number of terms.
  std::pair<Rational, Rational> enclose(unsigned bits) const;
  double approx() const;

 private:
  void add_term(const Rational& coef, const Rational& radicand);
  Rational constant_{0};
  // (coefficient, square-free-ish radicand); no perfect squares, no zeros.
  std::vector<std::pair<Rational, Rational>> terms_;
};

// Sign in {-1, 0, 1}; nullopt only when three or more irrational terms leave
// the value inside every enclosure up to `max_bits` (an exact tie is then
// assumed possible and callers must treat the predicate as unproven).
std::optional<int> sign(const RadicalSum& e, unsigned max_bits = 4096);

// Convenience predicates; an undecided sign makes them return false.
bool is_positive(const RadicalSum& e);
bool is_nonnegative(const RadicalSum& e);
bool is_negative(const RadicalSum& e);

// Exact floor / ceiling. Throws Error if the sign oracle cannot decide.
Integer floor_of(const RadicalSum& e);
Integer ceil_of(const RadicalSum& e);

// Largest 2^j <= e for e > 0 (exact).
Rational dyadic_floor(const RadicalSum& e);

}  // namespace davoid
