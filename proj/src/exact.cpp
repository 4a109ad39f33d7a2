#include "davoid/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace davoid {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int sgn(const Rational& q) { return sgn(q.get_num()); }

Rational pow2(long j) {
  Rational r = 1;
  if (j >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(j));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-j));
  }
  return r;
}

// Sign of t + a*sqrt(x) with x not a rational square, a != 0.
int sign_one(const Rational& t, const Rational& a, const Rational& x) {
  const int sa = sgn(a);
  const int st = sgn(t);
  if (st == 0 || st == sa) return sa;
  const int c = cmp(Rational(a * a * x), Rational(t * t));
  return c > 0 ? sa : (c < 0 ? st : 0);
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string_view s = trim(text);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (!all_digits(digits)) throw ConfigError("not an integer: '" + std::string(text) + "'");
  std::string buf(s.front() == '+' ? s.substr(1) : s);
  return Integer(buf, 10);
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(s.substr(0, slash));
  std::string_view den_text = trim(s.substr(slash + 1));
  if (!all_digits(den_text)) throw ConfigError("not a rational: '" + std::string(text) + "'");
  Integer den = parse_integer(den_text);
  if (den == 0) throw ConfigError("zero denominator: '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str(10);
  return c.get_num().get_str(10) + "/" + c.get_den().get_str(10);
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer pow(const Integer& z, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), z.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& q, long e) {
  if (e < 0) {
    if (q == 0) throw ConfigError("zero raised to a negative power");
    Rational inv = 1 / q;
    return pow(inv, -e);
  }
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
  r.canonicalize();
  return r;
}

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0) {
    return std::nullopt;
  }
  Rational r;
  mpz_sqrt(r.get_num_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(r.get_den_mpz_t(), q.get_den_mpz_t());
  r.canonicalize();
  return r;
}

Rational dyadic_floor(const Rational& h) {
  if (sgn(h) <= 0) throw ConfigError("dyadic_floor needs a positive argument");
  // floor(log2 h) is within one of bitlen(num) - bitlen(den).
  long j = static_cast<long>(mpz_sizeinbase(h.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(h.get_den_mpz_t(), 2));
  while (pow2(j) > h) --j;
  while (pow2(j + 1) <= h) ++j;
  return pow2(j);
}

std::pair<Rational, Rational> sqrt_bounds(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw ConfigError("square root of a negative rational");
  if (auto r = exact_sqrt(q)) return {*r, *r};
  Integer scaled = floor_of(Rational(q * pow2(2 * static_cast<long>(bits))));
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational lo = Rational(root) * pow2(-static_cast<long>(bits));
  Rational hi = Rational(root + 1) * pow2(-static_cast<long>(bits));
  return {lo, hi};
}

Rational sqrt_round_down(const Rational& q, unsigned bits) { return sqrt_bounds(q, bits).first; }
Rational sqrt_round_up(const Rational& q, unsigned bits) { return sqrt_bounds(q, bits).second; }

// ---------------------------------------------------------------------------

ScaleValue ScaleValue::rational(Rational q) {
  q.canonicalize();
  if (sgn(q) < 0) throw ConfigError("scale values are non-negative, got " + davoid::to_string(q));
  ScaleValue s;
  s.square_ = q * q;
  s.root_ = q;
  return s;
}

ScaleValue ScaleValue::sqrt(Rational q) {
  q.canonicalize();
  if (sgn(q) < 0) throw ConfigError("square root of negative rational " + davoid::to_string(q));
  if (auto r = exact_sqrt(q)) return rational(*r);
  ScaleValue s;
  s.square_ = q;
  s.root_.reset();
  return s;
}

const Rational& ScaleValue::rational_value() const {
  if (!root_) throw Error("scale value " + to_string() + " is irrational");
  return *root_;
}

ScaleValue ScaleValue::scaled(const Rational& c) const {
  if (sgn(c) < 0) throw ConfigError("negative scale factor");
  if (root_) return rational(*root_ * c);
  return ScaleValue::sqrt(square_ * c * c);
}

double ScaleValue::approx() const {
  if (root_) return root_->get_d();
  return std::sqrt(square_.get_d());
}

std::string ScaleValue::to_string() const {
  if (root_) return davoid::to_string(*root_);
  return "sqrt:" + davoid::to_string(square_);
}

ScaleValue ScaleValue::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.rfind("sqrt:", 0) == 0) return ScaleValue::sqrt(parse_rational(s.substr(5)));
  return ScaleValue::rational(parse_rational(s));
}

const ScaleValue& max(const ScaleValue& a, const ScaleValue& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------

RadicalSum::RadicalSum(Rational constant) : constant_(std::move(constant)) {}

RadicalSum::RadicalSum(const ScaleValue& s) {
  if (s.is_rational()) {
    constant_ = s.rational_value();
  } else {
    add_term(1, s.square());
  }
}

RadicalSum RadicalSum::sqrt_of(const Rational& radicand, const Rational& coef) {
  RadicalSum e;
  e.add_term(coef, radicand);
  return e;
}

void RadicalSum::add_term(const Rational& coef, const Rational& radicand) {
  if (coef == 0 || radicand == 0) return;
  if (sgn(radicand) < 0) throw ConfigError("negative radicand");
  if (auto r = exact_sqrt(radicand)) {
    constant_ += coef * *r;
    return;
  }
  // sqrt(p/q) = sqrt(p*q)/q keeps radicands integral so equal ones merge.
  Rational c = coef / Rational(radicand.get_den());
  Rational x(Integer(radicand.get_num() * radicand.get_den()));
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->second == x) {
      it->first += c;
      if (it->first == 0) terms_.erase(it);
      return;
    }
  }
  terms_.emplace_back(c, x);
}

RadicalSum& RadicalSum::operator+=(const RadicalSum& other) {
  constant_ += other.constant_;
  for (const auto& [c, x] : other.terms_) add_term(c, x);
  return *this;
}

RadicalSum& RadicalSum::operator-=(const RadicalSum& other) {
  constant_ -= other.constant_;
  for (const auto& [c, x] : other.terms_) add_term(-c, x);
  return *this;
}

RadicalSum& RadicalSum::operator*=(const Rational& k) {
  if (k == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= k;
  for (auto& term : terms_) term.first *= k;
  return *this;
}

RadicalSum RadicalSum::operator-() const {
  RadicalSum r = *this;
  r *= Rational(-1);
  return r;
}

std::pair<Rational, Rational> RadicalSum::enclose(unsigned bits) const {
  Rational lo = constant_;
  Rational hi = constant_;
  for (const auto& [c, x] : terms_) {
    auto [rlo, rhi] = sqrt_bounds(x, bits);
    if (sgn(c) > 0) {
      lo += c * rlo;
      hi += c * rhi;
    } else {
      lo += c * rhi;
      hi += c * rlo;
    }
  }
  return {lo, hi};
}

double RadicalSum::approx() const {
  double v = constant_.get_d();
  for (const auto& [c, x] : terms_) v += c.get_d() * std::sqrt(x.get_d());
  return v;
}

std::optional<int> sign(const RadicalSum& e, unsigned max_bits) {
  const auto& terms = e.terms();
  const Rational& t = e.constant();
  if (terms.empty()) return sgn(t);
  if (terms.size() == 1) return sign_one(t, terms[0].first, terms[0].second);
  if (terms.size() == 2) {
    const auto& [a, x] = terms[0];
    const auto& [b, y] = terms[1];
    int su = sgn(a);
    if (sgn(b) != su) {
      const int c = cmp(Rational(a * a * x), Rational(b * b * y));
      su = c > 0 ? sgn(a) : (c < 0 ? sgn(b) : 0);
    }
    const int st = sgn(t);
    if (su == 0) return st;
    if (st == 0 || st == su) return su;
    // Opposite signs: compare u^2 with t^2, where
    // u^2 - t^2 = a^2 x + b^2 y - t^2 + 2ab sqrt(xy).
    RadicalSum diff(Rational(a * a * x + b * b * y - t * t));
    diff += RadicalSum::sqrt_of(x * y, 2 * a * b);
    auto d = sign(diff, max_bits);
    if (!d) return std::nullopt;
    return *d > 0 ? su : (*d < 0 ? st : 0);
  }
  for (unsigned bits = 64; bits <= max_bits; bits *= 2) {
    auto [lo, hi] = e.enclose(bits);
    if (sgn(lo) > 0) return 1;
    if (sgn(hi) < 0) return -1;
  }
  return std::nullopt;
}

bool is_positive(const RadicalSum& e) {
  auto s = sign(e);
  return s && *s > 0;
}

bool is_nonnegative(const RadicalSum& e) {
  auto s = sign(e);
  return s && *s >= 0;
}

bool is_negative(const RadicalSum& e) {
  auto s = sign(e);
  return s && *s < 0;
}

namespace {
int decided_sign(const RadicalSum& e) {
  auto s = sign(e);
  if (!s) throw Error("exact sign undecided for a sum of three or more square roots");
  return *s;
}
}  // namespace

Integer floor_of(const RadicalSum& e) {
  if (e.terms().empty()) return floor_of(e.constant());
  Integer n = floor_of(e.enclose(64).first);
  while (decided_sign(e - RadicalSum(Rational(n + 1))) >= 0) ++n;
  while (decided_sign(e - RadicalSum(Rational(n))) < 0) --n;
  return n;
}

Integer ceil_of(const RadicalSum& e) { return -floor_of(-e); }

Rational dyadic_floor(const RadicalSum& e) {
  if (e.terms().empty()) return dyadic_floor(e.constant());
  if (decided_sign(e) <= 0) throw ConfigError("dyadic_floor needs a positive argument");
  double a = e.approx();
  long j = a > 0 && std::isfinite(a) ? static_cast<long>(std::floor(std::log2(a))) : 0;
  while (decided_sign(e - RadicalSum(pow2(j))) < 0) --j;
  while (decided_sign(e - RadicalSum(pow2(j + 1))) >= 0) ++j;
  return pow2(j);
}

}  // namespace davoid
