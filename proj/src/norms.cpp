#include "davoid/norms.hpp"

#include <mpfr.h>

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace davoid {

namespace {

// Owning MPFR value.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

Rational to_rational(mpfr_ptr v) {
  Integer mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v);
  Rational r(mant);
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  r.canonicalize();
  return r;
}

// Directed bound of q^(1/k) for rational q >= 0.
Rational root_bound(const Rational& q, unsigned long k, bool upper, mpfr_prec_t prec) {
  const mpfr_rnd_t rnd = upper ? MPFR_RNDU : MPFR_RNDD;
  Mpfr v(prec);
  mpfr_set_q(v.get(), q.get_mpq_t(), rnd);
  mpfr_rootn_ui(v.get(), v.get(), k, rnd);
  return to_rational(v.get());
}

// Directed bound of base^exponent, base > 0 rational, exponent rational.
Rational power_bound(const Rational& base, const Rational& exponent, bool upper, mpfr_prec_t prec) {
  const long num = exponent.get_num().get_si();
  const unsigned long den = exponent.get_den().get_ui();
  return root_bound(pow(base, num), den, upper, prec);
}

// Onto the grid 2^-bits, rounding in the given direction.
Rational to_grid(const Rational& q, unsigned bits, bool upper) {
  Rational scale = pow(Rational(2), static_cast<long>(bits));
  Rational scaled = q * scale;
  Integer n = upper ? ceil_of(scaled) : floor_of(scaled);
  Rational r(n, Integer(scale.get_num()));
  r.canonicalize();
  return r;
}

void require_dim(const NormSpec& norm, std::size_t n) {
  if (n != static_cast<std::size_t>(norm.dim())) {
    throw ConfigError("dimension mismatch: norm has dimension " + std::to_string(norm.dim()) +
                      ", point has " + std::to_string(n));
  }
}

template <class T>
Rational as_rational(const T& v) {
  return Rational(v);
}

template <class Vec>
ScaleValue eval_exact_impl(const NormSpec& norm, const Vec& x) {
  require_dim(norm, x.size());
  if (norm.kind() == NormSpec::Kind::Polytope) {
    Rational best = 0;
    for (const auto& a : norm.functionals()) {
      Rational dot = 0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * as_rational(x[i]);
      dot = abs(dot);
      if (dot > best) best = dot;
    }
    return ScaleValue::rational(best);
  }
  if (norm.is_l2()) {
    Rational s = 0;
    for (const auto& xi : x) {
      Rational r = as_rational(xi);
      s += r * r;
    }
    return ScaleValue::sqrt(s);
  }
  if (norm.is_l1()) {
    Rational s = 0;
    for (const auto& xi : x) s += abs(as_rational(xi));
    return ScaleValue::rational(s);
  }
  if (norm.is_linf()) {
    Rational m = 0;
    for (const auto& xi : x) m = std::max(m, Rational(abs(as_rational(xi))));
    return ScaleValue::rational(m);
  }
  throw NotExact("norm " + norm.to_string() + " has no exact evaluation");
}

// Rank of a rational matrix by Gaussian elimination.
int matrix_rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Solves A x = b for square A; nullopt if singular.
std::optional<RationalVector> solve(std::vector<RationalVector> a, RationalVector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[c]);
    std::swap(b[pivot], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// max |v|_2^2 over the vertices of { x : |a_i . x| <= 1 for all i }.
Rational polytope_circumradius_sq(const NormSpec& norm) {
  const auto& f = norm.functionals();
  const int d = norm.dim();
  const std::size_t m = f.size();
  // C(m, d) * 2^(d-1) linear solves.
  double combos = 1;
  for (int i = 0; i < d; ++i) combos = combos * static_cast<double>(m - i) / (i + 1);
  if (combos * std::ldexp(1.0, d - 1) > 2e6) {
    throw BudgetExceeded("polytope has too many facet combinations for vertex enumeration");
  }
  Rational best = 0;
  std::vector<std::size_t> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  for (;;) {
    std::vector<RationalVector> a;
    for (auto i : idx) a.push_back(f[i]);
    for (unsigned long mask = 0; mask < (1UL << (d - 1)); ++mask) {
      RationalVector rhs(d);
      rhs[0] = 1;
      for (int i = 1; i < d; ++i) rhs[i] = (mask >> (i - 1)) & 1UL ? -1 : 1;
      auto x = solve(a, rhs);
      if (!x) break;
      bool feasible = true;
      for (const auto& row : f) {
        Rational dot = 0;
        for (int i = 0; i < d; ++i) dot += row[i] * (*x)[i];
        if (abs(dot) > 1) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      Rational sq = 0;
      for (const auto& xi : *x) sq += xi * xi;
      best = std::max(best, sq);
    }
    int k = d - 1;
    while (k >= 0 && idx[k] == m - d + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int i = k + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

constexpr unsigned kConstantBits = 16;

}  // namespace

// ---------------------------------------------------------------------------

NormSpec NormSpec::l1(int dim) { return lp(dim, 1); }
NormSpec NormSpec::l2(int dim) { return lp(dim, 2); }

NormSpec NormSpec::linf(int dim) {
  if (dim < 1) throw ConfigError("dimension must be at least 1");
  NormSpec n(dim, Kind::Lp);
  n.infinite_ = true;
  return n;
}

NormSpec NormSpec::lp(int dim, const Rational& p) {
  if (dim < 1) throw ConfigError("dimension must be at least 1");
  if (p < 1) throw ConfigError("l^p exponent must be at least 1");
  NormSpec n(dim, Kind::Lp);
  n.p_ = p;
  n.p_.canonicalize();
  return n;
}

NormSpec NormSpec::polytope(int dim, std::vector<RationalVector> functionals) {
  if (dim < 1) throw ConfigError("dimension must be at least 1");
  for (const auto& a : functionals) {
    if (a.size() != static_cast<std::size_t>(dim)) {
      throw ConfigError("polytope functional has " + std::to_string(a.size()) +
                        " entries, expected " + std::to_string(dim));
    }
  }
  if (matrix_rank(functionals) < dim) {
    throw ConfigError("degenerate polytope: functionals do not span R^" + std::to_string(dim));
  }
  NormSpec n(dim, Kind::Polytope);
  n.functionals_ = std::move(functionals);
  n.finish_polytope();
  return n;
}

void NormSpec::finish_polytope() {
  grid_ = 1;
  for (const auto& a : functionals_) {
    for (const auto& q : a) mpz_lcm(grid_.get_mpz_t(), grid_.get_mpz_t(), q.get_den_mpz_t());
  }
  scaled_.clear();
  for (const auto& a : functionals_) {
    IntegerVector row;
    for (const auto& q : a) row.push_back(Integer(q.get_num() * (grid_ / q.get_den())));
    scaled_.push_back(std::move(row));
  }
}

const Rational& NormSpec::exponent() const {
  if (kind_ != Kind::Lp || infinite_) throw ConfigError("norm has no finite exponent");
  return p_;
}

bool NormSpec::exact_capable() const {
  return kind_ == Kind::Polytope || infinite_ || p_ == 1 || p_ == 2;
}

bool NormSpec::has_value_grid() const {
  return kind_ == Kind::Polytope || is_l1() || is_linf() || (is_l2() && dim_ == 1);
}

const Integer& NormSpec::grid_denominator() const {
  if (!has_value_grid()) throw ConfigError("norm " + to_string() + " has no value grid");
  return grid_;
}

std::string NormSpec::to_string() const {
  if (kind_ == Kind::Polytope) {
    std::string s = "poly:[";
    for (std::size_t i = 0; i < functionals_.size(); ++i) {
      if (i) s += ",";
      s += "(";
      for (std::size_t j = 0; j < functionals_[i].size(); ++j) {
        if (j) s += ",";
        s += davoid::to_string(functionals_[i][j]);
      }
      s += ")";
    }
    return s + "]";
  }
  if (infinite_) return "linf";
  if (p_ == 1) return "l1";
  if (p_ == 2) return "l2";
  return "lp:" + davoid::to_string(p_);
}

NormSpec NormSpec::parse(std::string_view text, int dim) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s == "l1") return l1(dim);
  if (s == "l2") return l2(dim);
  if (s == "linf") return linf(dim);
  if (s.rfind("lp:", 0) == 0) {
    std::string p = s.substr(3);
    if (p == "inf") return linf(dim);
    return lp(dim, parse_rational(p));
  }
  if (s.rfind("poly:", 0) == 0) {
    std::string body = s.substr(5);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      throw ConfigError("polytope norm must look like poly:[(a,b),(c,d)], got '" + s + "'");
    }
    body = body.substr(1, body.size() - 2);
    std::vector<RationalVector> rows;
    std::size_t pos = 0;
    while (pos < body.size()) {
      if (body[pos] == ',') {
        ++pos;
        continue;
      }
      if (body[pos] != '(') throw ConfigError("expected '(' in polytope norm '" + s + "'");
      auto close = body.find(')', pos);
      if (close == std::string::npos) throw ConfigError("unbalanced '(' in polytope norm '" + s + "'");
      RationalVector row;
      std::string inner = body.substr(pos + 1, close - pos - 1);
      std::stringstream ss(inner);
      std::string item;
      while (std::getline(ss, item, ',')) row.push_back(parse_rational(item));
      rows.push_back(std::move(row));
      pos = close + 1;
    }
    if (rows.empty()) throw ConfigError("polytope norm has no functionals");
    return polytope(dim, std::move(rows));
  }
  throw ConfigError("unknown norm '" + std::string(text) + "' (expected l1, l2, linf, lp:<p>, poly:[...])");
}

// ---------------------------------------------------------------------------

ScaleValue eval_exact(const NormSpec& norm, std::span<const Rational> x) {
  return eval_exact_impl(norm, x);
}

ScaleValue eval_exact(const NormSpec& norm, std::span<const Integer> x) {
  return eval_exact_impl(norm, x);
}

ScaleValue eval_lattice(const NormSpec& norm, std::span<const long> v) {
  require_dim(norm, v.size());
  if (norm.kind() == NormSpec::Kind::Polytope) {
    Integer best = 0;
    Integer dot;
    for (const auto& row : norm.scaled_functionals()) {
      dot = 0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += row[i] * v[i];
      if (abs(dot) > best) best = abs(dot);
    }
    return ScaleValue::rational(Rational(best, norm.grid_denominator()));
  }
  if (norm.is_l2()) {
    Integer s = 0;
    for (long c : v) s += Integer(c) * c;
    return ScaleValue::sqrt(Rational(s));
  }
  if (norm.is_l1()) {
    Integer s = 0;
    for (long c : v) s += std::labs(c);
    return ScaleValue::rational(Rational(s));
  }
  if (norm.is_linf()) {
    long m = 0;
    for (long c : v) m = std::max(m, std::labs(c));
    return ScaleValue::rational(Rational(m));
  }
  throw NotExact("norm " + norm.to_string() + " has no exact evaluation");
}

NormValue eval_norm(const NormSpec& norm, std::span<const Rational> x, const Rational& width) {
  require_dim(norm, x.size());
  NormValue out;
  if (norm.exact_capable()) {
    out.exact = true;
    out.value = eval_exact(norm, x);
    if (out.value.is_rational()) {
      out.lo = out.hi = out.value.rational_value();
    } else {
      unsigned bits = 32;
      do {
        std::tie(out.lo, out.hi) = sqrt_bounds(out.value.square(), bits);
        bits *= 2;
      } while (out.hi - out.lo > width);
    }
    return out;
  }
  // (sum |x_i|^p)^(1/p) with p = a/b, bracketed by directed rounding.
  const Rational& p = norm.exponent();
  const unsigned long a = p.get_num().get_ui();
  const unsigned long b = p.get_den().get_ui();
  for (mpfr_prec_t prec = 64;; prec *= 2) {
    Rational sum_lo = 0;
    Rational sum_hi = 0;
    for (const auto& xi : x) {
      Rational m = pow(Rational(abs(xi)), static_cast<long>(a));
      sum_lo += root_bound(m, b, false, prec);
      sum_hi += root_bound(m, b, true, prec);
    }
    out.lo = root_bound(pow(sum_lo, static_cast<long>(b)), a, false, prec);
    out.hi = root_bound(pow(sum_hi, static_cast<long>(b)), a, true, prec);
    if (out.hi - out.lo <= width || prec > 1 << 16) break;
  }
  out.exact = false;
  return out;
}

double eval_approx(const NormSpec& norm, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(norm.dim())) throw ConfigError("dimension mismatch");
  if (norm.kind() == NormSpec::Kind::Polytope) {
    double best = 0;
    for (const auto& a : norm.functionals()) {
      double dot = 0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += a[i].get_d() * x[i];
      best = std::max(best, std::fabs(dot));
    }
    return best;
  }
  if (norm.is_linf()) {
    double m = 0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  const double p = norm.exponent().get_d();
  double s = 0;
  for (double v : x) s += std::pow(std::fabs(v), p);
  return std::pow(s, 1.0 / p);
}

std::strong_ordering compare_norm_to(const NormSpec& norm, std::span<const Rational> x,
                                     const ScaleValue& t) {
  if (!norm.exact_capable()) {
    throw NotExact("exact comparison unavailable for norm " + norm.to_string() +
                   "; certification requires p in {1, 2, inf} or a polytope");
  }
  return eval_exact(norm, x) <=> t;
}

// ---------------------------------------------------------------------------

EquivalenceConstants equivalence_constants(const NormSpec& norm) {
  const int d = norm.dim();
  if (norm.kind() == NormSpec::Kind::Polytope) {
    Rational max_row_sq = 0;
    for (const auto& a : norm.functionals()) {
      Rational sq = 0;
      for (const auto& q : a) sq += q * q;
      max_row_sq = std::max(max_row_sq, sq);
    }
    EquivalenceConstants c;
    c.C_hi = to_grid(sqrt_round_up(max_row_sq, 64), kConstantBits, true);
    const Rational inv = 1 / polytope_circumradius_sq(norm);
    for (unsigned bits = kConstantBits;; bits *= 2) {
      c.c_lo = to_grid(sqrt_round_down(inv, 2 * bits), bits, false);
      if (c.c_lo > 0) break;
    }
    return c;
  }
  if (norm.is_l2()) return {1, 1};
  // d^(1/p - 1/2): above 1 for p < 2, below 1 for p > 2.
  if (norm.is_linf()) {
    return {to_grid(sqrt_round_down(Rational(1, d), 64), kConstantBits, false), 1};
  }
  if (norm.is_l1()) {
    return {1, to_grid(sqrt_round_up(Rational(d), 64), kConstantBits, true)};
  }
  const Rational& p = norm.exponent();
  const Rational e = Rational(1) / p - Rational(1, 2);
  if (p < 2) return {1, to_grid(power_bound(Rational(d), e, true, 128), kConstantBits, true)};
  return {to_grid(power_bound(Rational(d), e, false, 128), kConstantBits, false), 1};
}

// ---------------------------------------------------------------------------

std::uint64_t enumerate_lattice_shell(int dim, const Rational& min_sq, const Rational& max_sq,
                                      std::uint64_t budget,
                                      const std::function<void(std::span<const long>)>& visit) {
  if (max_sq < 0) return 0;
  const Integer hi = floor_of(max_sq);
  const Integer lo = ceil_of(min_sq);
  Integer radius;
  mpz_sqrt(radius.get_mpz_t(), hi.get_mpz_t());
  if (radius > Integer(std::numeric_limits<int>::max())) {
    throw BudgetExceeded("enumeration radius " + to_string(radius) + " is beyond exact enumeration");
  }
  if (!hi.fits_slong_p() || !lo.fits_slong_p() || hi > Integer(1L << 62)) {
    throw BudgetExceeded("enumeration bounds too large");
  }
  const long hi_l = hi.get_si();
  const long lo_l = std::max(0L, lo.get_si());
  std::vector<long> v(dim, 0);
  std::uint64_t count = 0;

  auto isqrt = [](long n) {
    if (n <= 0) return 0L;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
  };
  auto emit = [&]() {
    if (++count > budget) {
      throw BudgetExceeded("lattice enumeration exceeded budget of " + std::to_string(budget) + " points");
    }
    visit(std::span<const long>(v));
  };

  std::function<void(int, long)> rec = [&](int k, long partial) {
    const long rem = hi_l - partial;
    if (k == dim - 1) {
      // Last coordinate: only the shell lo <= partial + x^2 <= hi.
      const long top = isqrt(rem);
      const long need = lo_l - partial;
      long bottom = 0;
      if (need > 0) {
        bottom = isqrt(need);
        if (bottom * bottom < need) ++bottom;
      }
      for (long x = bottom; x <= top; ++x) {
        v[k] = x;
        emit();
        if (x != 0) {
          v[k] = -x;
          emit();
        }
      }
      v[k] = 0;
      return;
    }
    const long top = isqrt(rem);
    for (long x = -top; x <= top; ++x) {
      v[k] = x;
      rec(k + 1, partial + x * x);
    }
    v[k] = 0;
  };
  rec(0, 0);
  return count;
}

ScaleValue min_lattice_norm(const NormSpec& norm, std::uint64_t budget) {
  // Every nonzero integer vector has |v|_p >= |v|_inf >= 1, attained at e_1.
  if (norm.kind() == NormSpec::Kind::Lp) return ScaleValue::rational(1);
  std::vector<long> e1(norm.dim(), 0);
  e1[0] = 1;
  ScaleValue best = eval_lattice(norm, e1);
  const auto consts = equivalence_constants(norm);
  // rho(v) <= rho(e1) forces |v|_2 <= rho(e1) / c_lo.
  const Rational bound_sq = best.square() / (consts.c_lo * consts.c_lo);
  enumerate_lattice_shell(norm.dim(), 1, bound_sq, budget, [&](std::span<const long> v) {
    ScaleValue r = eval_lattice(norm, v);
    if (r < best) best = r;
  });
  return best;
}

// ---------------------------------------------------------------------------

std::string VolumeEstimate::describe() const {
  std::ostringstream os;
  if (kind == Kind::Exact) {
    os << "exact " << to_string(coefficient);
    if (pi_power == 1) os << "*pi";
    if (pi_power > 1) os << "*pi^" << pi_power;
  } else {
    os << "statistical " << estimate << " (se " << standard_error << ", lower " << lower_bound
       << " at " << confidence << ", n=" << samples << ")";
  }
  return os.str();
}

VolumeEstimate unit_ball_volume(const NormSpec& norm, std::uint64_t budget, double confidence,
                                std::uint64_t seed, VolumeMethod method) {
  const int d = norm.dim();
  VolumeEstimate out;
  if (method == VolumeMethod::Auto && (norm.is_l1() || norm.is_l2() || norm.is_linf())) {
    out.kind = VolumeEstimate::Kind::Exact;
    Integer fact = 1;
    for (int i = 2; i <= d; ++i) fact *= i;
    if (norm.is_linf()) {
      out.coefficient = pow(Rational(2), d);
    } else if (norm.is_l1()) {
      out.coefficient = pow(Rational(2), d) / Rational(fact);
    } else if (d % 2 == 0) {
      // pi^m / m!
      const int m = d / 2;
      Integer mf = 1;
      for (int i = 2; i <= m; ++i) mf *= i;
      out.coefficient = Rational(1) / Rational(mf);
      out.pi_power = m;
    } else {
      // 2^(m+1) pi^m / (2m+1)!!
      const int m = d / 2;
      Integer dbl = 1;
      for (int i = 3; i <= d; i += 2) dbl *= i;
      out.coefficient = pow(Rational(2), m + 1) / Rational(dbl);
      out.pi_power = m;
    }
    out.coefficient.canonicalize();
    out.estimate = out.coefficient.get_d() * std::pow(M_PI, out.pi_power);
    out.lower_bound = out.estimate;
    out.confidence = 1.0;
    return out;
  }
  if (budget == 0) throw ConfigError("unit_ball_volume needs a positive sample budget for " + norm.to_string());
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  const auto consts = equivalence_constants(norm);
  const double half = 1.0 / consts.c_lo.get_d();
  const double box = std::pow(2.0 * half, d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-half, half);
  std::vector<double> x(d);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < budget; ++i) {
    for (auto& xi : x) xi = coord(rng);
    if (eval_approx(norm, x) < 1.0) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(budget);
  out.kind = VolumeEstimate::Kind::Statistical;
  out.samples = budget;
  out.estimate = box * p;
  out.standard_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(budget));
  const double z = boost::math::quantile(boost::math::normal(), confidence);
  out.lower_bound = out.estimate - z * out.standard_error;
  out.confidence = confidence;
  return out;
}

}  // namespace davoid
