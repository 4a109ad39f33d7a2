#include "davoid/fspec.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <optional>

namespace davoid {

namespace {

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

// Exact k-th root of a non-negative integer, if any.
std::optional<Integer> exact_root(const Integer& z, unsigned long k) {
  Integer r;
  if (mpz_root(r.get_mpz_t(), z.get_mpz_t(), k) != 0) return r;
  return std::nullopt;
}

// f(R) for the step table, exactly.
Rational step_value(const std::vector<std::pair<Rational, Rational>>& table, const ScaleValue& R) {
  Rational v = 1;
  for (const auto& [scale, value] : table) {
    if (R >= ScaleValue::rational(scale)) v = value;
  }
  return v;
}

constexpr unsigned kThresholdBits = 32;

}  // namespace

FSpec FSpec::inv_poly(const Rational& alpha) {
  if (alpha <= 0) throw ConfigError("inv_poly needs alpha > 0");
  FSpec f;
  f.family_ = Family::InvPoly;
  f.alpha_ = alpha;
  f.alpha_.canonicalize();
  return f;
}

FSpec FSpec::inv_log() {
  FSpec f;
  f.family_ = Family::InvLog;
  return f;
}

FSpec FSpec::step_table(std::vector<std::pair<Rational, Rational>> table) {
  if (table.empty()) throw ConfigError("step_table needs at least one (R, value) pair");
  Rational prev_scale = 0;
  Rational prev_value = 1;
  for (const auto& [scale, value] : table) {
    if (scale <= prev_scale) throw ConfigError("step_table scales must be positive and strictly increasing");
    if (value < 0 || value > prev_value) {
      throw ConfigError("step_table values must lie in [0, 1] and be non-increasing");
    }
    prev_scale = scale;
    prev_value = value;
  }
  FSpec f;
  f.family_ = Family::StepTable;
  f.table_ = std::move(table);
  return f;
}

FSpec FSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s == "inv_log") return inv_log();
  if (s.rfind("inv_poly:", 0) == 0) return inv_poly(parse_rational(s.substr(9)));
  if (s.rfind("step_table:", 0) == 0) {
    std::vector<std::pair<Rational, Rational>> table;
    std::string body = s.substr(11);
    std::size_t pos = 0;
    while (pos < body.size()) {
      if (body[pos] == ',') {
        ++pos;
        continue;
      }
      auto close = body.find(')', pos);
      if (body[pos] != '(' || close == std::string::npos) {
        throw ConfigError("step_table entries look like (R,value), got '" + s + "'");
      }
      std::string inner = body.substr(pos + 1, close - pos - 1);
      auto comma = inner.find(',');
      if (comma == std::string::npos) throw ConfigError("step_table entry needs R and value: '" + inner + "'");
      table.emplace_back(parse_rational(inner.substr(0, comma)), parse_rational(inner.substr(comma + 1)));
      pos = close + 1;
    }
    return step_table(std::move(table));
  }
  throw ConfigError("unknown decay function '" + std::string(text) +
                    "' (expected inv_poly:<alpha>, inv_log, step_table:(R,v),...)");
}

std::string FSpec::to_string() const {
  switch (family_) {
    case Family::InvPoly: return "inv_poly:" + davoid::to_string(alpha_);
    case Family::InvLog: return "inv_log";
    case Family::StepTable: {
      std::string s = "step_table:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) s += ",";
        s += "(" + davoid::to_string(table_[i].first) + "," + davoid::to_string(table_[i].second) + ")";
      }
      return s;
    }
  }
  return "?";
}

bool FSpec::tends_to_zero() const {
  if (family_ == Family::StepTable) return table_.back().second == 0;
  return true;
}

double FSpec::approx(double R) const {
  switch (family_) {
    case Family::InvPoly: return std::min(1.0, std::pow(R, -alpha_.get_d()));
    case Family::InvLog: return std::min(1.0, 1.0 / std::log(std::exp(1.0) + R));
    case Family::StepTable: {
      double v = 1.0;
      for (const auto& [scale, value] : table_) {
        if (R >= scale.get_d()) v = value.get_d();
      }
      return v;
    }
  }
  return 1.0;
}

ScaleValue threshold(const FSpec& f, const Rational& delta) {
  if (delta <= 0) throw ConfigError("threshold needs delta > 0 (f never reaches 0)");
  if (delta >= 1) return ScaleValue::rational(0);
  switch (f.family()) {
    case FSpec::Family::InvPoly: {
      // R^-alpha <= delta  <=>  R >= (1/delta)^(q/p)  for alpha = p/q.
      const unsigned long p = f.alpha().get_num().get_ui();
      const long q = f.alpha().get_den().get_si();
      const Rational x = pow(Rational(1 / delta), q);
      if (mpz_sizeinbase(x.get_num_mpz_t(), 2) > (1u << 22)) {
        throw BudgetExceeded("threshold for " + f.to_string() + " is too large");
      }
      auto num = exact_root(x.get_num(), p);
      auto den = exact_root(x.get_den(), p);
      if (num && den) return ScaleValue::rational(Rational(*num, *den));
      Integer scaled = floor_of(Rational(x * pow(Rational(2), static_cast<long>(kThresholdBits * p))));
      Integer r;
      mpz_root(r.get_mpz_t(), scaled.get_mpz_t(), p);
      Rational t(r + 1, pow(Integer(2), kThresholdBits));
      t.canonicalize();
      return ScaleValue::rational(t);
    }
    case FSpec::Family::InvLog: {
      // 1/ln(e + R) <= delta  <=>  R >= exp(1/delta) - e.
      const Rational inv = 1 / delta;
      if (inv > 100000) throw BudgetExceeded("inv_log threshold exp(1/delta) is astronomically large");
      Mpfr up(128), e(128);
      mpfr_set_q(up.get(), inv.get_mpq_t(), MPFR_RNDU);
      mpfr_exp(up.get(), up.get(), MPFR_RNDU);
      mpfr_set_ui(e.get(), 1, MPFR_RNDD);
      mpfr_exp(e.get(), e.get(), MPFR_RNDD);
      mpfr_sub(up.get(), up.get(), e.get(), MPFR_RNDU);
      Integer t = ceil_of(to_rational(up.get()));
      if (t < 0) t = 0;
      return ScaleValue::rational(Rational(t));
    }
    case FSpec::Family::StepTable:
      for (const auto& [scale, value] : f.table()) {
        if (value <= delta) return ScaleValue::rational(scale);
      }
      throw ConfigError("decay function " + f.to_string() + " never drops to " + to_string(delta));
  }
  throw ConfigError("unknown decay family");
}

bool density_bound_holds(const FSpec& f, const ScaleValue& R, int d, const Rational& lhs) {
  if (lhs < 0) return false;
  const Rational& r2 = R.square();
  switch (f.family()) {
    case FSpec::Family::InvPoly: {
      if (R <= ScaleValue::rational(1)) return lhs * lhs >= pow(r2, d);
      // lhs >= R^(d - p/q)  <=>  lhs^(2q) >= (R^2)^(dq - p)
      const long p = f.alpha().get_num().get_si();
      const long q = f.alpha().get_den().get_si();
      const long e = d * q - p;
      const Rational left = pow(lhs, 2 * q);
      if (e >= 0) return left >= pow(r2, e);
      return left * pow(r2, -e) >= 1;
    }
    case FSpec::Family::StepTable: {
      const Rational v = step_value(f.table(), R);
      return lhs * lhs >= v * v * pow(r2, d);
    }
    case FSpec::Family::InvLog: {
      // lhs * ln(e + R) >= R^d with ln bounded from below.
      Mpfr x(256), e(256);
      mpfr_set_q(x.get(), r2.get_mpq_t(), MPFR_RNDD);
      mpfr_sqrt(x.get(), x.get(), MPFR_RNDD);
      mpfr_set_ui(e.get(), 1, MPFR_RNDD);
      mpfr_exp(e.get(), e.get(), MPFR_RNDD);
      mpfr_add(x.get(), x.get(), e.get(), MPFR_RNDD);
      mpfr_log(x.get(), x.get(), MPFR_RNDD);
      const Rational log_lo = to_rational(x.get());
      const Rational left = lhs * log_lo;
      return left * left >= pow(r2, d);
    }
  }
  return false;
}

double density_slack(const FSpec& f, const ScaleValue& R, int d, const Rational& lhs) {
  const double r = R.approx();
  const double log_rhs = std::log(f.approx(r)) + d * std::log(r);
  return std::exp(std::log(lhs.get_d()) - log_rhs);
}

}  // namespace davoid
