#include "davoid/spectrum.hpp"

#include <limits>
#include <map>

namespace davoid {

namespace {

// Integer key for rho(v): the squared norm for l2, otherwise the value
// times the grid denominator.
struct KeyedNorm {
  const NormSpec& norm;
  bool euclidean;
  std::vector<std::vector<long>> rows;  // polytope rows scaled to integers

  explicit KeyedNorm(const NormSpec& n) : norm(n), euclidean(n.is_l2()) {
    if (n.kind() == NormSpec::Kind::Polytope) {
      for (const auto& row : n.scaled_functionals()) {
        std::vector<long> r;
        for (const auto& z : row) {
          if (!z.fits_slong_p() || abs(z) > Integer(1L << 30)) {
            throw BudgetExceeded("polytope coefficients too large for lattice enumeration");
          }
          r.push_back(z.get_si());
        }
        rows.push_back(std::move(r));
      }
    }
  }

  Integer denominator() const { return euclidean ? Integer(1) : norm.grid_denominator(); }

  __int128 key(std::span<const long> v) const {
    __int128 k = 0;
    if (euclidean) {
      for (long c : v) k += static_cast<__int128>(c) * c;
    } else if (norm.is_l1()) {
      for (long c : v) k += c < 0 ? -static_cast<__int128>(c) : c;
    } else if (norm.is_linf()) {
      for (long c : v) k = std::max<__int128>(k, c < 0 ? -static_cast<__int128>(c) : c);
    } else {
      for (const auto& row : rows) {
        __int128 dot = 0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += static_cast<__int128>(row[i]) * v[i];
        if (dot < 0) dot = -dot;
        k = std::max(k, dot);
      }
    }
    return k;
  }

  ScaleValue value(__int128 key) const {
    Integer z = to_integer(key);
    if (euclidean) return ScaleValue::sqrt(Rational(z));
    return ScaleValue::rational(Rational(z, denominator()));
  }

  // Smallest and largest keys whose values fall in [from, to].
  std::pair<Integer, Integer> key_range(const ScaleValue& from, const ScaleValue& to) const {
    if (euclidean) return {ceil_of(from.square()), floor_of(to.square())};
    const Rational L(denominator());
    return {ceil_of(L * RadicalSum(from)), floor_of(L * RadicalSum(to))};
  }

  static Integer to_integer(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Integer hi(static_cast<unsigned long>(u >> 64));
    Integer lo(static_cast<unsigned long>(u & ~0UL));
    Integer z = (hi << 64) + lo;
    return neg ? Integer(-z) : z;
  }
};

void require_exact(const NormSpec& norm) {
  if (!norm.exact_capable()) {
    throw NotExact("lattice spectrum of " + norm.to_string() + " is not exactly computable");
  }
}

RadicalSum squared_window_edge(const ScaleValue& R, const Rational& eps, int sign) {
  // (R + sign*eps)^2 = R^2 + eps^2 + 2 sign eps R
  RadicalSum e(Rational(R.square() + eps * eps));
  e += Rational(2 * sign) * eps * RadicalSum(R);
  return e;
}

// Integers n with (R - eps)^2 < n < (R + eps)^2.
std::pair<Integer, Integer> integers_in_squared_window(const ScaleValue& R, const Rational& eps) {
  return {floor_of(squared_window_edge(R, eps, -1)) + 1, ceil_of(squared_window_edge(R, eps, 1)) - 1};
}

GapCertificate grid_gap(const NormSpec& norm, const ScaleValue& lower) {
  const Integer& L = norm.grid_denominator();
  // Midpoints (2j+1)/(2L); take the first one >= lower.
  const Integer m = ceil_of(Rational(2 * L) * RadicalSum(lower));
  Integer j;
  Integer m1 = m - 1;
  mpz_cdiv_q_ui(j.get_mpz_t(), m1.get_mpz_t(), 2);
  if (j < 0) j = 0;
  GapCertificate cert;
  cert.R = ScaleValue::rational(Rational(2 * j + 1, 2 * L));
  cert.eps = dyadic_floor(Rational(Integer(1), Integer(4 * L)));
  cert.evidence = GapCertificate::Evidence::Grid;
  cert.grid_denominator = L;
  return cert;
}

GapCertificate enumerated_gap(const NormSpec& norm, const ScaleValue& lower, std::uint64_t budget) {
  const Rational lo_value = lower.is_rational() ? lower.rational_value() : Rational(floor_of(RadicalSum(lower)));
  for (Rational h = 1;; h *= 2) {
    Rational from = lo_value - h;
    if (from < 0) from = 0;
    SpectrumWindow w = spectrum_window(norm, ScaleValue::rational(from), ScaleValue::rational(lo_value + h + 1),
                                       budget);
    const auto& vals = w.values;
    std::size_t start = vals.size();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i].value <= lower) start = i;
    }
    if (start == vals.size()) continue;
    for (std::size_t i = start; i + 1 < vals.size(); ++i) {
      const Rational a = vals[i].value.rational_value();
      const Rational b = vals[i + 1].value.rational_value();
      const Rational mid = (a + b) / 2;
      if (ScaleValue::rational(mid) < lower) continue;
      GapCertificate cert;
      cert.R = ScaleValue::rational(mid);
      cert.eps = dyadic_floor(Rational((b - a) / 4));
      cert.evidence = GapCertificate::Evidence::Enumerated;
      SpectrumWindow check = spectrum_window(norm, ScaleValue::rational(mid - cert.eps),
                                             ScaleValue::rational(mid + cert.eps), budget);
      cert.enumerated = check.examined;
      return cert;
    }
  }
}

GapCertificate euclidean_gap(const NormSpec& norm, const ScaleValue& lower, const Budgets& budgets) {
  const int d = norm.dim();
  const Integer k0 = ceil_of(lower.square());
  GapCertificate cert;
  cert.evidence = GapCertificate::Evidence::Euclidean;

  if (d >= 4) {
    // Every integer is a sum of four squares: sit between sqrt(k) and sqrt(k+1).
    const Rational center = Rational(k0) + Rational(1, 2);
    cert.R = ScaleValue::sqrt(center);
    RadicalSum below = RadicalSum(cert.R) - RadicalSum::sqrt_of(Rational(k0));
    RadicalSum above = RadicalSum::sqrt_of(Rational(k0 + 1)) - RadicalSum(cert.R);
    const RadicalSum nearest = is_negative(below - above) ? below : above;
    cert.eps = dyadic_floor(Rational(1, 2) * nearest);
    return cert;
  }

  std::map<Integer, NonRepresentabilityWitness> known;
  auto non_rep = [&](const Integer& k) {
    auto v = classify_sum_of_squares(d, k, budgets.factor);
    if (v.verdict != Representability::NotRepresentable) return false;
    known[k] = v.witness;
    return true;
  };

  Integer k = k0;
  std::uint64_t scanned = 0;
  while (!non_rep(k)) {
    if (++scanned > budgets.scan) {
      throw BudgetExceeded("no certifiably non-representable integer within " +
                           std::to_string(budgets.scan) + " of " + to_string(k0));
    }
    ++k;
  }
  // Nearest integers not shown non-representable bound the gap. Anything
  // undecided is treated as a spectrum value.
  Integer lo = k - 1;
  for (std::uint64_t i = 0; lo > 0 && non_rep(lo); ++i, --lo) {
    if (i > budgets.scan) throw BudgetExceeded("gap run below " + to_string(k) + " too long to scan");
  }
  Integer hi = k + 1;
  for (std::uint64_t i = 0; non_rep(hi); ++i, ++hi) {
    if (i > budgets.scan) throw BudgetExceeded("gap run above " + to_string(k) + " too long to scan");
  }
  cert.R = ScaleValue::sqrt(Rational(k));
  RadicalSum below = RadicalSum(cert.R) - RadicalSum::sqrt_of(Rational(lo));
  RadicalSum above = RadicalSum::sqrt_of(Rational(hi)) - RadicalSum(cert.R);
  const RadicalSum nearest = is_negative(below - above) ? below : above;
  cert.eps = dyadic_floor(Rational(1, 2) * nearest);

  auto [first, last] = integers_in_squared_window(cert.R, cert.eps);
  for (Integer n = first; n <= last; ++n) cert.witnesses.push_back({n, known.at(n)});
  return cert;
}

GapVerdict fail(std::string reason) {
  GapVerdict v;
  v.ok = false;
  v.reason = std::move(reason);
  return v;
}

GapVerdict verify_euclidean(const NormSpec& norm, const GapCertificate& cert, const Budgets& budgets,
                            VerifyMode mode) {
  if (!norm.is_l2()) return fail("Euclidean evidence offered for non-Euclidean norm " + norm.to_string());
  const int d = norm.dim();
  auto [first, last] = integers_in_squared_window(cert.R, cert.eps);
  if (last >= first && Integer(last - first) > Integer(static_cast<unsigned long>(budgets.enumeration))) {
    throw BudgetExceeded("Euclidean gap window holds too many integers to verify");
  }
  for (Integer n = first; n <= last; ++n) {
    bool ok = false;
    if (mode == VerifyMode::Witnesses) {
      for (const auto& w : cert.witnesses) {
        if (w.k == n) {
          ok = check_witness(d, n, w.witness);
          break;
        }
      }
    } else {
      auto v = classify_sum_of_squares(d, n, budgets.factor);
      ok = v.verdict == Representability::NotRepresentable && check_witness(d, n, v.witness);
    }
    if (!ok) {
      GapVerdict out = fail("integer " + to_string(n) + " inside the squared window (" +
                            to_string(Integer(first - 1)) + ", " + to_string(Integer(last + 1)) +
                            ") has no valid non-representability witness");
      out.violating_square = n;
      if (n < Integer(1L << 40)) out.violating_vector = find_decomposition(d, n);
      return out;
    }
  }
  GapVerdict v;
  v.ok = true;
  return v;
}

GapVerdict verify_grid(const NormSpec& norm, const GapCertificate& cert, VerifyMode mode) {
  if (!norm.has_value_grid()) return fail("grid evidence offered for norm without a value grid");
  const Integer& own = norm.grid_denominator();
  Integer L = own;
  if (mode == VerifyMode::Witnesses) {
    L = cert.grid_denominator;
    if (L <= 0 || !mpz_divisible_p(L.get_mpz_t(), own.get_mpz_t())) {
      return fail("grid denominator " + to_string(L) + " is not a multiple of " + to_string(own));
    }
  }
  // Smallest multiple of 1/L strictly above R - eps must reach R + eps.
  const Rational Lq(L);
  const RadicalSum left = Lq * (RadicalSum(cert.R) - RadicalSum(cert.eps));
  const RadicalSum right = Lq * (RadicalSum(cert.R) + RadicalSum(cert.eps));
  const Integer m = floor_of(left) + 1;
  if (is_nonnegative(RadicalSum(Rational(m)) - right)) {
    GapVerdict v;
    v.ok = true;
    return v;
  }
  GapVerdict out = fail("grid value " + to_string(Rational(m, L)) + " lies inside (R - eps, R + eps)");
  // Value m/L is attained at m e_1 for norms with rho(e_1) = 1 and L = 1.
  if (L == 1 && !(norm.kind() == NormSpec::Kind::Polytope)) {
    std::vector<Integer> v(norm.dim(), 0);
    v[0] = m;
    out.violating_vector = v;
  }
  return out;
}

GapVerdict verify_enumerated(const NormSpec& norm, const GapCertificate& cert, const Budgets& budgets) {
  const RadicalSum left = RadicalSum(cert.R) - RadicalSum(cert.eps);
  const RadicalSum right = RadicalSum(cert.R) + RadicalSum(cert.eps);
  const auto from = ScaleValue::rational(Rational(std::max(Integer(0), floor_of(left))));
  const auto to = ScaleValue::rational(Rational(ceil_of(right)));
  SpectrumWindow w = spectrum_window(norm, from, to, budgets.enumeration);
  for (const auto& entry : w.values) {
    const RadicalSum v(entry.value);
    if (is_positive(v - left) && is_negative(v - right)) {
      GapVerdict out = fail("lattice value " + entry.value.to_string() + " lies inside (R - eps, R + eps)");
      out.violating_vector = std::vector<Integer>(entry.witness.begin(), entry.witness.end());
      return out;
    }
  }
  GapVerdict v;
  v.ok = true;
  return v;
}

}  // namespace

std::string to_string(GapCertificate::Evidence e) {
  switch (e) {
    case GapCertificate::Evidence::Euclidean: return "euclidean";
    case GapCertificate::Evidence::Enumerated: return "enumerated";
    case GapCertificate::Evidence::Grid: return "grid";
  }
  return "?";
}

GapCertificate::Evidence parse_evidence(const std::string& text) {
  if (text == "euclidean") return GapCertificate::Evidence::Euclidean;
  if (text == "enumerated") return GapCertificate::Evidence::Enumerated;
  if (text == "grid") return GapCertificate::Evidence::Grid;
  throw ConfigError("unknown gap evidence kind '" + text + "'");
}

SpectrumWindow spectrum_window(const NormSpec& norm, const ScaleValue& from, const ScaleValue& to,
                               std::uint64_t budget) {
  require_exact(norm);
  if (to < from) throw ConfigError("spectrum window needs from <= to");
  const auto consts = equivalence_constants(norm);
  SpectrumWindow w;
  w.from = from;
  w.to = to;
  w.shell_min_sq = from.square() / (consts.C_hi * consts.C_hi);
  w.shell_max_sq = to.square() / (consts.c_lo * consts.c_lo);

  const KeyedNorm keyed(norm);
  const auto [kmin, kmax] = keyed.key_range(from, to);
  if (kmax < kmin) return w;
  if (!kmax.fits_slong_p()) throw BudgetExceeded("spectrum window beyond exact enumeration");
  const long kmin_l = std::max(0L, kmin.get_si());
  const long kmax_l = kmax.get_si();

  std::map<long, std::vector<long>> found;
  w.examined = enumerate_lattice_shell(norm.dim(), w.shell_min_sq, w.shell_max_sq, budget,
                                       [&](std::span<const long> v) {
                                         const __int128 k = keyed.key(v);
                                         if (k < kmin_l || k > kmax_l) return;
                                         found.try_emplace(static_cast<long>(k), v.begin(), v.end());
                                       });
  for (auto& [k, v] : found) w.values.push_back({keyed.value(k), std::move(v)});
  return w;
}

GapCertificate find_gap(const NormSpec& norm, const ScaleValue& lower, const Budgets& budgets) {
  require_exact(norm);
  if (lower.square() <= 0) throw ConfigError("find_gap needs lower > 0");
  if (norm.is_l2() && norm.dim() >= 2) return euclidean_gap(norm, lower, budgets);
  if (norm.kind() == NormSpec::Kind::Lp) return grid_gap(norm, lower);  // l1, linf, 1-d l2
  try {
    return enumerated_gap(norm, lower, budgets.enumeration);
  } catch (const BudgetExceeded&) {
    return grid_gap(norm, lower);
  }
}

GapVerdict verify_gap(const NormSpec& norm, const GapCertificate& cert, const Budgets& budgets,
                      VerifyMode mode) {
  require_exact(norm);
  if (cert.eps <= 0) return fail("eps must be positive");
  if (!(cert.R.square() > cert.eps * cert.eps)) return fail("R - eps must be positive");
  switch (cert.evidence) {
    case GapCertificate::Evidence::Euclidean: return verify_euclidean(norm, cert, budgets, mode);
    case GapCertificate::Evidence::Grid: return verify_grid(norm, cert, mode);
    case GapCertificate::Evidence::Enumerated: return verify_enumerated(norm, cert, budgets);
  }
  return fail("unknown evidence");
}

}  // namespace davoid
