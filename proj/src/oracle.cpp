#include "davoid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace davoid {

namespace {

constexpr int kUnitBits = 53;
constexpr std::uint64_t kRejectionTries = 100'000;
const Rational kEnclosureWidth(1, Integer(1) << 40);

void require_stage(const ConstructionManifest& m, int n) {
  if (n < 1 || n > static_cast<int>(m.stages.size())) {
    throw ConfigError("stage " + std::to_string(n) + " is out of range 1.." + std::to_string(m.stages.size()));
  }
}

// Visits every integer point of the box prod [lo_i, hi_i].
template <typename Visit>
void for_each_box_point(const IntegerVector& lo, const IntegerVector& hi, Visit&& visit) {
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (lo[i] > hi[i]) return;
  }
  IntegerVector x = lo;
  while (true) {
    if (visit(x)) return;
    std::size_t i = 0;
    while (i < d) {
      if (x[i] < hi[i]) {
        ++x[i];
        break;
      }
      x[i] = lo[i];
      ++i;
    }
    if (i == d) return;
  }
}

Rational lower_bound_distance(const std::pair<Rational, Rational>& a, const std::pair<Rational, Rational>& b) {
  Rational gap = std::max(Rational(a.first - b.second), Rational(b.first - a.second));
  return gap > 0 ? gap : Rational(0);
}

}  // namespace

bool contains(const ConstructionManifest& m, std::span<const Rational> y) {
  if (static_cast<int>(y.size()) != m.dim) throw ConfigError("point dimension does not match the manifest");
  const std::size_t d = y.size();
  for (const Stage& s : m.stages) {
    const Rational reach = s.ball_radius / m.constants.c_lo;
    IntegerVector lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::max(s.anchor[i], ceil_of(Rational(y[i] - reach)));
      hi[i] = std::min(Integer(s.anchor[i] + s.side), floor_of(Rational(y[i] + reach)));
    }
    const ScaleValue r = ScaleValue::rational(s.ball_radius);
    bool found = false;
    RationalVector diff(d);
    for_each_box_point(lo, hi, [&](const IntegerVector& x) {
      for (std::size_t i = 0; i < d; ++i) diff[i] = Rational(x[i]) - y[i];
      found = compare_norm_to(m.norm, diff, r) == std::strong_ordering::less;
      return found;
    });
    if (found) return true;
  }
  return false;
}

PointSampler::PointSampler(const ConstructionManifest& m, std::uint64_t seed) : m_(m), rng_(seed) {}

Integer PointSampler::uniform_integer(const Integer& upper) {
  if (upper < 0) throw ConfigError("empty sampling range");
  if (upper.fits_ulong_p()) {
    std::uniform_int_distribution<unsigned long> dist(0, upper.get_ui());
    return Integer(dist(rng_));
  }
  const std::size_t bits = mpz_sizeinbase(upper.get_mpz_t(), 2);
  while (true) {
    Integer z = 0;
    for (std::size_t have = 0; have < bits; have += 64) {
      z <<= 64;
      const std::uint64_t w = rng_();
      z += Integer(static_cast<unsigned long>(w));
    }
    z >>= static_cast<mp_bitcnt_t>((bits + 63) / 64 * 64 - bits);
    if (z <= upper) return z;
  }
}

Rational PointSampler::uniform_unit() {
  const std::uint64_t k = rng_() >> (64 - kUnitBits);
  Rational u(Integer(static_cast<unsigned long>(2 * k + 1)), Integer(1) << (kUnitBits + 1));
  u.canonicalize();
  return u;
}

RationalVector PointSampler::in_ball(const Rational& radius) {
  const Rational half_width = radius / m_.constants.c_lo;
  const ScaleValue r = ScaleValue::rational(radius);
  RationalVector x(m_.dim);
  for (std::uint64_t tries = 0; tries < kRejectionTries; ++tries) {
    for (auto& xi : x) xi = half_width * (2 * uniform_unit() - 1);
    if (compare_norm_to(m_.norm, x, r) == std::strong_ordering::less) return x;
  }
  throw BudgetExceeded("rejection sampling of the norm ball kept failing");
}

RationalVector PointSampler::sample(int n) {
  require_stage(m_, n);
  const Stage& s = m_.stage(n);
  RationalVector p = in_ball(s.ball_radius);
  for (int i = 0; i < m_.dim; ++i) p[i] += Rational(s.anchor[i] + uniform_integer(s.side));
  return p;
}

RationalVector PointSampler::sample(const std::optional<int>& stage) {
  if (stage) return sample(*stage);
  if (m_.stages.empty()) throw ConfigError("manifest has no stages");
  std::uniform_int_distribution<int> pick(1, static_cast<int>(m_.stages.size()));
  return sample(pick(rng_));
}

MarginReport pair_margin(const ConstructionManifest& m, const SamplerConfig& config) {
  if (config.samples == 0) throw ConfigError("need at least one pair");
  if (m.stages.empty()) throw ConfigError("manifest has no stages");
  PointSampler sampler(m, config.seed);
  MarginReport report;
  std::vector<std::pair<Rational, Rational>> radii;
  for (const Stage& s : m.stages) radii.push_back(sqrt_bounds(s.R.square(), 96));
  report.predicted = m.stages.front().eps_prev / 2;
  for (const Stage& s : m.stages) report.predicted = std::min(report.predicted, Rational(s.eps_prev / 2));

  bool first = true;
  RationalVector diff(m.dim);
  for (std::uint64_t k = 0; k < config.samples; ++k) {
    const RationalVector x = sampler.sample(config.stage);
    const RationalVector y = sampler.sample(config.stage);
    for (int i = 0; i < m.dim; ++i) diff[i] = x[i] - y[i];
    const NormValue v = eval_norm(m.norm, diff, kEnclosureWidth);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const Rational lb = lower_bound_distance({v.lo, v.hi}, radii[j]);
      if (first || lb < report.certified_lower) {
        report.certified_lower = lb;
        report.worst_j = static_cast<int>(j) + 1;
        first = false;
      }
    }
    ++report.pairs;
  }
  report.observed = report.certified_lower.get_d();
  return report;
}

DensityEstimate mc_density(const ConstructionManifest& m, int n, const SamplerConfig& config) {
  if (config.samples == 0) throw ConfigError("samples must be positive");
  require_stage(m, n);
  const Stage& s = m.stage(n);
  DensityEstimate out;
  out.n = n;
  Rational covered = 0;
  for (int k = 1; k <= n; ++k) {
    covered += Rational(m.stage(k).ball_count) * pow(m.stage(k).ball_radius, m.dim);
  }
  out.exact = ScaleValue::sqrt(covered * covered / pow(s.R.square(), m.dim));
  out.bound = m.f.approx(s.R.approx());

  const Rational half_width = sqrt_round_up(s.R.square(), 64) / m.constants.c_lo;
  RationalVector x(m.dim);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  const std::uint64_t max_tries = config.samples * 1000;
  std::uint64_t tries = 0;
  while (out.samples < config.samples) {
    if (++tries > max_tries) throw BudgetExceeded("rejection sampling of B(R_n) kept failing");
    for (auto& xi : x) {
      const std::uint64_t k = rng() >> (64 - kUnitBits);
      Rational u(Integer(static_cast<unsigned long>(2 * k + 1)), Integer(1) << (kUnitBits + 1));
      u.canonicalize();
      xi = half_width * (2 * u - 1);
    }
    if (compare_norm_to(m.norm, x, s.R) != std::strong_ordering::less) continue;
    ++out.samples;
    if (contains(m, x)) ++out.hits;
  }
  const double p = static_cast<double>(out.hits) / static_cast<double>(out.samples);
  out.estimate = p;
  out.standard_error = std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(out.samples));
  return out;
}

DemoReport thickened_lattice_demo(const NormSpec& norm, const Rational& t, const SamplerConfig& config) {
  if (!norm.is_l1() && !norm.is_linf()) throw ConfigError("the thickened-lattice demo needs l1 or linf");
  if (t <= 0) throw ConfigError("thickening must be positive");
  if (t >= Rational(1, 4)) throw ConfigError("thickening must stay below 1/4; at 1/4 half-integer distances reappear");
  if (config.samples == 0) throw ConfigError("samples must be positive");
  const int d = norm.dim();

  // A one-block manifest wrapper so the sampler's exact ball rejection applies.
  ConstructionManifest shell;
  shell.dim = d;
  shell.norm = norm;
  shell.constants = equivalence_constants(norm);
  PointSampler sampler(shell, config.seed);
  std::mt19937_64 rng(config.seed + 1);
  std::uniform_int_distribution<long> cell(-50, 50);

  DemoReport report;
  report.guaranteed = Rational(1, 2) - 2 * t;
  report.all_near_integers = true;
  report.cell_density = pow(Rational(2 * t), d);
  if (norm.is_l1()) {
    Integer fact = 1;
    for (int i = 2; i <= d; ++i) fact *= i;
    report.cell_density /= Rational(fact);
  }
  bool first = true;
  RationalVector diff(d);
  for (std::uint64_t k = 0; k < config.samples; ++k) {
    const RationalVector a = sampler.in_ball(t);
    const RationalVector b = sampler.in_ball(t);
    for (int i = 0; i < d; ++i) diff[i] = Rational(cell(rng) - cell(rng)) + a[i] - b[i];
    const Rational z = eval_exact(norm, diff).rational_value();
    const Rational nearest_int(floor_of(Rational(z + Rational(1, 2))));
    if (!(abs(z - nearest_int) < 2 * t)) report.all_near_integers = false;
    const Rational w = z - Rational(1, 2);
    const Rational frac = w - Rational(floor_of(w));
    const Rational h = std::min(frac, Rational(1 - frac));
    if (first || h < report.min_half_distance) report.min_half_distance = h;
    first = false;
    ++report.pairs;
  }
  return report;
}

BruteReport brute_pair_check(const ConstructionManifest& m, int n, std::uint64_t budget) {
  require_stage(m, n);
  const Stage& s = m.stage(n);
  const Integer count = pow(Integer(2 * s.side + 1), static_cast<unsigned long>(m.dim));
  if (count > Integer(static_cast<unsigned long>(budget))) {
    throw BudgetExceeded("stage " + std::to_string(n) + " has " + to_string(count) +
                         " center differences, over the budget of " + std::to_string(budget));
  }
  BruteReport report;
  report.passed = true;
  const Rational half = s.eps_prev / 2;
  const IntegerVector lo(m.dim, Integer(-s.side));
  const IntegerVector hi(m.dim, s.side);
  for_each_box_point(lo, hi, [&](const IntegerVector& v) {
    ++report.differences;
    const RadicalSum rho(eval_exact(m.norm, v));
    for (int j = 1; j <= static_cast<int>(m.stages.size()); ++j) {
      const RadicalSum gap = rho - RadicalSum(m.stage(j).R);
      // |rho - R_j| > eps_{n-1} / 2
      if (!is_positive(gap - RadicalSum(half)) && !is_positive(-gap - RadicalSum(half))) {
        report.passed = false;
        report.offending = v;
        report.offending_j = j;
        report.detail = "a center difference has rho within eps_{n-1}/2 of R_" + std::to_string(j);
        return true;
      }
    }
    return false;
  });
  if (report.passed) report.detail = "ok";
  return report;
}

}  // namespace davoid
