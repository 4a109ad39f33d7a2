#include "davoid/builder.hpp"

#include "davoid/certify.hpp"

namespace davoid {

namespace {

RadicalSum half(const ScaleValue& R) { return Rational(1, 2) * RadicalSum(R); }

// Every vertex anchor + M * s, s in {0, 1}^d.
template <typename Visit>
void for_each_vertex(const IntegerVector& anchor, const Integer& M, Visit&& visit) {
  const std::size_t d = anchor.size();
  IntegerVector w(d);
  for (unsigned long mask = 0; mask < (1ul << d); ++mask) {
    for (std::size_t i = 0; i < d; ++i) w[i] = anchor[i] + (((mask >> i) & 1u) ? M : Integer(0));
    if (!visit(w)) return;
  }
}

Integer largest_fitting_side(const PlanContext& ctx, const ScaleValue& R, const ScaleValue& R_prev,
                             const Integer& M0, const Rational& r) {
  auto fits = [&](const Integer& M) {
    return place_cube(ctx.norm, ctx.constants, R, R_prev, M, ctx.eps0, r).fits;
  };
  if (fits(M0)) return M0;
  if (!fits(Integer(0))) return Integer(-1);
  Integer lo = 0, hi = M0;  // fits(lo), !fits(hi)
  while (hi - lo > 1) {
    Integer mid = (lo + hi) / 2;
    if (fits(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

Rational initial_epsilon(const ScaleValue& s_min) {
  Rational e = dyadic_floor(RadicalSum(s_min));
  return e < 1 ? e : Rational(1);
}

Placement place_cube(const NormSpec& norm, const EquivalenceConstants& consts, const ScaleValue& R_n,
                     const ScaleValue& R_prev, const Integer& M, const Rational& eps0,
                     const Rational& ball_radius) {
  Placement p;
  if (M < 0) return p;
  RadicalSum target = Rational(10) * RadicalSum(R_prev) + RadicalSum(eps0);
  target *= Rational(1) / consts.c_lo;
  p.anchor.assign(norm.dim(), Integer(0));
  p.anchor[0] = ceil_of(target);
  bool ok = true;
  for_each_vertex(p.anchor, M, [&](const IntegerVector& w) {
    RadicalSum slack = half(R_n) - RadicalSum(eval_exact(norm, w)) - RadicalSum(ball_radius);
    ok = is_positive(slack);
    return ok;
  });
  p.fits = ok;
  return p;
}

Stage plan_stage(const PlanContext& ctx, const StageSeed& prev) {
  const int d = ctx.norm.dim();
  const Rational r = prev.eps / 4;
  const Rational delta = pow(Rational(prev.eps / (16 * ctx.constants.C_hi)), d);
  ScaleValue lower = max(prev.R.scaled(100), threshold(ctx.f, delta));

  for (int attempt = 0; attempt <= ctx.options.max_escalations; ++attempt) {
    Stage s;
    s.n = prev.n + 1;
    s.gap = find_gap(ctx.norm, lower, ctx.options.budgets);
    s.R = s.gap.R;
    s.eps = s.gap.eps < prev.eps ? s.gap.eps : prev.eps;
    s.eps_prev = prev.eps;
    s.ball_radius = r;
    s.initial_side = floor_of(Rational(1) / (4 * ctx.constants.C_hi) * RadicalSum(s.R));
    s.side = largest_fitting_side(ctx, s.R, prev.R, s.initial_side, r);
    if (s.side >= 0) {
      s.anchor = place_cube(ctx.norm, ctx.constants, s.R, prev.R, s.side, ctx.eps0, r).anchor;
      s.ball_count = pow(Integer(s.side + 1), static_cast<unsigned long>(d));
      if (density_bound_holds(ctx.f, s.R, d, Rational(s.ball_count) * pow(r, d))) return s;
    }
    lower = s.R.scaled(2);
  }
  throw Error("stage " + std::to_string(prev.n + 1) + ": density bound still fails after " +
              std::to_string(ctx.options.max_escalations) + " escalations");
}

ConstructionManifest build(const NormSpec& norm, const FSpec& f, int stages, const BuildOptions& options) {
  if (stages < 1) throw ConfigError("need at least one stage");
  if (!norm.exact_capable()) {
    throw NotExact("norm " + norm.to_string() + " has no exact lattice arithmetic; use l1, l2, linf or poly");
  }
  if (!f.tends_to_zero()) throw ConfigError("decay function " + f.to_string() + " does not tend to 0");

  ConstructionManifest m;
  m.dim = norm.dim();
  m.norm = norm;
  m.f = f;
  m.constants = equivalence_constants(norm);
  m.s_min = min_lattice_norm(norm, options.budgets.enumeration);
  m.eps0 = initial_epsilon(m.s_min);

  PlanContext ctx{norm, f, m.constants, m.s_min, m.eps0, options};
  StageSeed seed{0, ScaleValue::rational(1), m.eps0};
  for (int n = 1; n <= stages; ++n) {
    Stage s = plan_stage(ctx, seed);
    seed = StageSeed{s.n, s.R, s.eps};
    m.stages.push_back(std::move(s));
  }

  CertifyOptions copts;
  copts.budgets = options.budgets;
  m.certification = certify(m, copts);
  if (!m.certification.certified()) {
    std::string why;
    for (const auto& c : m.certification.failures()) {
      why += "\n  " + to_string(c.check) + " stage " + std::to_string(c.stage) + ": " + c.detail;
    }
    throw Error("construction did not certify:" + why);
  }
  return m;
}

}  // namespace davoid
