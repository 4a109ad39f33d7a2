#include "davoid/certify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace davoid {

namespace {

CheckOutcome pass(int stage, std::string detail = "ok") { return {true, stage, std::move(detail), {}}; }
CheckOutcome fail(int stage, std::string detail) { return {false, stage, std::move(detail), {}}; }

std::string show(const RadicalSum& e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", e.approx());
  return buf;
}

bool has_stage(const ConstructionManifest& m, int n) {
  return n >= 1 && n <= static_cast<int>(m.stages.size());
}

// Supremum of rho over the cube, attained at a vertex by convexity.
ScaleValue cube_radius(const ConstructionManifest& m, const Stage& s) {
  const std::size_t d = s.anchor.size();
  ScaleValue best;
  IntegerVector w(d);
  for (unsigned long mask = 0; mask < (1ul << d); ++mask) {
    for (std::size_t i = 0; i < d; ++i) w[i] = s.anchor[i] + (((mask >> i) & 1u) ? s.side : Integer(0));
    best = max(best, eval_exact(m.norm, w));
  }
  return best;
}

// |q|_2^2 for the point q of the box anchor + [0, side]^d nearest the origin.
Integer nearest_square(const Stage& s) {
  Integer sq = 0;
  for (const auto& t : s.anchor) {
    Integer q = 0;
    if (t > 0) q = t;
    else if (t + s.side < 0) q = t + s.side;
    sq += q * q;
  }
  return sq;
}

std::string stage_shape_problem(const ConstructionManifest& m, const Stage& s) {
  if (static_cast<int>(s.anchor.size()) != m.dim) return "anchor has the wrong dimension";
  if (s.side < 0) return "negative cube side";
  return {};
}

// Gap verdicts are needed by several checks; decide each certificate once.
class GapVerifier {
 public:
  GapVerifier(const ConstructionManifest& m, const CertifyOptions& opts) : m_(m), opts_(opts) {}

  const GapVerdict& verdict(int j) {
    auto it = cache_.find(j);
    if (it != cache_.end()) return it->second;
    const Stage& s = m_.stage(j);
    GapVerdict v;
    if (!(s.gap.R == s.R)) {
      v.reason = "gap certificate is for " + s.gap.R.to_string() + ", stage radius is " + s.R.to_string();
    } else {
      try {
        v = verify_gap(m_.norm, s.gap, opts_.budgets, opts_.deep ? VerifyMode::Rederive : VerifyMode::Witnesses);
      } catch (const Error& e) {
        v.ok = false;
        v.reason = e.what();
      }
    }
    return cache_.emplace(j, std::move(v)).first->second;
  }

 private:
  const ConstructionManifest& m_;
  const CertifyOptions& opts_;
  std::map<int, GapVerdict> cache_;
};

CheckOutcome condition_a(const ConstructionManifest& m, int n, GapVerifier& gaps) {
  if (!has_stage(m, n)) return fail(n, "no such stage");
  const Stage& s = m.stage(n);
  if (s.eps <= 0) return fail(n, "eps_n must be positive");
  if (s.eps > m.epsilon(n - 1)) return fail(n, "eps_n exceeds eps_{n-1}");
  for (int j = 1; j <= n; ++j) {
    const GapVerdict& v = gaps.verdict(j);
    if (!v.ok) {
      CheckOutcome o = fail(n, "gap around R_" + std::to_string(j) + " = " + m.stage(j).R.to_string() + ": " + v.reason);
      o.violating_vector = v.violating_vector;
      return o;
    }
    if (s.eps > m.stage(j).gap.eps) {
      return fail(n, "eps_n = " + to_string(s.eps) + " is wider than the certified gap " +
                         to_string(m.stage(j).gap.eps) + " around R_" + std::to_string(j));
    }
  }
  return pass(n);
}

CheckOutcome ball_disjoint(const ConstructionManifest& m, int n) {
  if (!has_stage(m, n)) return fail(n, "no such stage");
  const Stage& s = m.stage(n);
  if (s.eps_prev != m.epsilon(n - 1)) {
    return fail(n, "eps_prev " + to_string(s.eps_prev) + " differs from eps_" + std::to_string(n - 1) + " = " +
                       to_string(m.epsilon(n - 1)));
  }
  if (s.ball_radius != s.eps_prev / 4) return fail(n, "ball radius is not eps_{n-1} / 4");
  if (s.ball_radius <= 0) return fail(n, "ball radius must be positive");
  if (!is_nonnegative(RadicalSum(m.s_min) - RadicalSum(Rational(2 * s.ball_radius)))) {
    return fail(n, "2 r = " + to_string(Rational(2 * s.ball_radius)) + " exceeds s_min = " + m.s_min.to_string());
  }
  return pass(n);
}

CheckOutcome run_guarded(int stage, const std::function<CheckOutcome()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return fail(stage, e.what());
  }
}

}  // namespace

std::string to_string(CheckId id) {
  switch (id) {
    case CheckId::Constants: return "constants";
    case CheckId::GapA: return "gap_a";
    case CheckId::GrowthB: return "growth_b";
    case CheckId::DensityC: return "density_c";
    case CheckId::CubeFit: return "cube_fit";
    case CheckId::InnerExclusion: return "inner_exclusion";
    case CheckId::BallDisjoint: return "ball_disjoint";
    case CheckId::CrossBlockSeparation: return "cross_block_separation";
    case CheckId::AvoidanceMargin: return "avoidance_margin";
  }
  return "?";
}

CheckId parse_check_id(const std::string& text) {
  for (CheckId id : {CheckId::Constants, CheckId::GapA, CheckId::GrowthB, CheckId::DensityC, CheckId::CubeFit,
                     CheckId::InnerExclusion, CheckId::BallDisjoint, CheckId::CrossBlockSeparation,
                     CheckId::AvoidanceMargin}) {
    if (to_string(id) == text) return id;
  }
  throw ConfigError("unknown check '" + text + "'");
}

bool CertReport::certified() const {
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<CheckResult> CertReport::failures() const {
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c);
  }
  return out;
}

const Stage& ConstructionManifest::stage(int n) const {
  if (n < 1 || n > static_cast<int>(stages.size())) throw ConfigError("no stage " + std::to_string(n));
  return stages[n - 1];
}

ScaleValue ConstructionManifest::radius(int n) const {
  return n == 0 ? ScaleValue::rational(1) : stage(n).R;
}

Rational ConstructionManifest::epsilon(int n) const { return n == 0 ? eps0 : stage(n).eps; }

CheckOutcome check_constants(const ConstructionManifest& m) {
  return run_guarded(0, [&] {
    if (m.norm.dim() != m.dim) return fail(0, "norm dimension differs from manifest dimension");
    if (!m.norm.exact_capable()) return fail(0, "norm " + m.norm.to_string() + " is not exact-capable");
    if (m.constants.c_lo <= 0) return fail(0, "c_lo must be positive");
    if (m.eps0 <= 0) return fail(0, "eps_0 must be positive");
    const EquivalenceConstants fresh = equivalence_constants(m.norm);
    if (m.constants.c_lo > fresh.c_lo) {
      return fail(0, "c_lo = " + to_string(m.constants.c_lo) + " exceeds the sound value " + to_string(fresh.c_lo));
    }
    if (m.constants.C_hi < fresh.C_hi) {
      return fail(0, "C_hi = " + to_string(m.constants.C_hi) + " is below the sound value " + to_string(fresh.C_hi));
    }
    const ScaleValue s = min_lattice_norm(m.norm);
    if (!(s == m.s_min)) return fail(0, "s_min = " + m.s_min.to_string() + ", recomputed " + s.to_string());
    return pass(0);
  });
}

CheckOutcome check_condition_a(const ConstructionManifest& m, int n, const CertifyOptions& opts) {
  GapVerifier gaps(m, opts);
  return run_guarded(n, [&] { return condition_a(m, n, gaps); });
}

CheckOutcome check_growth(const ConstructionManifest& m) {
  if (m.stages.empty()) return fail(0, "manifest has no stages");
  for (int n = 1; n <= static_cast<int>(m.stages.size()); ++n) {
    if (m.stages[n - 1].n != n) return fail(n, "stages are not numbered 1, 2, ...");
    const ScaleValue need = m.radius(n - 1).scaled(100);
    if (m.radius(n) < need) {
      return fail(n, "R_" + std::to_string(n) + " = " + m.radius(n).to_string() + " < 100 R_" +
                         std::to_string(n - 1) + " = " + need.to_string());
    }
  }
  return pass(0);
}

CheckOutcome check_ball_disjoint(const ConstructionManifest& m, int n) {
  return run_guarded(n, [&] { return ball_disjoint(m, n); });
}

DensityReport check_density(const ConstructionManifest& m) {
  DensityReport report;
  report.passed = !m.stages.empty();
  VolumeEstimate omega;
  bool have_omega = false;
  try {
    omega = unit_ball_volume(m.norm, 200'000, 0.95, 1);
    have_omega = true;
  } catch (const Error&) {
  }
  for (int n = 1; n <= static_cast<int>(m.stages.size()); ++n) {
    const Stage& s = m.stage(n);
    DensityStage row;
    row.n = n;
    try {
      const std::string shape = stage_shape_problem(m, s);
      const CheckOutcome disjoint = ball_disjoint(m, n);
      const auto d = static_cast<unsigned long>(m.dim);
      if (!shape.empty()) {
        row.detail = shape;
      } else if (s.ball_count != pow(Integer(s.side + 1), d)) {
        row.detail = "ball count " + to_string(s.ball_count) + " is not (M + 1)^d";
      } else if (!disjoint.passed) {
        row.detail = "balls may overlap: " + disjoint.detail;
      } else {
        row.lhs = Rational(s.ball_count) * pow(s.ball_radius, m.dim);
        row.passed = density_bound_holds(m.f, s.R, m.dim, row.lhs);
        row.slack = density_slack(m.f, s.R, m.dim, row.lhs);
        if (have_omega) {
          row.set_volume = row.lhs.get_d() * omega.value();
          row.ball_volume = std::pow(s.R.approx(), m.dim) * omega.value();
          row.volumes_estimated = omega.kind == VolumeEstimate::Kind::Statistical;
        }
        row.detail = row.passed ? "ok" : "N r^d falls short of f(R) R^d";
      }
    } catch (const Error& e) {
      row.passed = false;
      row.detail = e.what();
    }
    report.passed = report.passed && row.passed;
    report.stages.push_back(std::move(row));
  }
  return report;
}

CubeFitOutcome check_cube_fit(const ConstructionManifest& m, int n) {
  CubeFitOutcome out;
  try {
    if (!has_stage(m, n)) {
      out.detail = "no such stage";
      return out;
    }
    const Stage& s = m.stage(n);
    if (std::string p = stage_shape_problem(m, s); !p.empty()) {
      out.detail = p;
      return out;
    }
    const ScaleValue reach = cube_radius(m, s);
    const RadicalSum outer = Rational(1, 2) * RadicalSum(s.R) - RadicalSum(reach) - RadicalSum(s.ball_radius);
    out.outer = is_positive(outer);
    const RadicalSum inner = m.constants.c_lo * RadicalSum::sqrt_of(Rational(nearest_square(s))) -
                             Rational(10) * RadicalSum(m.radius(n - 1)) - RadicalSum(s.ball_radius);
    out.inner = is_nonnegative(inner);
    std::string detail;
    if (!out.outer) detail += "cube vertex reaches rho = " + reach.to_string() + " (+ r) beyond R_n / 2";
    if (!out.inner) {
      if (!detail.empty()) detail += "; ";
      detail += "cube comes within " + show(inner) + " of the inner exclusion radius 10 R_{n-1} + r";
    }
    out.detail = detail.empty() ? "ok" : detail;
  } catch (const Error& e) {
    out.outer = out.inner = false;
    out.detail = e.what();
  }
  return out;
}

namespace {

AvoidanceReport avoidance(const ConstructionManifest& m, GapVerifier& gaps) {
  AvoidanceReport report;
  const int N = static_cast<int>(m.stages.size());
  std::vector<ScaleValue> reach(N + 1);
  for (int n = 1; n <= N; ++n) reach[n] = cube_radius(m, m.stage(n));

  auto lower = [](const RadicalSum& e) { return e.enclose(64).first; };
  auto add_failure = [&](int n, std::string detail) { report.failures.push_back(fail(n, std::move(detail))); };

  for (int n = 1; n <= N; ++n) {
    const Stage& s = m.stage(n);
    const Rational two_r = 2 * s.ball_radius;
    for (int j = 1; j <= N; ++j) {
      const Stage& sj = m.stage(j);
      if (j < n) {
        // Lattice differences miss (R_j - gap_j.eps, R_j + gap_j.eps); the
        // thickening moves distances by less than 2 r.
        const GapVerdict& v = gaps.verdict(j);
        const Rational margin = sj.gap.eps - two_r;
        report.margins.push_back({n, j, "gap", 0, margin});
        if (!v.ok) add_failure(n, "gap around R_" + std::to_string(j) + " not certified: " + v.reason);
        else if (margin < s.eps_prev / 2) {
          add_failure(n, "margin " + to_string(margin) + " to R_" + std::to_string(j) + " is below eps_{n-1} / 2");
        }
      } else {
        // Every distance inside the block is below 2 (reach + r) < R_j.
        const RadicalSum margin = RadicalSum(sj.R) - Rational(2) * RadicalSum(reach[n]) - RadicalSum(two_r);
        report.margins.push_back({n, j, "diameter", 0, lower(margin)});
        if (!is_positive(margin)) {
          add_failure(n, "block diameter is not below R_" + std::to_string(j) + " (margin " + show(margin) + ")");
        }
      }
    }
    for (int mb = 1; mb < n; ++mb) {
      const Stage& sm = m.stage(mb);
      // Distances between the blocks lie strictly inside (lo, hi).
      const RadicalSum lo = m.constants.c_lo * RadicalSum::sqrt_of(Rational(nearest_square(s))) -
                            RadicalSum(s.ball_radius) - RadicalSum(reach[mb]) - RadicalSum(sm.ball_radius);
      const RadicalSum hi = RadicalSum(reach[n]) + RadicalSum(s.ball_radius) + RadicalSum(reach[mb]) +
                            RadicalSum(sm.ball_radius);
      for (int j = 1; j <= N; ++j) {
        const RadicalSum below = lo - RadicalSum(m.stage(j).R);
        const RadicalSum above = RadicalSum(m.stage(j).R) - hi;
        Margin mg{n, j, "cross-block", mb, Rational(0)};
        if (is_nonnegative(below)) {
          mg.lower_bound = lower(below);
        } else if (is_nonnegative(above)) {
          mg.lower_bound = lower(above);
        } else {
          add_failure(n, "R_" + std::to_string(j) + " may occur between blocks " + std::to_string(mb) + " and " +
                             std::to_string(n));
          mg.lower_bound = -1;
        }
        if (mg.lower_bound < 0) mg.lower_bound = 0;
        report.margins.push_back(mg);
      }
    }
  }
  report.passed = N > 0 && report.failures.empty();
  return report;
}

}  // namespace

AvoidanceReport check_avoidance(const ConstructionManifest& m, const CertifyOptions& opts) {
  GapVerifier gaps(m, opts);
  try {
    return avoidance(m, gaps);
  } catch (const Error& e) {
    AvoidanceReport r;
    r.failures.push_back(fail(0, e.what()));
    return r;
  }
}

CertReport certify(const ConstructionManifest& m, const CertifyOptions& opts) {
  CertReport report;
  auto add = [&](CheckId id, const CheckOutcome& o) {
    report.checks.push_back({id, o.stage, o.passed, o.detail});
  };
  GapVerifier gaps(m, opts);
  const int N = static_cast<int>(m.stages.size());

  add(CheckId::Constants, check_constants(m));
  add(CheckId::GrowthB, check_growth(m));
  const DensityReport density = check_density(m);
  for (int n = 1; n <= N; ++n) {
    add(CheckId::GapA, run_guarded(n, [&] { return condition_a(m, n, gaps); }));
    add(CheckId::BallDisjoint, check_ball_disjoint(m, n));
    const DensityStage& row = density.stages[n - 1];
    add(CheckId::DensityC, {row.passed, n, row.detail, {}});
    const CubeFitOutcome fit = check_cube_fit(m, n);
    const bool shape_ok = fit.detail.find("no such") == std::string::npos;
    add(CheckId::CubeFit, {fit.outer, n, fit.outer ? "ok" : fit.detail, {}});
    add(CheckId::InnerExclusion, {fit.inner && shape_ok, n, fit.inner ? "ok" : fit.detail, {}});
  }

  AvoidanceReport av;
  try {
    av = avoidance(m, gaps);
  } catch (const Error& e) {
    av.failures.push_back(fail(0, e.what()));
  }
  for (int n = 1; n <= std::max(N, 1); ++n) {
    std::string cross, margin;
    for (const auto& f : av.failures) {
      if (f.stage != n && !(f.stage == 0 && n == 1)) continue;
      std::string& target = f.detail.find("between blocks") != std::string::npos ? cross : margin;
      if (!target.empty()) target += "; ";
      target += f.detail;
    }
    add(CheckId::CrossBlockSeparation, {cross.empty(), n, cross.empty() ? "ok" : cross, {}});
    add(CheckId::AvoidanceMargin, {margin.empty() && N > 0, n, margin.empty() ? (N > 0 ? "ok" : "no stages") : margin, {}});
  }
  return report;
}

}  // namespace davoid
