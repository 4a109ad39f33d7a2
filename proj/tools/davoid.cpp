// Command-line front end: construct, verify, spectrum, sample, density,
// margin, demo, render.
//
// Exit codes: 0 success, 1 verification failed (or the construction did not
// certify), 2 configuration or usage error, 3 budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "davoid/builder.hpp"
#include "davoid/certify.hpp"
#include "davoid/manifest_io.hpp"
#include "davoid/oracle.hpp"
#include "davoid/render.hpp"

namespace {

using namespace davoid;

constexpr int kFail = 1;
constexpr int kConfig = 2;
constexpr int kBudget = 3;

struct SamplingFlags {
  std::string manifest;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10'000;
  std::optional<int> stage;

  void attach(CLI::App* app) {
    app->add_option("--manifest", manifest, "Manifest file")->required();
    app->add_option("--seed", seed, "Random seed (identical seeds replay identical streams)");
    app->add_option("--samples", samples, "Number of samples (pairs for margin)");
    app->add_option("--stage", stage, "Restrict to one stage");
  }
  SamplerConfig config() const { return {seed, samples, stage}; }
};

std::string point_text(const RationalVector& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + to_string(p[i]);
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and certify sets in R^d that avoid a growing sequence of distances"};
  app.require_subcommand(1);

  // construct
  int dim = 0;
  int stages = 0;
  std::string norm_text, f_text, out_path;
  Budgets budgets;
  auto* construct = app.add_subcommand("construct", "Build a certified finite-stage manifest");
  construct->add_option("--dim", dim, "Dimension d")->required()->check(CLI::Range(1, 64));
  construct->add_option("--norm", norm_text, "l1 | l2 | linf | poly:[(a11,...),(a21,...),...]")->required();
  construct->add_option("--f", f_text, "inv_poly:<alpha> | inv_log | step_table:(R,v),...")->required();
  construct->add_option("--stages", stages, "Number of stages")->required()->check(CLI::Range(1, 64));
  construct->add_option("--budget-enum", budgets.enumeration, "Lattice points per enumeration");
  construct->add_option("--budget-factor", budgets.factor, "Pollard-rho steps per integer");
  construct->add_option("--out", out_path, "Output manifest path")->required();

  // verify
  std::string verify_path;
  bool deep = false;
  auto* verify = app.add_subcommand("verify", "Re-check every condition of a manifest");
  verify->add_option("manifest", verify_path, "Manifest file")->required();
  verify->add_flag("--deep", deep, "Re-derive every representability verdict instead of checking witnesses");

  // spectrum
  std::string spec_norm, from_text, to_text;
  int spec_dim = 0;
  std::uint64_t spec_budget = Budgets{}.enumeration;
  auto* spectrum = app.add_subcommand("spectrum", "List the lattice norm values in [from, to]");
  spectrum->add_option("--norm", spec_norm, "Norm")->required();
  spectrum->add_option("--dim", spec_dim, "Dimension")->required()->check(CLI::Range(1, 64));
  spectrum->add_option("--from", from_text, "Lower end (p/q or sqrt:p/q)")->required();
  spectrum->add_option("--to", to_text, "Upper end (p/q or sqrt:p/q)")->required();
  spectrum->add_option("--budget", spec_budget, "Lattice points to enumerate at most");

  SamplingFlags sample_flags, density_flags, margin_flags;
  auto* sample = app.add_subcommand("sample", "Print uniform sample points of the built set");
  sample_flags.attach(sample);
  auto* density = app.add_subcommand("density", "Monte Carlo density of the set inside B(R_n)");
  density_flags.attach(density);
  auto* margin = app.add_subcommand("margin", "Sampled lower bound on |rho(x - y) - R_j|");
  margin_flags.attach(margin);

  std::string demo_norm = "linf", thickening_text = "1/8";
  int demo_dim = 2;
  std::uint64_t demo_seed = 1, demo_samples = 10'000;
  auto* demo = app.add_subcommand("demo", "Integer lattice thickened by t avoids all half-integer distances");
  demo->add_option("--norm", demo_norm, "l1 or linf");
  demo->add_option("--dim", demo_dim, "Dimension")->check(CLI::Range(1, 64));
  demo->add_option("--thickening", thickening_text, "Ball radius t < 1/4");
  demo->add_option("--seed", demo_seed, "Random seed");
  demo->add_option("--samples", demo_samples, "Number of pairs");

  std::string render_path, render_out;
  std::optional<int> render_stage;
  auto* render = app.add_subcommand("render", "SVG picture of a manifest (d <= 2)");
  render->add_option("manifest", render_path, "Manifest file")->required();
  render->add_option("--stage", render_stage, "Draw a single stage");
  render->add_option("--out", render_out, "Output SVG path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    if (*construct) {
      const NormSpec norm = NormSpec::parse(norm_text, dim);
      const FSpec f = FSpec::parse(f_text);
      BuildOptions options;
      options.budgets = budgets;
      const ConstructionManifest m = build(norm, f, stages, options);
      write_manifest(m, out_path);
      std::cout << describe(m);
      return 0;
    }
    if (*verify) {
      ConstructionManifest m = read_manifest(verify_path);
      CertifyOptions opts;
      opts.deep = deep;
      const CertReport report = certify(m, opts);
      for (const auto& c : report.checks) {
        std::printf("%-4s %-24s stage %d  %s\n", c.passed ? "ok" : "FAIL", to_string(c.check).c_str(), c.stage,
                    c.detail.c_str());
      }
      std::printf("%s\n", report.status().c_str());
      return report.certified() ? 0 : kFail;
    }
    if (*spectrum) {
      const NormSpec norm = NormSpec::parse(spec_norm, spec_dim);
      const SpectrumWindow w =
          spectrum_window(norm, ScaleValue::parse(from_text), ScaleValue::parse(to_text), spec_budget);
      for (const auto& e : w.values) std::cout << e.value.to_string() << "\n";
      return 0;
    }
    if (*sample) {
      const ConstructionManifest m = read_manifest(sample_flags.manifest);
      PointSampler sampler(m, sample_flags.seed);
      for (std::uint64_t i = 0; i < sample_flags.samples; ++i) {
        std::cout << point_text(sampler.sample(sample_flags.stage)) << "\n";
      }
      return 0;
    }
    if (*density) {
      const ConstructionManifest m = read_manifest(density_flags.manifest);
      std::vector<int> which;
      if (density_flags.stage) which.push_back(*density_flags.stage);
      else
        for (int n = 1; n <= static_cast<int>(m.stages.size()); ++n) which.push_back(n);
      for (int n : which) {
        const DensityEstimate d = mc_density(m, n, density_flags.config());
        std::printf("stage %d: estimate %.6g +- %.3g (%llu of %llu samples), exact %.6g, bound f(R_n) %.6g\n", n,
                    d.estimate, d.standard_error, static_cast<unsigned long long>(d.hits),
                    static_cast<unsigned long long>(d.samples), d.exact.approx(), d.bound);
      }
      return 0;
    }
    if (*margin) {
      const ConstructionManifest m = read_manifest(margin_flags.manifest);
      const MarginReport r = pair_margin(m, margin_flags.config());
      std::printf("pairs %llu: margin >= %s (~%.6g, nearest R_%d), predicted floor %s\n",
                  static_cast<unsigned long long>(r.pairs), to_string(r.certified_lower).c_str(), r.observed,
                  r.worst_j, to_string(r.predicted).c_str());
      std::printf("sampled evidence only; certification is done by verify\n");
      return 0;
    }
    if (*demo) {
      const NormSpec norm = NormSpec::parse(demo_norm, demo_dim);
      const DemoReport r = thickened_lattice_demo(norm, parse_rational(thickening_text), {demo_seed, demo_samples, {}});
      std::printf("pairs %llu: every distance within 2t of an integer: %s\n", static_cast<unsigned long long>(r.pairs),
                  r.all_near_integers ? "yes" : "no");
      std::printf("min distance to a half-integer %s (guaranteed >= %s)\n", to_string(r.min_half_distance).c_str(),
                  to_string(r.guaranteed).c_str());
      std::printf("density per unit cell %s\n", to_string(r.cell_density).c_str());
      return 0;
    }
    if (*render) {
      const ConstructionManifest m = read_manifest(render_path);
      RenderOptions opts;
      opts.stage = render_stage;
      write_text(render_out, render_svg(m, opts));
      return 0;
    }
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return kBudget;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "failed: %s\n", e.what());
    return kFail;
  }
  return kConfig;
}
