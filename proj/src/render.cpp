#include "davoid/render.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

namespace davoid {

namespace {

constexpr int kSphereSegments = 256;
constexpr int kBallSegments = 32;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

class Canvas {
 public:
  Canvas(double extent, int size) : extent_(extent), size_(size) {}

  double x(double v) const { return (v + extent_) / (2 * extent_) * size_; }
  double y(double v) const { return (extent_ - v) / (2 * extent_) * size_; }
  double scale() const { return size_ / (2 * extent_); }

 private:
  double extent_;
  int size_;
};

// Closed polygon tracing {x : rho(x - c) = radius}.
std::string sphere_path(const NormSpec& norm, const Canvas& c, double cx, double cy, double radius, int segments) {
  std::string d;
  for (int i = 0; i < segments; ++i) {
    const double t = 2 * std::numbers::pi * i / segments;
    const double u[2] = {std::cos(t), std::sin(t)};
    const double k = radius / eval_approx(norm, u);
    d += (i ? " L " : "M ") + num(c.x(cx + k * u[0])) + " " + num(c.y(cy + k * u[1]));
  }
  return d + " Z";
}

std::vector<int> drawn_stages(const ConstructionManifest& m, const RenderOptions& o) {
  if (m.dim >= 3) throw ConfigError("rendering supports d = 1 and d = 2 only, got d = " + std::to_string(m.dim));
  if (m.stages.empty()) throw ConfigError("manifest has no stages to render");
  if (o.stage) {
    if (*o.stage < 1 || *o.stage > static_cast<int>(m.stages.size())) {
      throw ConfigError("stage " + std::to_string(*o.stage) + " is out of range");
    }
    return {*o.stage};
  }
  std::vector<int> all;
  for (int n = 1; n <= static_cast<int>(m.stages.size()); ++n) all.push_back(n);
  return all;
}

std::string render_1d(const ConstructionManifest& m, const RenderOptions& o, const std::vector<int>& stages) {
  const double extent = m.stage(stages.back()).R.approx() * 1.05;
  const int width = o.size;
  const int height = 120;
  auto px = [&](double v) { return v / extent * width; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<line class=\"axis\" x1=\"0\" y1=\"60\" x2=\"" << width << "\" y2=\"60\" stroke=\"black\"/>\n";
  for (int n : stages) {
    const Stage& s = m.stage(n);
    const double R = s.R.approx();
    out << "<g class=\"stage\" data-stage=\"" << n << "\">\n";
    out << "<line class=\"avoided\" x1=\"" << num(px(R)) << "\" y1=\"30\" x2=\"" << num(px(R))
        << "\" y2=\"90\" stroke=\"red\"/>\n";
    out << "<line class=\"annulus-outer\" x1=\"" << num(px(R / 2)) << "\" y1=\"45\" x2=\"" << num(px(R / 2))
        << "\" y2=\"75\" stroke=\"gray\"/>\n";
    const double inner = 10 * m.radius(n - 1).approx();
    out << "<line class=\"annulus-inner\" x1=\"" << num(px(inner)) << "\" y1=\"45\" x2=\"" << num(px(inner))
        << "\" y2=\"75\" stroke=\"gray\"/>\n";
    const double a = s.anchor[0].get_d();
    const double M = s.side.get_d();
    const double r = s.ball_radius.get_d();
    out << "<rect class=\"cube\" x=\"" << num(px(a)) << "\" y=\"56\" width=\"" << num(px(M)) << "\" height=\"8\""
        << " fill=\"none\" stroke=\"blue\"/>\n";
    if (s.side + 1 <= Integer(static_cast<unsigned long>(o.max_balls))) {
      for (long i = 0; i <= s.side.get_si(); ++i) {
        out << "<rect class=\"ball\" x=\"" << num(px(a + i - r)) << "\" y=\"52\" width=\"" << num(px(2 * r))
            << "\" height=\"16\" fill=\"blue\"/>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_2d(const ConstructionManifest& m, const RenderOptions& o, const std::vector<int>& stages) {
  const double extent = m.stage(stages.back()).R.approx() / m.constants.c_lo.get_d() * 1.05;
  const Canvas c(extent, o.size);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.size << "\" height=\"" << o.size
      << "\" viewBox=\"0 0 " << o.size << " " << o.size << "\">\n";
  for (int n : stages) {
    const Stage& s = m.stage(n);
    const double R = s.R.approx();
    out << "<g class=\"stage\" data-stage=\"" << n << "\">\n";
    out << "<path class=\"avoided\" d=\"" << sphere_path(m.norm, c, 0, 0, R, kSphereSegments)
        << "\" fill=\"none\" stroke=\"red\"/>\n";
    out << "<path class=\"annulus-outer\" d=\"" << sphere_path(m.norm, c, 0, 0, R / 2, kSphereSegments)
        << "\" fill=\"none\" stroke=\"gray\"/>\n";
    out << "<path class=\"annulus-inner\" d=\"" << sphere_path(m.norm, c, 0, 0, 10 * m.radius(n - 1).approx(),
                                                               kSphereSegments)
        << "\" fill=\"none\" stroke=\"gray\"/>\n";
    const double ax = s.anchor[0].get_d();
    const double ay = s.anchor[1].get_d();
    const double M = s.side.get_d();
    out << "<rect class=\"cube\" x=\"" << num(c.x(ax)) << "\" y=\"" << num(c.y(ay + M)) << "\" width=\""
        << num(M * c.scale()) << "\" height=\"" << num(M * c.scale()) << "\" fill=\"none\" stroke=\"blue\"/>\n";
    if (s.ball_count <= Integer(static_cast<unsigned long>(o.max_balls))) {
      const double r = s.ball_radius.get_d();
      const long side = s.side.get_si();
      for (long i = 0; i <= side; ++i) {
        for (long j = 0; j <= side; ++j) {
          out << "<path class=\"ball\" d=\"" << sphere_path(m.norm, c, ax + i, ay + j, r, kBallSegments)
              << "\" fill=\"blue\"/>\n";
        }
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render_svg(const ConstructionManifest& m, const RenderOptions& options) {
  const std::vector<int> stages = drawn_stages(m, options);
  return m.dim == 1 ? render_1d(m, options, stages) : render_2d(m, options, stages);
}

std::string describe(const ConstructionManifest& m) {
  std::ostringstream out;
  out << "dimension " << m.dim << ", norm " << m.norm.to_string() << ", f = " << m.f.to_string() << "\n";
  out << "c_lo = " << to_string(m.constants.c_lo) << ", C_hi = " << to_string(m.constants.C_hi)
      << ", s_min = " << m.s_min.to_string() << ", eps_0 = " << to_string(m.eps0) << "\n";
  for (const Stage& s : m.stages) {
    out << "stage " << s.n << ": R = " << s.R.to_string() << " (~" << num(s.R.approx()) << "), eps = "
        << to_string(s.eps) << ", anchor (";
    for (std::size_t i = 0; i < s.anchor.size(); ++i) out << (i ? ", " : "") << to_string(s.anchor[i]);
    out << "), M = " << to_string(s.side) << (s.shrunk() ? " (shrunk from " + to_string(s.initial_side) + ")" : "")
        << ", " << to_string(s.ball_count) << " balls of radius " << to_string(s.ball_radius) << ", gap evidence "
        << to_string(s.gap.evidence) << "\n";
  }
  out << "certification: " << m.certification.status() << "\n";
  for (const auto& c : m.certification.failures()) {
    out << "  FAIL " << to_string(c.check) << " (stage " << c.stage << "): " << c.detail << "\n";
  }
  return out.str();
}

}  // namespace davoid
