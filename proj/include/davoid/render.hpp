#pragma once

// Human-readable summaries and SVG pictures of a manifest (d <= 2).

#include <cstddef>
#include <optional>
#include <string>

#include "davoid/manifest.hpp"

namespace davoid {

struct RenderOptions {
  std::optional<int> stage;  // draw only this block
  int size = 800;            // canvas width in pixels
  // Above this many balls a block is drawn as its cube outline only.
  std::size_t max_balls = 1024;
};

// Element classes: "avoided" (one rho-sphere of radius R_j, or one tick in
// d = 1, per drawn stage), "annulus-outer", "annulus-inner", "cube", "ball".
// Deterministic. Throws ConfigError for d >= 3 or a bad stage.
std::string render_svg(const ConstructionManifest& m, const RenderOptions& options = {});

// Multi-line plain-text report of the stages and the certification.
std::string describe(const ConstructionManifest& m);

}  // namespace davoid
