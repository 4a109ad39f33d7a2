#pragma once

#include "davoid/builder.hpp"

namespace fixtures {

// d = 1, l2, f(R) = 1/R, two stages.
inline const davoid::ConstructionManifest& line_manifest() {
  static const davoid::ConstructionManifest m =
      davoid::build(davoid::NormSpec::l2(1), davoid::FSpec::inv_poly(1), 2);
  return m;
}

// d = 2, l2, f(R) = 1/R, three stages.
inline const davoid::ConstructionManifest& plane_manifest() {
  static const davoid::ConstructionManifest m =
      davoid::build(davoid::NormSpec::l2(2), davoid::FSpec::inv_poly(1), 3);
  return m;
}

inline davoid::Rational q(const char* text) { return davoid::parse_rational(text); }

}  // namespace fixtures
