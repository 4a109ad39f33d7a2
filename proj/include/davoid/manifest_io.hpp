#pragma once

// JSON manifest format. Every number is written as a string: integers in
// decimal, rationals as "p/q", square roots as "sqrt:p/q". JSON numbers and
// decimal strings are rejected so certified fields never pass through floats.

#include <filesystem>
#include <string>
#include <string_view>

#include "davoid/manifest.hpp"

namespace davoid {

inline constexpr std::string_view kManifestVersion = "1";

// Malformed documents; the message names the offending field.
class ManifestError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

std::string serialize(const ConstructionManifest& m);
ConstructionManifest parse_manifest(std::string_view text);

// Writes to a temporary file next to `path`, then renames it into place.
void write_manifest(const ConstructionManifest& m, const std::filesystem::path& path);
ConstructionManifest read_manifest(const std::filesystem::path& path);

}  // namespace davoid
