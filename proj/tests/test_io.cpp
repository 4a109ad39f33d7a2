#include <filesystem>
#include <fstream>
#include <regex>

#include "doctest.h"
#include "davoid/manifest_io.hpp"
#include "davoid/render.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace davoid;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string with(const ConstructionManifest& m, const std::function<void(nlohmann::json&)>& edit) {
  auto doc = nlohmann::json::parse(serialize(m));
  edit(doc);
  return doc.dump();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("round trip") {
    for (const auto* m : {&fixtures::line_manifest(), &fixtures::plane_manifest()}) {
      const std::string text = serialize(*m);
      const ConstructionManifest back = parse_manifest(text);
      CHECK(back == *m);
      CHECK(serialize(back) == text);
    }
    const auto poly = build(NormSpec::parse("poly:[(1,0),(0,1),(1/2,1/2)]", 2), FSpec::inv_poly(1), 2);
    CHECK(parse_manifest(serialize(poly)) == poly);
  }

  TEST_CASE("numbers are strings in canonical exact form") {
    const std::string text = serialize(fixtures::plane_manifest());
    CHECK(text.find("\"sqrt:65538\"") != std::string::npos);
    CHECK(text.find("\"1/2048\"") != std::string::npos);
    const auto doc = nlohmann::json::parse(text);
    std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& j) {
      CHECK_FALSE(j.is_number());
      if (j.is_structured()) {
        for (const auto& child : j) walk(child);
      }
    };
    walk(doc);
  }

  TEST_CASE("malformed documents") {
    const auto& m = fixtures::line_manifest();
    auto decimal = with(m, [](nlohmann::json& d) { d["stages"][0]["eps"] = "0.25"; });
    CHECK_THROWS_WITH_AS(parse_manifest(decimal), doctest::Contains("stages[0].eps"), ManifestError);
    auto number = with(m, [](nlohmann::json& d) { d["eps0"] = 0.25; });
    CHECK_THROWS_WITH_AS(parse_manifest(number), doctest::Contains("floating-point"), ManifestError);
    auto version = with(m, [](nlohmann::json& d) { d["version"] = "7"; });
    CHECK_THROWS_WITH_AS(parse_manifest(version), doctest::Contains("version"), ManifestError);
    auto missing = with(m, [](nlohmann::json& d) { d["stages"][1].erase("anchor"); });
    CHECK_THROWS_WITH_AS(parse_manifest(missing), doctest::Contains("stages[1].anchor"), ManifestError);
    CHECK_THROWS_AS(parse_manifest("{ not json"), ManifestError);
    auto norm = with(m, [](nlohmann::json& d) { d["norm"] = "l9"; });
    CHECK_THROWS_AS(parse_manifest(norm), ManifestError);
  }

  TEST_CASE("files are written atomically") {
    const auto dir = std::filesystem::temp_directory_path() / "davoid_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "m.json";
    write_manifest(fixtures::line_manifest(), path);
    CHECK_FALSE(std::filesystem::exists(dir / "m.json.tmp"));
    CHECK(read_manifest(path) == fixtures::line_manifest());
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_manifest(dir / "absent.json"), ConfigError);
  }

  TEST_CASE("rendering") {
    const std::string line = render_svg(fixtures::line_manifest(), {1, 800, 1024});
    CHECK(count(line, "class=\"ball\"") == 26);
    CHECK(count(line, "class=\"avoided\"") == 1);
    const std::string both = render_svg(fixtures::line_manifest());
    CHECK(count(both, "class=\"avoided\"") == 2);
    const std::string plane = render_svg(fixtures::plane_manifest());
    CHECK(count(plane, "class=\"avoided\"") == 3);
    CHECK(count(plane, "class=\"cube\"") == 3);
    CHECK(plane.rfind("<svg", 0) == 0);
    CHECK(render_svg(fixtures::plane_manifest()) == plane);
    CHECK(count(render_svg(fixtures::plane_manifest(), {1, 800, 5000}), "class=\"ball\"") == 4225);
    const auto cube = build(NormSpec::l2(3), FSpec::inv_poly(1), 1);
    CHECK_THROWS_AS(render_svg(cube), ConfigError);
    CHECK_THROWS_AS(render_svg(fixtures::line_manifest(), {3, 800, 1024}), ConfigError);
  }

  TEST_CASE("text report") {
    const std::string s = describe(fixtures::line_manifest());
    CHECK(s.find("R = 201/2") != std::string::npos);
    CHECK(s.find("certification: certified") != std::string::npos);
  }
}
