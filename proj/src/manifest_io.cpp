#include "davoid/manifest_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace davoid {

namespace {

using nlohmann::json;

json gap_to_json(const GapCertificate& g) {
  json witnesses = json::array();
  for (const auto& w : g.witnesses) {
    witnesses.push_back({{"k", to_string(w.k)},
                         {"cofactor", to_string(w.witness.cofactor)},
                         {"four_power", std::to_string(w.witness.four_power)}});
  }
  return {{"R", g.R.to_string()},
          {"eps", to_string(g.eps)},
          {"evidence", to_string(g.evidence)},
          {"witnesses", witnesses},
          {"grid_denominator", to_string(g.grid_denominator)},
          {"enumerated", std::to_string(g.enumerated)}};
}

json vector_to_json(const IntegerVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

// Field access with a path for diagnostics.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) throw ManifestError(path_ + "." + key + ": missing field");
    return Reader(*it, path_ + "." + key);
  }
  Reader at(std::size_t i) const { return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  std::string text() const {
    if (node_.is_number()) fail("numbers must be written as strings (no floating-point literals)");
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }

  template <typename T, typename Parse>
  T parsed(Parse&& parse) const {
    const std::string s = text();
    try {
      return parse(s);
    } catch (const Error& e) {
      fail(std::string("'") + s + "': " + e.what());
    }
  }

  Rational rational() const { return parsed<Rational>([](const std::string& s) { return parse_rational(s); }); }
  Integer integer() const { return parsed<Integer>([](const std::string& s) { return parse_integer(s); }); }
  ScaleValue scale() const { return parsed<ScaleValue>([](const std::string& s) { return ScaleValue::parse(s); }); }
  long small(long lo, long hi) const {
    const Integer z = integer();
    if (z < lo || z > hi) fail("value out of range");
    return z.get_si();
  }
  std::uint64_t count() const {
    const Integer z = integer();
    if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) fail("value out of range");
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, z.get_mpz_t());
    return v;
  }
  IntegerVector integers() const {
    IntegerVector v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).integer());
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ManifestError(path_ + ": " + what); }

 private:
  const json& node_;
  std::string path_;
};

GapCertificate gap_from_json(const Reader& r) {
  GapCertificate g;
  g.R = r.at("R").scale();
  g.eps = r.at("eps").rational();
  g.evidence = r.at("evidence").parsed<GapCertificate::Evidence>(
      [](const std::string& s) { return parse_evidence(s); });
  const Reader ws = r.at("witnesses");
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Reader w = ws.at(i);
    EuclideanWitness e;
    e.k = w.at("k").integer();
    e.witness.cofactor = w.at("cofactor").integer();
    e.witness.four_power = static_cast<unsigned long>(w.at("four_power").small(0, 1L << 30));
    g.witnesses.push_back(std::move(e));
  }
  g.grid_denominator = r.at("grid_denominator").integer();
  g.enumerated = r.at("enumerated").count();
  return g;
}

}  // namespace

std::string serialize(const ConstructionManifest& m) {
  json stages = json::array();
  for (const Stage& s : m.stages) {
    stages.push_back({{"n", std::to_string(s.n)},
                      {"R", s.R.to_string()},
                      {"eps", to_string(s.eps)},
                      {"eps_prev", to_string(s.eps_prev)},
                      {"anchor", vector_to_json(s.anchor)},
                      {"side", to_string(s.side)},
                      {"initial_side", to_string(s.initial_side)},
                      {"ball_radius", to_string(s.ball_radius)},
                      {"ball_count", to_string(s.ball_count)},
                      {"gap", gap_to_json(s.gap)}});
  }
  json checks = json::array();
  for (const auto& c : m.certification.checks) {
    checks.push_back(
        {{"check", to_string(c.check)}, {"stage", std::to_string(c.stage)}, {"passed", c.passed}, {"detail", c.detail}});
  }
  json doc = {{"version", std::string(kManifestVersion)},
              {"dim", std::to_string(m.dim)},
              {"norm", m.norm.to_string()},
              {"f", m.f.to_string()},
              {"eps0", to_string(m.eps0)},
              {"constants", {{"c_lo", to_string(m.constants.c_lo)}, {"C_hi", to_string(m.constants.C_hi)}}},
              {"s_min", m.s_min.to_string()},
              {"stages", stages},
              {"certification", {{"status", m.certification.status()}, {"checks", checks}}}};
  return doc.dump(2) + "\n";
}

ConstructionManifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  const Reader root(doc, "manifest");
  const std::string version = root.at("version").text();
  if (version != kManifestVersion) {
    throw ManifestError("manifest.version: unsupported version '" + version + "' (expected '" +
                        std::string(kManifestVersion) + "')");
  }
  ConstructionManifest m;
  m.dim = static_cast<int>(root.at("dim").small(1, 64));
  const int dim = m.dim;
  m.norm = root.at("norm").parsed<NormSpec>([dim](const std::string& s) { return NormSpec::parse(s, dim); });
  m.f = root.at("f").parsed<FSpec>([](const std::string& s) { return FSpec::parse(s); });
  m.eps0 = root.at("eps0").rational();
  m.constants.c_lo = root.at("constants").at("c_lo").rational();
  m.constants.C_hi = root.at("constants").at("C_hi").rational();
  m.s_min = root.at("s_min").scale();
  const Reader stages = root.at("stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Reader r = stages.at(i);
    Stage s;
    s.n = static_cast<int>(r.at("n").small(1, 1L << 20));
    s.R = r.at("R").scale();
    s.eps = r.at("eps").rational();
    s.eps_prev = r.at("eps_prev").rational();
    s.anchor = r.at("anchor").integers();
    s.side = r.at("side").integer();
    s.initial_side = r.at("initial_side").integer();
    s.ball_radius = r.at("ball_radius").rational();
    s.ball_count = r.at("ball_count").integer();
    s.gap = gap_from_json(r.at("gap"));
    m.stages.push_back(std::move(s));
  }
  if (root.has("certification")) {
    const Reader checks = root.at("certification").at("checks");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const Reader c = checks.at(i);
      CheckResult res;
      res.check = c.at("check").parsed<CheckId>([](const std::string& s) { return parse_check_id(s); });
      res.stage = static_cast<int>(c.at("stage").small(0, 1L << 20));
      res.passed = c.at("passed").boolean();
      res.detail = c.at("detail").text();
      m.certification.checks.push_back(std::move(res));
    }
  }
  return m;
}

void write_manifest(const ConstructionManifest& m, const std::filesystem::path& path) {
  const std::string text = serialize(m);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move manifest into place at " + path.string() + ": " + ec.message());
  }
}

ConstructionManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

}  // namespace davoid
