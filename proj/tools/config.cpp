#include "config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace urnlab::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// YAML access with diagnostics

std::string location(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& path, const std::string& msg) {
  throw ConfigError(location(n) + "field '" + path + "': " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const YAML::Node& n, const std::string& path, std::set<std::string> allowed) {
  if (!n.IsMap()) fail(n, path, "expected a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, join(path, key), "unknown field");
  }
}

YAML::Node child(const YAML::Node& parent, const std::string& key, const std::string& path,
                 bool required) {
  YAML::Node c = parent[key];
  if (!c && required) fail(parent, join(path, key), "missing");
  return c;
}

std::string as_string(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(n, path, "expected a scalar");
  return n.Scalar();
}

double as_double(const YAML::Node& n, const std::string& path) {
  const std::string s = as_string(n, path);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) fail(n, path, "expected a finite number, got '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(n, path, "expected a number, got '" + s + "'");
  }
}

long long as_integer(const YAML::Node& n, const std::string& path) {
  const std::string s = as_string(n, path);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) fail(n, path, "expected an integer, got '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(n, path, "expected an integer, got '" + s + "'");
  }
}

std::uint64_t as_unsigned(const YAML::Node& n, const std::string& path) {
  const std::string s = as_string(n, path);
  if (s.empty() || s[0] == '-') fail(n, path, "expected a non-negative integer, got '" + s + "'");
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) fail(n, path, "expected an integer, got '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(n, path, "expected a non-negative integer, got '" + s + "'");
  }
}

long long bounded(const YAML::Node& n, const std::string& path, long long lo, long long hi) {
  const long long v = as_integer(n, path);
  if (v < lo || v > hi) {
    fail(n, path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                      std::to_string(v));
  }
  return v;
}

Rational as_probability(const YAML::Node& n, const std::string& path) {
  Rational p;
  try {
    p = parse_rational(as_string(n, path));
  } catch (const ParameterError& e) {
    fail(n, path, e.what());
  }
  if (p < 0 || p > 1) fail(n, path, "probability outside [0, 1]");
  return p;
}

std::vector<YAML::Node> as_list(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) fail(n, path, "expected a list");
  std::vector<YAML::Node> out;
  for (const auto& e : n) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// YAML -> canonical JSON

struct SpaceInfo {
  bool finite = false;
  std::uint32_t colors = 0;
};

json balls_of(const YAML::Node& n, const std::string& path, std::uint32_t d) {
  json balls = json::array();
  if (!n) return balls;
  for (std::size_t i = 0; const auto& b : as_list(n, path)) {
    balls.push_back(bounded(b, index(path, i++), 1, d));
  }
  return balls;
}

void check_sum(const YAML::Node& n, const std::string& path, const Rational& sum) {
  if (sum != 1) fail(n, path, "probabilities sum to " + to_string(sum) + ", not 1");
}

json innovation_law(const YAML::Node& n, const std::string& path, std::uint32_t d) {
  json law = json::array();
  Rational sum = 0;
  for (std::size_t i = 0; const auto& row : as_list(n, path)) {
    const std::string p = index(path, i++);
    check_keys(row, p, {"balls", "p"});
    const Rational pr = as_probability(child(row, "p", p, true), join(p, "p"));
    sum += pr;
    law.push_back({{"balls", balls_of(row["balls"], join(p, "balls"), d)}, {"p", to_string(pr)}});
  }
  check_sum(n, path, sum);
  return law;
}

json canonical_kernel(const YAML::Node& k, SpaceInfo& space) {
  const std::string path = "kernel";
  if (!k.IsMap()) fail(k, path, "expected a mapping");
  const std::string kind = as_string(child(k, "kind", path, true), "kernel.kind");
  json out{{"kind", kind}};
  if (kind == "simon") {
    check_keys(k, path, {"kind", "p"});
    const auto pn = child(k, "p", path, true);
    const double p = as_double(pn, "kernel.p");
    if (!(p > 0.0 && p < 1.0)) fail(pn, "kernel.p", "must satisfy 0 < p < 1");
    out["p"] = p;
    space = {false, 0};
    return out;
  }
  if (kind != "finite" && kind != "custom-table") {
    fail(k["kind"], "kernel.kind", "unknown kernel kind '" + kind + "' (simon, finite, custom-table)");
  }
  const auto d = static_cast<std::uint32_t>(bounded(child(k, "colors", path, true), "kernel.colors", 1, 64));
  out["colors"] = d;
  space = {true, d};
  if (kind == "finite") {
    check_keys(k, path, {"kind", "colors", "copy_law", "innovation"});
    const auto cl = child(k, "copy_law", path, true);
    json copy = json::array();
    Rational sum = 0;
    for (std::size_t i = 0; const auto& row : as_list(cl, "kernel.copy_law")) {
      const std::string p = index("kernel.copy_law", i++);
      check_keys(row, p, {"copies", "p"});
      const Rational pr = as_probability(child(row, "p", p, true), join(p, "p"));
      sum += pr;
      copy.push_back({{"copies", bounded(child(row, "copies", p, true), join(p, "copies"), -1, 1'000'000)},
                      {"p", to_string(pr)}});
    }
    check_sum(cl, "kernel.copy_law", sum);
    out["copy_law"] = copy;
    // One shared law (a list of rows) or one law per color (a list of lists).
    const auto inn = child(k, "innovation", path, true);
    const auto laws = as_list(inn, "kernel.innovation");
    json innovation = json::array();
    if (!laws.empty() && laws.front().IsSequence()) {
      if (laws.size() != d && laws.size() != 1) {
        fail(inn, "kernel.innovation", "need one law per color or a single shared law");
      }
      for (std::size_t i = 0; i < laws.size(); ++i) {
        innovation.push_back(innovation_law(laws[i], index("kernel.innovation", i), d));
      }
    } else {
      innovation.push_back(innovation_law(inn, "kernel.innovation", d));
    }
    out["innovation"] = innovation;
    return out;
  }
  check_keys(k, path, {"kind", "colors", "table", "lambda2"});
  const auto tn = child(k, "table", path, true);
  const auto rows = as_list(tn, "kernel.table");
  if (rows.size() != d) fail(tn, "kernel.table", "need one outcome list per color");
  json table = json::array();
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const std::string sp = index("kernel.table", s);
    json outcomes = json::array();
    Rational sum = 0;
    for (std::size_t i = 0; const auto& o : as_list(rows[s], sp)) {
      const std::string p = index(sp, i++);
      check_keys(o, p, {"copies", "balls", "p"});
      const Rational pr = as_probability(child(o, "p", p, true), join(p, "p"));
      sum += pr;
      outcomes.push_back({{"balls", balls_of(o["balls"], join(p, "balls"), d)},
                          {"copies", bounded(child(o, "copies", p, true), join(p, "copies"), -1, 1'000'000)},
                          {"p", to_string(pr)}});
    }
    check_sum(rows[s], sp, sum);
    table.push_back(outcomes);
  }
  out["table"] = table;
  if (const auto l = k["lambda2"]; l && !l.IsNull()) {
    try {
      out["lambda2"] = to_string(parse_rational(as_string(l, "kernel.lambda2")));
    } catch (const ParameterError& e) {
      fail(l, "kernel.lambda2", e.what());
    }
  } else {
    out["lambda2"] = nullptr;
  }
  return out;
}

json canonical_color(const YAML::Node& n, const std::string& path, const SpaceInfo& space,
                     std::set<std::string> extra = {}) {
  extra.insert({"tag", "point"});
  check_keys(n, path, extra);
  const bool has_tag = static_cast<bool>(n["tag"]);
  const bool has_point = static_cast<bool>(n["point"]);
  if (has_tag == has_point) fail(n, path, "give exactly one of 'tag' or 'point'");
  if (has_tag) {
    if (!space.finite) fail(n["tag"], join(path, "tag"), "tag color outside the kernel's continuum space");
    const auto t = as_integer(n["tag"], join(path, "tag"));
    if (t < 1 || t > space.colors) {
      fail(n["tag"], join(path, "tag"),
           "tag " + std::to_string(t) + " outside {1.." + std::to_string(space.colors) + "}");
    }
    return {{"tag", t}};
  }
  if (space.finite) fail(n["point"], join(path, "point"), "point color outside the kernel's tag space");
  const double x = as_double(n["point"], join(path, "point"));
  if (!(x >= 0.0 && x <= 1.0)) fail(n["point"], join(path, "point"), "point must lie in [0, 1]");
  return {{"point", x}};
}

json canonical_observable(const YAML::Node& n, const std::string& path, const SpaceInfo& space) {
  if (!n.IsMap()) fail(n, path, "expected a mapping");
  const std::string name = as_string(child(n, "name", path, true), join(path, "name"));
  const bool ok = !name.empty() && std::isalpha(static_cast<unsigned char>(name[0])) &&
                  std::all_of(name.begin(), name.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                  });
  if (!ok) fail(n["name"], join(path, "name"), "names are [A-Za-z][A-Za-z0-9_]*");
  const std::string kind = as_string(child(n, "kind", path, true), join(path, "kind"));
  json out{{"name", name}, {"kind", kind}};
  auto need_continuum = [&] {
    if (space.finite) fail(n["kind"], join(path, "kind"), "'" + kind + "' needs the continuum space");
  };
  auto need_finite = [&] {
    if (!space.finite) fail(n["kind"], join(path, "kind"), "'" + kind + "' needs a finite kernel");
  };
  if (kind == "indicator") {
    check_keys(n, path, {"name", "kind", "lo", "hi"});
    need_continuum();
    const double lo = as_double(child(n, "lo", path, true), join(path, "lo"));
    const double hi = as_double(child(n, "hi", path, true), join(path, "hi"));
    if (!(0.0 <= lo && lo < hi && hi <= 1.0)) fail(n, path, "need 0 <= lo < hi <= 1");
    out["lo"] = lo;
    out["hi"] = hi;
  } else if (kind == "monomial") {
    check_keys(n, path, {"name", "kind", "power"});
    need_continuum();
    out["power"] = bounded(child(n, "power", path, true), join(path, "power"), 0, 32);
  } else if (kind == "tag") {
    check_keys(n, path, {"name", "kind", "tag"});
    need_finite();
    out["tag"] = bounded(child(n, "tag", path, true), join(path, "tag"), 1, space.colors);
  } else if (kind == "table") {
    check_keys(n, path, {"name", "kind", "values"});
    need_finite();
    const auto vn = child(n, "values", path, true);
    const auto vals = as_list(vn, join(path, "values"));
    if (vals.size() != space.colors) fail(vn, join(path, "values"), "need one value per tag");
    json v = json::array();
    for (std::size_t i = 0; i < vals.size(); ++i) v.push_back(as_double(vals[i], index(join(path, "values"), i)));
    out["values"] = v;
  } else if (kind == "constant") {
    check_keys(n, path, {"name", "kind", "value"});
    out["value"] = as_double(child(n, "value", path, true), join(path, "value"));
  } else {
    fail(n["kind"], join(path, "kind"),
         "unknown observable kind '" + kind + "' (indicator, monomial, tag, table, constant)");
  }
  return out;
}

const std::set<std::string> kTests{"lln",           "bridge",     "covariance", "functional",
                                   "supercritical", "degeneracy", "martingale"};

json canonicalize(const YAML::Node& root) {
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  check_keys(root, "", {"kernel", "initial_urn", "observables", "trackers", "horizons", "times",
                        "time_scale", "replicas", "base_seed", "batch_size", "tests", "tolerances",
                        "validation", "oracle", "output"});
  json c;
  SpaceInfo space;
  c["kernel"] = canonical_kernel(child(root, "kernel", "", true), space);

  const auto urn = child(root, "initial_urn", "", true);
  json atoms = json::array();
  for (std::size_t i = 0; const auto& a : as_list(urn, "initial_urn")) {
    const std::string p = index("initial_urn", i++);
    json atom = canonical_color(a, p, space, {"multiplicity"});
    const auto m = as_integer(child(a, "multiplicity", p, true), join(p, "multiplicity"));
    if (m < 1) fail(a["multiplicity"], join(p, "multiplicity"), "multiplicity must be >= 1, got " + std::to_string(m));
    atom["multiplicity"] = m;
    atoms.push_back(atom);
  }
  if (atoms.empty()) fail(urn, "initial_urn", "the initial urn must contain at least one ball");
  c["initial_urn"] = atoms;

  json obs = json::array();
  std::set<std::string> names;
  if (const auto o = root["observables"]) {
    for (std::size_t i = 0; const auto& e : as_list(o, "observables")) {
      const std::string p = index("observables", i++);
      json spec = canonical_observable(e, p, space);
      if (!names.insert(spec["name"].get<std::string>()).second) fail(e, p, "duplicate observable name");
      obs.push_back(spec);
    }
  }
  c["observables"] = obs;

  json trackers = json::array();
  if (const auto t = root["trackers"]) {
    std::set<std::string> seen;
    for (std::size_t i = 0; const auto& e : as_list(t, "trackers")) {
      const std::string p = index("trackers", i++);
      const std::string name = as_string(e, p);
      if (!names.count(name)) fail(e, p, "no observable named '" + name + "'");
      if (name == "a") fail(e, p, "'a' is reserved for the modulation martingale");
      if (!seen.insert(name).second) fail(e, p, "duplicate tracker");
      trackers.push_back(name);
    }
  }
  c["trackers"] = trackers;

  json horizons = json::array();
  if (const auto h = root["horizons"]) {
    std::uint64_t last = 0;
    for (std::size_t i = 0; const auto& e : as_list(h, "horizons")) {
      const std::string p = index("horizons", i);
      const auto v = as_unsigned(e, p);
      if (i++ > 0 && v <= last) fail(e, p, "horizons must be strictly increasing");
      last = v;
      horizons.push_back(v);
    }
  }
  c["horizons"] = horizons;

  json times = json::array();
  if (const auto t = root["times"]) {
    double last = 0.0;
    for (std::size_t i = 0; const auto& e : as_list(t, "times")) {
      const std::string p = index("times", i++);
      const double v = as_double(e, p);
      if (!(v > last)) fail(e, p, "times must be positive and strictly increasing");
      last = v;
      times.push_back(v);
    }
  }
  c["times"] = times;

  double time_scale = 0.0;
  if (const auto ts = root["time_scale"]) {
    time_scale = as_double(ts, "time_scale");
    if (time_scale < 0.0) fail(ts, "time_scale", "must be positive, or 0 when unused");
  }
  c["time_scale"] = time_scale;

  c["replicas"] = root["replicas"] ? bounded(root["replicas"], "replicas", 1, 100'000'000) : 1;
  c["base_seed"] = root["base_seed"] ? as_unsigned(root["base_seed"], "base_seed") : std::uint64_t{0};
  c["batch_size"] = root["batch_size"] ? bounded(root["batch_size"], "batch_size", 1, 100'000'000) : 1000;

  json tests = json::array();
  if (const auto t = root["tests"]) {
    for (std::size_t i = 0; const auto& e : as_list(t, "tests")) {
      const std::string p = index("tests", i++);
      const std::string name = as_string(e, p);
      if (!kTests.count(name)) fail(e, p, "unknown test '" + name + "'");
      tests.push_back(name);
    }
  }
  c["tests"] = tests;

  const Tolerances defaults;
  json tol{{"bridge_relative", defaults.bridge_relative},
           {"critical_relative", defaults.critical_relative},
           {"covariance_relative", defaults.covariance_relative},
           {"functional_relative", defaults.functional_relative},
           {"se_multiplier", defaults.se_multiplier},
           {"ks_alpha", defaults.ks_alpha},
           {"lln_band", defaults.lln_band},
           {"min_correlation", defaults.min_correlation},
           {"control_band", defaults.control_band},
           {"degenerate_threshold", defaults.degenerate_threshold},
           {"martingale_se", defaults.martingale_se}};
  if (const auto t = root["tolerances"]) {
    if (!t.IsMap()) fail(t, "tolerances", "expected a mapping");
    for (const auto& kv : t) {
      const auto key = kv.first.as<std::string>();
      const std::string p = join("tolerances", key);
      if (!tol.contains(key)) fail(kv.first, p, "unknown tolerance");
      const double v = as_double(kv.second, p);
      if (v < 0.0) fail(kv.second, p, "must be non-negative");
      tol[key] = v;
    }
  }
  c["tolerances"] = tol;

  json val{{"samples", 20'000}, {"z_tolerance", 5.0}};
  json grid = json::array();
  if (const auto v = root["validation"]) {
    check_keys(v, "validation", {"samples", "grid", "z_tolerance"});
    if (v["samples"]) val["samples"] = bounded(v["samples"], "validation.samples", 1000, 1'000'000'000);
    if (v["z_tolerance"]) {
      const double z = as_double(v["z_tolerance"], "validation.z_tolerance");
      if (!(z > 0.0)) fail(v["z_tolerance"], "validation.z_tolerance", "must be positive");
      val["z_tolerance"] = z;
    }
    if (v["grid"]) {
      for (std::size_t i = 0; const auto& e : as_list(v["grid"], "validation.grid")) {
        grid.push_back(canonical_color(e, index("validation.grid", i++), space));
      }
    }
  }
  if (grid.empty()) {
    if (space.finite) {
      for (std::uint32_t t = 1; t <= space.colors; ++t) grid.push_back({{"tag", t}});
    } else {
      for (double x : {0.1, 0.5, 0.9}) grid.push_back({{"point", x}});
    }
  }
  val["grid"] = grid;
  c["validation"] = val;

  json orc{{"n", 2},
           {"observable", obs.empty() ? "" : obs.front()["name"].get<std::string>()},
           {"replicas", 10'000},
           {"node_budget", 1'000'000},
           {"max_depth", 8}};
  if (const auto o = root["oracle"]) {
    check_keys(o, "oracle", {"n", "observable", "replicas", "node_budget", "max_depth"});
    if (o["max_depth"]) orc["max_depth"] = bounded(o["max_depth"], "oracle.max_depth", 0, 64);
    if (o["n"]) orc["n"] = bounded(o["n"], "oracle.n", 0, 64);
    if (o["replicas"]) orc["replicas"] = bounded(o["replicas"], "oracle.replicas", 1, 100'000'000);
    if (o["node_budget"]) orc["node_budget"] = bounded(o["node_budget"], "oracle.node_budget", 1, 1'000'000'000);
    if (o["observable"]) {
      const std::string name = as_string(o["observable"], "oracle.observable");
      if (!name.empty() && !names.count(name)) fail(o["observable"], "oracle.observable", "no observable named '" + name + "'");
      orc["observable"] = name;
    }
  }
  c["oracle"] = orc;
  return c;
}

// ---------------------------------------------------------------------------
// canonical JSON -> objects

Color color_of(const json& j) {
  if (j.contains("tag")) return Color::tag(j["tag"].get<std::uint32_t>());
  return Color::point(j["point"].get<double>());
}

ConfigKernel kernel_of(const json& k) {
  const auto kind = k["kind"].get<std::string>();
  if (kind == "simon") return builtin_simon(k["p"].get<double>());
  const auto d = k["colors"].get<std::uint32_t>();
  auto balls = [](const json& b) { return b.get<std::vector<std::uint32_t>>(); };
  if (kind == "finite") {
    std::vector<std::pair<std::int64_t, Rational>> copy;
    for (const auto& r : k["copy_law"]) {
      copy.emplace_back(r["copies"].get<std::int64_t>(), parse_rational(r["p"].get<std::string>()));
    }
    std::vector<FiniteKernel::InnovationLaw> laws;
    for (const auto& law : k["innovation"]) {
      FiniteKernel::InnovationLaw l;
      for (const auto& r : law) l.emplace_back(balls(r["balls"]), parse_rational(r["p"].get<std::string>()));
      laws.push_back(std::move(l));
    }
    try {
      return builtin_finite(d, copy, laws);
    } catch (const FactorizationError& e) {
      throw ConfigError(std::string("field 'kernel': ") + e.what() +
                        " (use kind custom-table to check such a kernel with validate)");
    }
  }
  std::vector<std::vector<FiniteOutcome>> table;
  for (const auto& row : k["table"]) {
    std::vector<FiniteOutcome> outcomes;
    for (const auto& o : row) {
      outcomes.push_back({o["copies"].get<std::int64_t>(), balls(o["balls"]),
                          parse_rational(o["p"].get<std::string>())});
    }
    table.push_back(std::move(outcomes));
  }
  std::optional<Rational> lambda2;
  if (!k["lambda2"].is_null()) lambda2 = parse_rational(k["lambda2"].get<std::string>());
  return FiniteKernel::from_table(d, std::move(table), lambda2);
}

TestFunction function_of(const json& o) {
  const auto kind = o["kind"].get<std::string>();
  if (kind == "indicator") return TestFunction::indicator(o["lo"].get<double>(), o["hi"].get<double>());
  if (kind == "monomial") return TestFunction::monomial(o["power"].get<int>());
  if (kind == "tag") return TestFunction::tag_indicator(o["tag"].get<std::uint32_t>());
  if (kind == "table") return TestFunction::table(o["values"].get<std::vector<double>>());
  return TestFunction::constant(o["value"].get<double>());
}

Config build(const json& c) {
  Config cfg;
  try {
    cfg.kernel = kernel_of(c["kernel"]);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("field 'kernel': ") + e.what());
  }
  for (const auto& a : c["initial_urn"]) cfg.u0.add(color_of(a), a["multiplicity"].get<std::uint64_t>());
  for (const auto& o : c["observables"]) cfg.observables.push_back({o["name"].get<std::string>(), function_of(o)});
  cfg.trackers = c["trackers"].get<std::vector<std::string>>();
  cfg.horizons = c["horizons"].get<std::vector<std::uint64_t>>();
  cfg.times = c["times"].get<std::vector<double>>();
  cfg.time_scale = c["time_scale"].get<double>();
  cfg.replicas = c["replicas"].get<std::uint32_t>();
  cfg.base_seed = c["base_seed"].get<std::uint64_t>();
  cfg.batch_size = c["batch_size"].get<std::uint32_t>();
  cfg.tests = c["tests"].get<std::vector<std::string>>();
  const auto& t = c["tolerances"];
  auto& tol = cfg.tolerances;
  tol.bridge_relative = t["bridge_relative"];
  tol.critical_relative = t["critical_relative"];
  tol.covariance_relative = t["covariance_relative"];
  tol.functional_relative = t["functional_relative"];
  tol.se_multiplier = t["se_multiplier"];
  tol.ks_alpha = t["ks_alpha"];
  tol.lln_band = t["lln_band"];
  tol.min_correlation = t["min_correlation"];
  tol.control_band = t["control_band"];
  tol.degenerate_threshold = t["degenerate_threshold"];
  tol.martingale_se = t["martingale_se"];
  const auto& v = c["validation"];
  cfg.validation.samples = v["samples"];
  cfg.validation.z_tolerance = v["z_tolerance"];
  for (const auto& g : v["grid"]) cfg.validation.grid.push_back(color_of(g));
  const auto& o = c["oracle"];
  cfg.oracle.n = o["n"];
  cfg.oracle.observable = o["observable"];
  cfg.oracle.replicas = o["replicas"];
  cfg.oracle.node_budget = o["node_budget"];
  cfg.oracle.max_depth = o["max_depth"];
  cfg.canonical = c;
  return cfg;
}

void dump_rec(const json& j, std::string& out, int indent, int level) {
  auto newline = [&](int lvl) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_rec(value, out, indent, level + 1);
      }
      newline(level);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        newline(level + 1);
        dump_rec(j[i], out, indent, level + 1);
      }
      newline(level);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string Config::sha256() const { return sha256_hex(dump_json(canonical)); }

const ColorSpace Config::space() const {
  return std::visit([](const auto& k) { return k.space(); }, kernel);
}

std::size_t Config::observable_index(const std::string& name) const {
  for (std::size_t i = 0; i < observables.size(); ++i) {
    if (observables[i].name == name) return i;
  }
  throw ConfigError("no observable named '" + name + "'");
}

Config parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  Config cfg = build(canonicalize(root));
  if (const auto out = root["output"]) cfg.output_dir = as_string(out, "output");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(Config& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::uint32_t> replicas) {
  json c = cfg.canonical;
  if (seed) c["base_seed"] = *seed;
  if (replicas) {
    if (*replicas < 1) throw ConfigError("field 'replicas': must be >= 1");
    c["replicas"] = *replicas;
  }
  const std::string out = cfg.output_dir;
  cfg = build(c);
  cfg.output_dir = out;
}

}  // namespace urnlab::cli
