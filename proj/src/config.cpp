#include "hardpair/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hardpair {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double positive(const json& j, const std::string& path) {
  const double x = number(j, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, path + "." + key);
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown field");
  }
}

Vector6d vector6(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 6) fail(path, "expected an array of 6 numbers");
  Vector6d v;
  for (int i = 0; i < 6; ++i) v(i) = number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return v;
}

std::string kind_of(const json& j, const std::string& key, const std::string& path) {
  const json& k = require(j, key, path);
  if (!k.is_string()) fail(path + "." + key, "expected a string");
  return k.get<std::string>();
}

}  // namespace

Body parse_body(const json& j, const std::string& path) {
  const std::string kind = kind_of(j, "kind", path);
  if (kind == "disk") {
    only_keys(j, {"kind", "r", "m", "J"}, path);
    Body b = make_disk(positive(require(j, "r", path), path + ".r"));
    if (j.contains("m") || j.contains("J")) {
      b = b.with_mass_props({number_or(j, "m", b.mass(), path), number_or(j, "J", b.inertia(), path)});
    }
    return b;
  }
  if (kind == "ellipse") {
    only_keys(j, {"kind", "a", "b", "m", "J"}, path);
    const double a = positive(require(j, "a", path), path + ".a");
    const double b = positive(require(j, "b", path), path + ".b");
    if (a < b) fail(path, "semi-axes must satisfy a >= b");
    Body body = make_ellipse(a, b);
    if (j.contains("m") || j.contains("J")) {
      body = body.with_mass_props({number_or(j, "m", body.mass(), path), number_or(j, "J", body.inertia(), path)});
    }
    return body;
  }
  if (kind == "quartic_oval") {
    only_keys(j, {"kind", "a", "b", "k"}, path);
    return make_quartic_oval(positive(require(j, "a", path), path + ".a"),
                             positive(require(j, "b", path), path + ".b"),
                             number(require(j, "k", path), path + ".k"));
  }
  fail(path + ".kind", "expected \"disk\", \"ellipse\" or \"quartic_oval\", got \"" + kind + "\"");
}

LineField parse_line_field(const json& j, const std::string& path) {
  const std::string kind = kind_of(j, "kind", path);
  if (kind == "constant") {
    only_keys(j, {"kind", "phi"}, path);
    return LineField::constant(number(require(j, "phi", path), path + ".phi"));
  }
  if (kind == "fourier") {
    only_keys(j, {"kind", "phi0", "coeffs"}, path);
    const double phi0 = number_or(j, "phi0", 0.0, path);
    const json& coeffs = require(j, "coeffs", path);
    if (!coeffs.is_array()) fail(path + ".coeffs", "expected an array");
    std::vector<LineField::Term> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const std::string p = path + ".coeffs[" + std::to_string(i) + "]";
      const json& c = coeffs[i];
      only_keys(c, {"k", "l", "cos", "sin"}, p);
      LineField::Term t;
      const double k = number_or(c, "k", 0.0, p), l = number_or(c, "l", 0.0, p);
      if (k != std::round(k)) fail(p + ".k", "must be an integer");
      if (l != std::round(l)) fail(p + ".l", "must be an integer");
      t.k = static_cast<int>(k);
      t.l = static_cast<int>(l);
      t.cos_coeff = number_or(c, "cos", 0.0, p);
      t.sin_coeff = number_or(c, "sin", 0.0, p);
      terms.push_back(t);
    }
    return LineField::fourier(phi0, std::move(terms));
  }
  fail(path + ".kind", "expected \"constant\" or \"fourier\", got \"" + kind + "\"");
}

ScatteringFamily parse_family(const json& j, const std::string& path) {
  const std::string kind = kind_of(j, "family", path);
  if (kind == "reflection") {
    only_keys(j, {"family"}, path);
    return ScatteringFamily::reflection();
  }
  if (kind == "epsi") {
    only_keys(j, {"family"}, path);
    return ScatteringFamily::epsi();
  }
  if (kind == "op") {
    only_keys(j, {"family", "line_field"}, path);
    return ScatteringFamily::orientation_preserving(
        parse_line_field(require(j, "line_field", path), path + ".line_field"));
  }
  fail(path + ".family", "expected \"reflection\", \"epsi\" or \"op\", got \"" + kind + "\"");
}

RunConfig parse_config(const json& j) {
  only_keys(j,
            {"description", "body", "family", "families", "initial", "T", "tolerances", "sample_dt", "seed",
             "samples", "beta", "maxwellian"},
            "config");
  RunConfig cfg;
  cfg.raw = j;
  cfg.hash = config_hash(j);
  cfg.body = parse_body(require(j, "body", "config"));

  if (j.contains("family")) cfg.family = parse_family(j["family"]);
  if (j.contains("families")) {
    const json& fs = j["families"];
    if (!fs.is_array() || fs.empty()) fail("families", "expected a non-empty array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      cfg.families.push_back(parse_family(fs[i], "families[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("initial")) {
    const json& z = j["initial"];
    only_keys(z, {"X", "V", "t"}, "initial");
    State s;
    s.X = vector6(require(z, "X", "initial"), "initial.X");
    s.V = vector6(require(z, "V", "initial"), "initial.V");
    s.t = number_or(z, "t", 0.0, "initial");
    cfg.initial = s;
  }

  if (j.contains("T")) cfg.T = positive(j["T"], "T");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, {"t_tol", "dt_scan", "grazing_tol", "max_events"}, "tolerances");
    cfg.sim.t_tol = number_or(t, "t_tol", 0.0, "tolerances");
    cfg.sim.dt_scan = number_or(t, "dt_scan", 0.0, "tolerances");
    cfg.sim.grazing_tol = number_or(t, "grazing_tol", cfg.sim.grazing_tol, "tolerances");
    if (cfg.sim.t_tol < 0.0) fail("tolerances.t_tol", "must be non-negative");
    if (cfg.sim.dt_scan < 0.0) fail("tolerances.dt_scan", "must be non-negative");
    if (!(cfg.sim.grazing_tol >= 0.0)) fail("tolerances.grazing_tol", "must be non-negative");
    if (t.contains("max_events")) {
      const double me = positive(t["max_events"], "tolerances.max_events");
      cfg.sim.max_events = static_cast<long>(me);
    }
  }
  if (j.contains("sample_dt")) {
    cfg.sim.sample_dt = number(j["sample_dt"], "sample_dt");
    if (cfg.sim.sample_dt < 0.0) fail("sample_dt", "must be non-negative");
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer() || s.get<long long>() < 0) fail("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    const json& s = j["samples"];
    if (!s.is_number_integer() || s.get<long long>() < 1) fail("samples", "expected a positive integer");
    cfg.samples = s.get<int>();
  }
  if (j.contains("beta")) {
    const json& b = j["beta"];
    only_keys(b, {"theta", "thetabar", "psi"}, "beta");
    cfg.beta = Beta(number(require(b, "theta", "beta"), "beta.theta"),
                    number(require(b, "thetabar", "beta"), "beta.thetabar"),
                    number(require(b, "psi", "beta"), "beta.psi"));
  }
  if (j.contains("maxwellian")) {
    const json& mw = j["maxwellian"];
    only_keys(mw, {"u", "temperature"}, "maxwellian");
    if (mw.contains("u")) {
      const json& u = mw["u"];
      if (!u.is_array() || u.size() != 2) fail("maxwellian.u", "expected an array of 2 numbers");
      cfg.bulk_velocity = Vector2d(number(u[0], "maxwellian.u[0]"), number(u[1], "maxwellian.u[1]"));
    }
    if (mw.contains("temperature")) cfg.temperature = positive(mw["temperature"], "maxwellian.temperature");
  }
  return cfg;
}

RunConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(file + ": " + e.what());
  }
  return parse_config(j);
}

std::string config_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const Vector6d& v) {
  json a = json::array();
  for (int i = 0; i < 6; ++i) a.push_back(v(i));
  return a;
}

json to_json(const Ledger& l) {
  return {{"linear", {l.linear(0), l.linear(1)}}, {"angular", l.angular}, {"kinetic", l.kinetic}};
}

}  // namespace hardpair
