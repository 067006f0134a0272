#include "starpoly/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "starpoly/expr.hpp"

namespace starpoly {

namespace {

using nlohmann::json;

std::string exact(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double read_number(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return v;
  }
  throw ConfigError("config: " + what + " must be a number or a decimal string");
}

cplx read_complex(const json& j, const std::string& what) {
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError("config: " + what + " must be [re, im]");
    return {read_number(j[0], what), read_number(j[1], what)};
  }
  return read_number(j, what);
}

std::pair<std::size_t, std::size_t> read_degrees(const json& j) {
  long long lo = 0, hi = 0;
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    lo = j[0].get<long long>();
    hi = j[1].get<long long>();
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw ConfigError("config: degrees must look like \"a..b\"");
    try {
      lo = std::stoll(s.substr(0, dots));
      hi = std::stoll(s.substr(dots + 2));
    } catch (const std::exception&) {
      throw ConfigError("config: degrees must look like \"a..b\"");
    }
  } else {
    throw ConfigError("config: degrees must be [a, b] or \"a..b\"");
  }
  if (lo < 0 || hi < lo) throw ConfigError("config: degree range must satisfy 0 <= a <= b");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

ChebSeries fit_entry(const EntryExpr& e, const Interval& iv, std::size_t index, bool diagonal) {
  auto parse = [&](const std::string& src) {
    try {
      return parse_expression(src);
    } catch (const ParseError& err) {
      throw ConfigError("config: entry " + std::to_string(index) + ": " + err.what());
    }
  };
  const Expr re = parse(e.re), im = parse(e.im);
  auto f = [&](double t) { return cplx(re.eval(t), im.eval(t)); };
  for (double t : lobatto_points(32, iv)) {
    const cplx z = f(t);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ConfigError("config: entry " + std::to_string(index) + " is not finite at t = " + exact(t));
    if (diagonal && z.imag() != 0.0)
      throw ConfigError("config: diagonal entry " + std::to_string(index) + " must be real");
  }
  return cheb_fit(f, iv);
}

}  // namespace

ProblemConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ProblemConfig c;
  try {
    c.name = j.value("name", std::string());
    if (!j.contains("interval") || !j["interval"].is_array() || j["interval"].size() != 2)
      throw ConfigError("config: interval must be [a, b]");
    c.a = read_number(j["interval"][0], "interval");
    c.b = read_number(j["interval"][1], "interval");
    if (!(std::isfinite(c.a) && std::isfinite(c.b) && c.a < c.b)) throw ConfigError("config: need finite a < b");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
      throw ConfigError("config: dim must be a positive integer");
    c.dim = j["dim"].get<std::size_t>();
    const std::size_t n_upper = c.dim * (c.dim + 1) / 2;
    if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != n_upper)
      throw ConfigError("config: entries must list the " + std::to_string(n_upper) +
                        " upper-triangle entries row by row");
    for (const auto& e : j["entries"]) {
      EntryExpr ee;
      if (e.is_string()) ee.re = e.get<std::string>();
      else if (e.is_object()) {
        ee.re = e.value("re", std::string("0"));
        ee.im = e.value("im", std::string("0"));
      } else {
        throw ConfigError("config: an entry must be a string or {\"re\": ..., \"im\": ...}");
      }
      c.entries.push_back(ee);
    }
    if (!j.contains("v") || !j["v"].is_array() || j["v"].size() != c.dim)
      throw ConfigError("config: v must have dim components");
    for (const auto& x : j["v"]) c.v.push_back(read_complex(x, "v"));
    double nrm = 0.0;
    for (const auto& x : c.v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConfigError("config: v must be a finite nonzero vector");
    c.v_scale = j.contains("v_scale") ? read_number(j["v_scale"], "v_scale") : 1.0;
    // An already normalized vector is kept bit for bit, so the echo reparses equal.
    if (std::abs(nrm - 1.0) > 4 * std::numeric_limits<double>::epsilon()) {
      for (auto& x : c.v) x /= nrm;
      c.v_scale *= nrm;
    }
    if (j.contains("degrees")) std::tie(c.n_min, c.n_max) = read_degrees(j["degrees"]);
    if (j.contains("tol")) c.tol = read_number(j["tol"], "tol");
    if (!(c.tol >= 1e-14)) throw ConfigError("config: tol must be >= 1e-14");
    if (j.contains("chi") && !(j["chi"].is_string() && j["chi"].get<std::string>() == "optimize")) {
      c.chi = read_number(j["chi"], "chi");
      if (!(*c.chi > 1.0)) throw ConfigError("config: chi must exceed 1");
    }
    c.out = j.value("out", std::string());
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned long long>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ProblemConfig& c, int indent) {
  json j = json::object();
  j["name"] = c.name;
  j["interval"] = {exact(c.a), exact(c.b)};
  j["dim"] = c.dim;
  j["entries"] = json::array();
  for (const auto& e : c.entries) j["entries"].push_back({{"re", e.re}, {"im", e.im}});
  j["v"] = json::array();
  for (const auto& x : c.v) j["v"].push_back({exact(x.real()), exact(x.imag())});
  j["v_scale"] = exact(c.v_scale);
  j["degrees"] = {c.n_min, c.n_max};
  j["tol"] = exact(c.tol);
  if (c.chi) j["chi"] = exact(*c.chi);
  else j["chi"] = "optimize";
  j["out"] = c.out;
  j["seed"] = c.seed;
  return j.dump(indent);
}

HermitianCurve build_curve(const ProblemConfig& c) {
  const Interval iv(c.a, c.b);
  std::vector<ChebSeries> upper;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < c.dim; ++i)
    for (std::size_t k = i; k < c.dim; ++k, ++idx) upper.push_back(fit_entry(c.entries.at(idx), iv, idx, i == k));
  return HermitianCurve::from_upper(iv, c.dim, upper);
}

Eigen::VectorXcd initial_vector(const ProblemConfig& c) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(c.v.size()));
  for (std::size_t i = 0; i < c.v.size(); ++i) v(static_cast<Eigen::Index>(i)) = c.v[i];
  return v;
}

}  // namespace starpoly
