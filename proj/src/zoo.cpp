#include "starpoly/zoo.hpp"

namespace starpoly {

namespace {

ProblemConfig base(std::string name, std::size_t dim, std::vector<EntryExpr> entries, std::vector<cplx> v) {
  ProblemConfig c;
  c.name = std::move(name);
  c.dim = dim;
  c.entries = std::move(entries);
  double nrm = 0.0;
  for (const auto& x : v) nrm += std::norm(x);
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  c.v = std::move(v);
  c.v_scale = nrm;
  return c;
}

ProblemConfig commuting_demo() {
  // B, upper triangle; eigenvalues about -0.674, -0.320, 0.214, 0.540, so
  // J = [-1.011, 0.810] sits inside the ellipse with foci -1, 1 and chi = 2.
  const std::vector<std::pair<const char*, const char*>> b = {
      {"0.48", "0"}, {"0.16", "0.08"}, {"0", "0"}, {"0.08", "0"},
      {"-0.24", "0"}, {"0.2", "0"}, {"0", "-0.08"},
      {"0.08", "0"}, {"0.24", "0"},
      {"-0.56", "0"}};
  std::vector<EntryExpr> e;
  for (auto [re, im] : b)
    e.push_back({std::string("(1 + t/2)*") + re, std::string(im) == "0" ? "0" : std::string("(1 + t/2)*") + im});
  return base("commuting_demo", 4, e, {1.0, cplx(0.5, -0.5), -0.25, cplx(0.0, 1.0)});
}

}  // namespace

std::vector<std::string> zoo_names() { return {"zero", "scalar", "commuting_demo", "noncommuting", "rotating"}; }

std::optional<ProblemConfig> zoo_problem(const std::string& name) {
  if (name == "zero") return base("zero", 2, {{"0"}, {"0"}, {"0"}}, {0.6, 0.8});
  if (name == "scalar") return base("scalar", 1, {{"1"}}, {1.0});
  if (name == "commuting_demo") return commuting_demo();
  if (name == "noncommuting") return base("noncommuting", 2, {{"t"}, {"0.5"}, {"-t"}}, {1.0, 1.0});
  if (name == "rotating")
    return base("rotating", 2,
                {{"(1 + t)*cos(t)^2 - sin(t)^2"}, {"(2 + t)*cos(t)*sin(t)"}, {"(1 + t)*sin(t)^2 - cos(t)^2"}},
                {1.0, 1.0});
  return std::nullopt;
}

ProblemConfig resolve_problem(const std::string& name_or_path) {
  if (auto z = zoo_problem(name_or_path)) return *z;
  return load_config(name_or_path);
}

}  // namespace starpoly
