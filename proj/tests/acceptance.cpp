// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "generators.hpp"
#include "starpoly/approx.hpp"
#include "starpoly/config.hpp"
#include "starpoly/norms.hpp"
#include "starpoly/sweep.hpp"
#include "starpoly/zoo.hpp"

#ifndef STARPOLY_CLI
#error "STARPOLY_CLI must name the starpoly executable"
#endif

using namespace starpoly;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ChebSeries fit_real(const std::function<double(double)>& f, const Interval& iv) {
  return cheb_fit([&f](double t) { return cplx(f(t)); }, iv);
}

Outcome closed_form_powers() {
  const auto start = std::chrono::steady_clock::now();
  const Interval iv(0.0, 2.0);
  double dev = 0.0;
  const std::vector<std::function<double(double)>> fs = {
      [](double) { return 1.0; }, [](double t) { return std::cos(t); }, [](double t) { return 1.0 + t / 2; }};
  for (const auto& f : fs) {
    const auto fc = fit_real(f, iv);
    const auto x = StarElement::theta_type(SmoothKernel::from_t(fc));
    StarElement prod = x;
    for (int n = 1; n <= 6; ++n) {
      if (n > 1) prod = star_product(x, prod);
      const auto& q = *prod.theta_part();
      dev = std::max(dev, (star_power_closed_form(fc, n) - q).max_abs() / q.max_abs());
    }
  }
  const double secs = seconds_since(start);
  return {dev <= 1e-8 && secs < 30.0, fmt("max relative deviation %.3e (limit 1e-8), %.2f s (limit 30 s)", dev, secs)};
}

Outcome resolvent_identity() {
  const Interval iv(0.0, 2.0);
  const auto c = fit_real([](double t) { return std::cos(t); }, iv);
  SmoothKernel sum = theta_star_power_closed_form(c, 0);
  for (int k = 1; k <= 20; ++k) sum += theta_star_power_closed_form(c, k);
  double dev = 0.0;
  constexpr int m = 200;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= i; ++j) {
      const double t = 2.0 * i / m, s = 2.0 * j / m;
      dev = std::max(dev, std::abs(sum(t, s) - std::exp(std::sin(t) - std::sin(s))));
    }
  return {dev <= 1e-10, fmt("max deviation on a 201x201 triangle grid %.3e (limit 1e-10)", dev)};
}

Outcome star_eigen_structure() {
  const Interval unit(0.0, 1.0);
  const auto diagonal = HermitianCurve::from_upper(
      unit, 2, {fit_real([](double t) { return 1 + t; }, unit), ChebSeries::constant(unit, 0.0),
                fit_real([](double t) { return -t; }, unit)});
  Eigen::MatrixXcd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const auto cos_family = HermitianCurve::scaled(fit_real([](double t) { return std::cos(t); }, unit), swap);
  const auto demo = build_curve(*zoo_problem("commuting_demo"));
  double eig = 0.0, unit_res = 0.0, fact = 0.0;
  for (const auto* a : {&diagonal, &cos_family, &demo}) {
    const auto e = analytic_eigendecompose(*a);
    const auto am = a->theta_matrix();
    for (const auto& pair : build_star_eigenpairs(e)) eig = std::max(eig, star_eigen_residual(am, pair));
    unit_res = std::max(unit_res, star_unitarity_residual(e));
    fact = std::max(fact, factorization_residual(*a, e));
  }
  return {eig <= 1e-8 && unit_res <= 1e-8 && fact <= 1e-7,
          fmt("eigen %.3e (1e-8), unitarity %.3e (1e-8), factorization %.3e (1e-7)", eig, unit_res, fact)};
}

Outcome norm_axioms() {
  const auto start = std::chrono::steady_clock::now();
  const Interval iv(0.0, 2.0);
  const double ss[] = {0.0, 0.4, 1.0, 1.5, 1.95};
  std::mt19937_64 rng(2024);
  bool positive = true;
  double homogeneity = 0.0, triangle = -kInf, cauchy = -kInf, submult = -kInf;
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = gen::random_vector(rng, iv, 2, trial % 2 == 0);
    const auto w = gen::random_vector(rng, iv, 2, trial % 3 != 0);
    const cplx alpha = gen::random_cplx(rng);
    const auto a = gen::random_theta_matrix(rng, iv, 2, 2, 3), b = gen::random_theta_matrix(rng, iv, 2, 2, 3);
    const auto ab = matrix_star_product(a, b);
    for (double s : ss) {
      const double nv = star_norm(v, s), nw = star_norm(w, s);
      positive = positive && nv > 0.0 && nw > 0.0;
      homogeneity = std::max(homogeneity, std::abs(star_norm(v * alpha, s) - std::abs(alpha) * nv));
      triangle = std::max(triangle, star_norm(v + w, s) - nv - nw);
      cauchy = std::max(cauchy, std::abs(star_inner_product(v, w, s)) - nv * nw);
      const double na = induced_matrix_norm_estimate(a, s, 24, 0, true).value;
      const double nb = induced_matrix_norm_estimate(b, s, 24, 0, true).value;
      const double nab = induced_matrix_norm_estimate(ab, s, 24, 0, true).value;
      submult = std::max(submult, nab - na * nb);
    }
  }
  bool definite = true;
  for (double s : ss) definite = definite && star_norm(StarMatrix(iv, 2, 1), s) == 0.0;

  double unitary = 0.0;
  for (const char* name : {"rotating", "commuting_demo"}) {
    const auto curve = build_curve(*zoo_problem(name));
    const auto q = star_q_matrix(analytic_eigendecompose(curve));
    for (int trial = 0; trial < 5; ++trial) {
      const auto v = gen::random_vector(rng, curve.interval(), curve.dim());
      const auto w = gen::random_vector(rng, curve.interval(), curve.dim());
      const auto qv = matrix_star_product(q, v), qw = matrix_star_product(q, w);
      for (double s : {0.0, 0.3, 0.6})
        unitary = std::max(unitary, std::abs(star_inner_product(qv, qw, s) - star_inner_product(v, w, s)));
    }
  }
  const bool pass = positive && definite && homogeneity <= 1e-12 && triangle <= 1e-10 && cauchy <= 1e-10 &&
                    submult <= 1e-8 && unitary <= 1e-9;
  std::string d = std::string(positive && definite ? "positive and definite" : "POSITIVITY OR DEFINITENESS FAILED");
  d += fmt("; homogeneity %.2e, triangle %.2e, Cauchy-Schwarz %.2e", homogeneity, triangle, cauchy);
  d += fmt("; submultiplicativity %.2e (1e-8); Q unitarity %.2e (1e-9); %.1f s", submult, unitary,
           seconds_since(start));
  return {pass, d};
}

struct DemoRun {
  PreparedProblem prepared;
  std::vector<DegreeReport> reports;
  double seconds = 0.0;
};

const DemoRun& demo_run() {
  static const DemoRun run = [] {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = *zoo_problem("commuting_demo");
    DemoRun r{prepare_problem(build_curve(cfg), initial_vector(cfg), 12, cfg.tol), {}, 0.0};
    for (std::size_t n = 0; n <= 12; ++n) r.reports.push_back(theorem_bound_check(r.prepared, n));
    r.seconds = seconds_since(start);
    return r;
  }();
  return run;
}

Outcome main_chain() {
  const auto cfg = *zoo_problem("commuting_demo");
  const auto curve = build_curve(cfg);
  // A(0) = B for the (1 + t/2) B family.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(curve(0.0));
  const bool spectrum_ok = es.eigenvalues().cwiseAbs().maxCoeff() <= 1.0;
  const bool unit_v = std::abs(initial_vector(cfg).norm() - 1.0) <= 1e-15;
  const auto& run = demo_run();
  double gap = -kInf;
  bool asserted = true;
  for (const auto& r : run.reports) {
    asserted = asserted && r.status == ChainStatus::Asserted;
    gap = std::max({gap, r.measured_l2 - r.channel_bound, r.channel_bound - r.bounds.theorem_bound,
                    r.bounds.theorem_bound - r.bounds.bernstein_bound});
  }
  return {spectrum_ok && unit_v && asserted && gap <= 1e-10 && run.seconds < 120.0,
          fmt("largest chain gap %.3e (slack 1e-10), %.2f s (limit 120 s)", gap, run.seconds) +
              (spectrum_ok && unit_v ? "" : "; PREMISE FAILED") + (asserted ? "" : "; NOT ASSERTED")};
}

Outcome fixed_chi_constants() {
  const auto& run = demo_run();
  const RealRange j = run.prepared.j;
  // J is real, so it lies inside E_2 (foci -1, 1, semi-axes 5/4 and 3/4) iff it lies in (-5/4, 5/4).
  const bool inside = j.lo > -1.25 && j.hi < 1.25;
  const double len = run.prepared.reference.interval.length();
  double rel = 0.0, gap = -kInf;
  for (std::size_t n = 0; n < run.reports.size(); ++n) {
    const double expected = 4 * std::exp(2.0) * len * std::pow(2.0, -static_cast<double>(n + 1));
    rel = std::max(rel, std::abs(run.reports[n].bernstein_fixed - expected) / expected);
    gap = std::max(gap, run.reports[n].measured_l2 - run.reports[n].bernstein_fixed);
  }
  return {inside && rel <= 1e-12 && gap <= 0.0,
          fmt("J = [%.4f, %.4f]", j.lo, j.hi) + (inside ? " inside E_2" : " NOT inside E_2") +
              fmt("; relative deviation %.3e (1e-12); measured - fixed bound <= %.3e", rel, gap)};
}

Outcome optimality() {
  const auto& run = demo_run();
  double vs_pb = -kInf, vs_minimax = -kInf, increase = -kInf;
  double prev = kInf;
  std::size_t cap = run.reports.size();
  for (std::size_t n = 0; n < run.reports.size(); ++n) {
    const auto& r = run.reports[n];
    vs_pb = std::max(vs_pb, r.measured_l2 - r.peano_baker_l2);
    vs_minimax = std::max(vs_minimax, r.measured_l2 - r.minimax_l2);
    if (cap == run.reports.size()) {
      if (r.ill_conditioned) cap = n;
      else {
        increase = std::max(increase, r.measured_l2 - prev);
        prev = r.measured_l2;
      }
    }
  }
  return {vs_pb <= 0.0 && vs_minimax <= 0.0 && increase <= 0.0,
          fmt("best - Peano-Baker <= %.3e, best - minimax <= %.3e, largest increase %.3e", vs_pb, vs_minimax,
              increase) +
              (cap < run.reports.size() ? " (conditioning cap at n = " + std::to_string(cap) + ")" : "")};
}

// Discrete minimax of exp on 10^4 equispaced points of [-1, 1], n = 0..6, from
// tests/oracles/discrete_minimax.py (scipy HiGHS linear program).
constexpr double kDiscreteEn[] = {1.17520119364380138e+00, 2.78801584063002372e-01, 4.50173872718134180e-02,
                                  5.52836989543323710e-03, 5.46667549845708707e-04, 4.52055097830178740e-05,
                                  3.21087328548099063e-06};

// Alternation count of exp - p on a dense grid, counting points within
// a relative 1e-6 of the maximum error.
std::size_t alternations(const MinimaxResult& m) {
  const ChebSeries p(Interval(-1.0, 1.0), std::vector<cplx>(m.cheb.begin(), m.cheb.end()));
  constexpr int k = 200000;
  std::vector<double> err(k + 1);
  double emax = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double x = -1.0 + 2.0 * i / k;
    err[i] = std::exp(x) - p(x).real();
    emax = std::max(emax, std::abs(err[i]));
  }
  std::size_t count = 0;
  int sign = 0;
  for (double e : err)
    if (std::abs(e) >= (1 - 1e-6) * emax && (e > 0 ? 1 : -1) != sign) {
      sign = e > 0 ? 1 : -1;
      ++count;
    }
  return count;
}

Outcome minimax_oracle() {
  double dev = 0.0;
  bool alternation = true;
  std::string counts;
  for (std::size_t n = 0; n <= 6; ++n) {
    const auto m = minimax_exp({-1.0, 1.0}, n);
    dev = std::max(dev, std::abs(m.error - kDiscreteEn[n]));
    const std::size_t c = alternations(m);
    alternation = alternation && m.converged && c >= n + 2;
    counts += (counts.empty() ? "" : ",") + std::to_string(c);
  }
  return {dev <= 1e-8 && alternation,
          fmt("max |E_n - discrete LP| %.3e (1e-8); alternation counts ", dev) + counts + " (need n+2)"};
}

Outcome hypothesis_sensitivity() {
  try {
    const auto r = run_sweep(*zoo_problem("rotating"));
    double commut = kInf;
    bool flagged = !r.asserted;
    for (const auto& row : r.rows) {
      commut = std::min(commut, row.report.commutation_residual);
      flagged = flagged && row.report.status == ChainStatus::HypothesisViolated;
    }
    const bool manifest = manifest_json(r, {}, "sweep").find("\"theorem_bound\": \"not asserted\"") != std::string::npos;
    return {commut > 1e-3 && flagged && manifest,
            fmt("min commutation residual %.3e (> 1e-3); ", commut) +
                (flagged && manifest ? "reported not asserted" : "NOT MARKED not asserted")};
  } catch (const std::exception& e) {
    return {false, std::string("threw: ") + e.what()};
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("starpoly_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = STARPOLY_CLI;
  auto sh = [](const std::string& cmd) { return std::system((cmd + " > /dev/null").c_str()); };
  const int r1 = sh("\"" + cli + "\" sweep commuting_demo --out \"" + (dir / "run1").string() + "\"");
  const int r2 = sh("\"" + cli + "\" sweep commuting_demo --threads 4 --out \"" + (dir / "run2").string() + "\"");
  const std::string a = slurp(dir / "run1.csv"), b = slurp(dir / "run2.csv");
  const bool identical = r1 == 0 && r2 == 0 && !a.empty() && a == b;
  const auto start = std::chrono::steady_clock::now();
  const int rv = sh("\"" + cli + "\" verify all");
  const double secs = seconds_since(start);
  fs::remove_all(dir);
  return {identical && rv == 0 && secs <= 300.0,
          std::string(identical ? "CSV byte-identical" : "CSV DIFFERS OR SWEEP FAILED") +
              " (" + std::to_string(a.size()) + " bytes)" +
              fmt("; verify all exit %.0f in %.2f s (limit 300 s)", rv, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"closed-form star powers vs n-fold products", closed_form_powers},
      {"resolvent partial sum vs exp(F(t) - F(s))", resolvent_identity},
      {"star eigenpairs, unitarity and factorization", star_eigen_structure},
      {"norm axioms, submultiplicativity, Q unitarity", norm_axioms},
      {"bound chain on the commuting family, n = 0..12", main_chain},
      {"chi = 2 constants 4 e^2 L 2^-(n+1)", fixed_chi_constants},
      {"best L2 optimality and monotone error", optimality},
      {"Remez vs discrete minimax oracle", minimax_oracle},
      {"rotating eigenvectors: bound not asserted", hypothesis_sensitivity},
      {"end-to-end determinism and verify all", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2zu %-48s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
