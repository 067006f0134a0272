#include "starpoly/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "starpoly/approx.hpp"
#include "starpoly/config.hpp"
#include "starpoly/error.hpp"
#include "starpoly/norms.hpp"
#include "starpoly/zoo.hpp"

namespace starpoly {

namespace {

using Rng = std::mt19937_64;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Runner {
 public:
  explicit Runner(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  // fn returns the measured quantity; the check passes when it is <= limit.
  void check(const std::string& name, double limit, const std::function<double()>& fn) {
    CheckResult r;
    r.suite = suite_;
    r.name = name;
    r.limit = limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.measured = fn();
      r.pass = r.measured <= limit;
    } catch (const std::exception& e) {
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.detail = e.what();
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out_.push_back(r);
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

cplx rand_cplx(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

SmoothKernel rand_kernel(Rng& rng, const Interval& iv, std::size_t deg) {
  Eigen::MatrixXcd c(static_cast<Eigen::Index>(deg + 1), static_cast<Eigen::Index>(deg + 1));
  for (Eigen::Index p = 0; p <= static_cast<Eigen::Index>(deg); ++p)
    for (Eigen::Index q = 0; q <= static_cast<Eigen::Index>(deg); ++q)
      c(p, q) = rand_cplx(rng, std::pow(0.5, static_cast<double>(p + q)));
  return SmoothKernel(iv, c);
}

ChebSeries rand_series(Rng& rng, const Interval& iv, std::size_t deg) {
  std::vector<cplx> c(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k) c[k] = rand_cplx(rng, std::pow(0.5, static_cast<double>(k)));
  return ChebSeries(iv, c);
}

StarElement rand_element(Rng& rng, const Interval& iv, bool with_delta = true) {
  return StarElement(iv, rand_kernel(rng, iv, 4), with_delta ? std::optional(rand_series(rng, iv, 3)) : std::nullopt);
}

StarMatrix rand_vector(Rng& rng, const Interval& iv, std::size_t n, bool with_delta) {
  StarMatrix m(iv, n, 1);
  for (std::size_t i = 0; i < n; ++i) m(i, 0) = rand_element(rng, iv, with_delta);
  return m;
}

StarMatrix rand_theta_matrix(Rng& rng, const Interval& iv, std::size_t n, std::size_t deg) {
  StarMatrix m(iv, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = StarElement::theta_type(rand_kernel(rng, iv, deg));
  return m;
}

double distance(const StarElement& a, const StarElement& b) {
  const auto& iv = a.interval();
  const auto ka = a.theta_part().value_or(SmoothKernel::constant(iv, 0.0));
  const auto kb = b.theta_part().value_or(SmoothKernel::constant(iv, 0.0));
  const auto da = a.delta_part().value_or(ChebSeries::constant(iv, 0.0));
  const auto db = b.delta_part().value_or(ChebSeries::constant(iv, 0.0));
  return std::max((ka - kb).max_abs(), (da - db).max_abs());
}

ChebSeries fit_real(double (*f)(double), const Interval& iv) {
  return cheb_fit([f](double t) { return cplx(f(t)); }, iv);
}

void kernel_suite(Runner& run) {
  const Interval iv(0.0, 2.0);
  run.check("delta is the two-sided identity", 1e-11, [&] {
    Rng rng(11);
    double dev = 0.0;
    const auto d = StarElement::delta(iv);
    for (int k = 0; k < 10; ++k) {
      const auto x = rand_element(rng, iv);
      dev = std::max({dev, distance(star_product(d, x), x), distance(star_product(x, d), x)});
    }
    return dev;
  });
  run.check("associativity and bilinearity", 1e-9, [&] {
    Rng rng(12);
    double dev = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto x = rand_element(rng, iv), y = rand_element(rng, iv), z = rand_element(rng, iv);
      dev = std::max(dev, distance(star_product(star_product(x, y), z), star_product(x, star_product(y, z))));
      const cplx a(0.3, -1.1);
      dev = std::max(dev, distance(star_product(x * a + y, z), star_product(x, z) * a + star_product(y, z)));
    }
    return dev;
  });
  run.check("delta' undoes Theta", 1e-10, [&] {
    Rng rng(13);
    double dev = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto f = rand_kernel(rng, iv, 5);
      dev = std::max(dev, distance(deltaprime_act_left(theta_act_left(f)), StarElement::theta_type(f)));
    }
    return dev;
  });
  run.check("Theta action agrees with the quadrature product", 1e-10, [&] {
    Rng rng(14);
    double dev = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto f = rand_kernel(rng, iv, 6);
      const auto q = star_product(StarElement::heaviside(iv), StarElement::theta_type(f));
      dev = std::max(dev, (theta_act_left(f) - *q.theta_part()).max_abs());
    }
    return dev;
  });
}

void starcalc_suite(Runner& run, const VerifyHooks& hooks) {
  const Interval iv(0.0, 2.0);
  run.check("closed-form powers equal n-fold products (relative)", 1e-8, [&] {
    double dev = 0.0;
    for (auto f : {+[](double) { return 1.0; }, +[](double t) { return std::cos(t); },
                   +[](double t) { return 1.0 + t / 2; }}) {
      const auto fc = fit_real(f, iv);
      const auto x = StarElement::theta_type(SmoothKernel::from_t(fc));
      StarElement p = x;
      for (int n = 1; n <= 6; ++n) {
        if (n > 1) p = star_product(x, p);
        const auto closed = hooks.star_power(fc, n);
        dev = std::max(dev, (closed - *p.theta_part()).max_abs() / p.theta_part()->max_abs());
      }
    }
    return dev;
  });
  run.check("resolvent partial sum equals exp(F(t) - F(s))", 1e-10, [&] {
    const auto c = fit_real([](double t) { return std::cos(t); }, iv);
    SmoothKernel sum = theta_star_power_closed_form(c, 0);
    for (int k = 1; k <= 20; ++k) sum += theta_star_power_closed_form(c, k);
    Rng rng(21);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    double dev = 0.0;
    for (int k = 0; k < 200; ++k) {
      double t = u(rng), s = u(rng);
      if (t < s) std::swap(t, s);
      dev = std::max(dev, std::abs(sum(t, s) - std::exp(std::sin(t) - std::sin(s))));
    }
    return dev;
  });
  run.check("Theta powers decay like C^n / n!", 0.0, [&] {
    const auto c = fit_real([](double t) { return std::cos(t) + 0.5; }, iv);
    const auto big_f = c.antiderivative(0.0);
    double fmin = INFINITY, fmax = -INFINITY;
    for (double t : lobatto_points(256, iv)) {
      fmin = std::min(fmin, big_f(t).real());
      fmax = std::max(fmax, big_f(t).real());
    }
    const double cc = fmax - fmin;
    double excess = 0.0;
    double fact = 1.0;
    for (int n = 1; n <= 16; ++n) {
      fact *= n;
      const double bound = std::pow(cc, n) / fact;
      excess = std::max(excess, theta_star_power_closed_form(c, n).max_abs() - bound * (1 + 1e-10) - 1e-15);
    }
    return std::max(excess, 0.0);
  });
  run.check("Horner and explicit powers agree", 1e-9, [&] {
    Rng rng(22);
    const auto a = rand_theta_matrix(rng, iv, 3, 3);
    Eigen::VectorXcd v(3);
    for (Eigen::Index i = 0; i < 3; ++i) v(i) = rand_cplx(rng);
    StarPolynomial p;
    for (int k = 0; k <= 5; ++k) p.coeffs.push_back(rand_cplx(rng));
    const auto h = star_poly_apply(p, a, v, PolyEval::Horner);
    const auto e = star_poly_apply(p, a, v, PolyEval::ExplicitPowers);
    double dev = 0.0;
    for (std::size_t i = 0; i < 3; ++i) dev = std::max(dev, distance(h(i, 0), e(i, 0)));
    return dev;
  });
  run.check("truncated resolvent is Cauchy in m", 0.0, [&] {
    const Interval unit(0.0, 1.0);
    const auto a = HermitianCurve::from_upper(unit, 1, {fit_real([](double t) { return std::cos(t); }, unit)})
                       .theta_matrix();
    const Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    std::vector<cplx> u;
    for (std::size_t m = 0; m <= 12; ++m) u.push_back(propagate(truncated_resolvent_apply(a, v, m), 1.0, 0.0)(0));
    // Successive differences shrink at least like 1 / m beyond the first few terms.
    double worst = 0.0;
    for (std::size_t m = 3; m + 1 < u.size(); ++m) {
      const double d0 = std::abs(u[m] - u[m - 1]), d1 = std::abs(u[m + 1] - u[m]);
      if (d0 > 1e-13) worst = std::max(worst, d1 - d0 / static_cast<double>(m));
    }
    return std::max(worst, 0.0);
  });
}

HermitianCurve diagonal_curve() {
  const Interval unit(0.0, 1.0);
  return HermitianCurve::from_upper(unit, 2, {fit_real([](double t) { return 1 + t; }, unit),
                                               ChebSeries::constant(unit, 0.0),
                                               fit_real([](double t) { return -t; }, unit)});
}

void spectral_suite(Runner& run) {
  const auto demo = build_curve(*zoo_problem("commuting_demo"));
  const auto rot = build_curve(*zoo_problem("rotating"));
  const auto diag = diagonal_curve();
  run.check("off-grid eigenvalues match pointwise eigensolves", 1e-9, [&] {
    double dev = 0.0;
    Rng rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto* a : {&demo, &rot, &diag}) {
      const auto e = analytic_eigendecompose(*a);
      for (int k = 0; k < 50; ++k) {
        const double t = u(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((*a)(t));
        Eigen::VectorXd fitted = e.values_at(t);
        std::sort(fitted.begin(), fitted.end());
        dev = std::max(dev, (fitted - es.eigenvalues()).cwiseAbs().maxCoeff());
      }
    }
    return dev;
  });
  run.check("eigenvalues sum to the trace", 1e-10, [&] {
    double dev = 0.0;
    for (const auto* a : {&demo, &rot, &diag}) {
      const auto e = analytic_eigendecompose(*a);
      ChebSeries sum = e.eigenvalues[0];
      ChebSeries tr = a->entry(0, 0);
      for (std::size_t i = 1; i < a->dim(); ++i) {
        sum += e.eigenvalues[i];
        tr += a->entry(i, i);
      }
      dev = std::max(dev, (sum - tr).max_abs());
    }
    return dev;
  });
  for (const auto* a : {&demo, &diag}) {
    const std::string tag = a == &demo ? " (commuting_demo)" : " (diagonal)";
    run.check("star eigen residual" + tag, 1e-8, [&] {
      const auto e = analytic_eigendecompose(*a);
      double dev = 0.0;
      for (const auto& pair : build_star_eigenpairs(e)) dev = std::max(dev, star_eigen_residual(a->theta_matrix(), pair));
      return dev;
    });
    run.check("star unitarity residual" + tag, 1e-8, [&] { return star_unitarity_residual(analytic_eigendecompose(*a)); });
    run.check("factorization residual" + tag, 1e-8, [&] { return factorization_residual(*a, analytic_eigendecompose(*a)); });
    run.check("power factorization residual, k <= 4" + tag, 1e-7, [&] {
      const auto e = analytic_eigendecompose(*a);
      double dev = 0.0;
      for (int k = 2; k <= 4; ++k) dev = std::max(dev, factorization_residual(*a, e, k));
      return dev;
    });
  }
}

void norms_suite(Runner& run) {
  const Interval iv(0.0, 2.0);
  const std::vector<double> ss = {0.0, 0.4, 1.0, 1.5, 1.95};
  // Each axiom reports its worst violation; nonnegativity and definiteness report 1 on failure.
  struct Worst {
    double positivity = 0, definiteness = 0, homogeneity = 0, triangle = 0, cauchy = 0;
  };
  auto axioms = std::make_shared<Worst>();
  auto computed = std::make_shared<bool>(false);
  auto compute = [&iv, &ss, axioms, computed] {
    if (*computed) return;
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const auto v = rand_vector(rng, iv, 2, trial % 2 == 0);
      const auto w = rand_vector(rng, iv, 2, trial % 3 != 0);
      const cplx a = rand_cplx(rng);
      for (double s : ss) {
        const double nv = star_norm(v, s), nw = star_norm(w, s);
        if (!(nv > 0.0)) axioms->positivity = 1.0;
        axioms->homogeneity =
            std::max(axioms->homogeneity,
                     std::abs(star_norm(v * a, s) - std::abs(a) * nv) / std::max(1.0, std::abs(a) * nv));
        axioms->triangle = std::max(axioms->triangle, star_norm(v + w, s) - nv - nw);
        axioms->cauchy = std::max(axioms->cauchy, std::abs(star_inner_product(v, w, s)) - nv * nw);
      }
    }
    for (double s : ss)
      if (star_norm(StarMatrix(iv, 2, 1), s) != 0.0) axioms->definiteness = 1.0;
    *computed = true;
  };
  run.check("nonnegativity and definiteness", 0.0, [=] {
    compute();
    return std::max(axioms->positivity, axioms->definiteness);
  });
  run.check("absolute homogeneity", 1e-12, [=] {
    compute();
    return axioms->homogeneity;
  });
  run.check("triangle inequality", 1e-10, [=] {
    compute();
    return axioms->triangle;
  });
  run.check("Cauchy-Schwarz", 1e-10, [=] {
    compute();
    return axioms->cauchy;
  });
  run.check("induced norm is submultiplicative", 1e-8, [&] {
    Rng rng(42);
    double worst = -INFINITY;
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = rand_theta_matrix(rng, iv, 2, 3), b = rand_theta_matrix(rng, iv, 2, 3);
      const auto ab = matrix_star_product(a, b);
      for (double s : {0.0, 1.0}) {
        const double na = induced_matrix_norm_estimate(a, s, 40, 0, true).value;
        const double nb = induced_matrix_norm_estimate(b, s, 40, 0, true).value;
        const double nab = induced_matrix_norm_estimate(ab, s, 40, 0, true).value;
        worst = std::max(worst, nab - na * nb);
      }
    }
    return std::max(worst, 0.0);
  });
  run.check("Q preserves the inner product", 1e-9, [&] {
    Rng rng(43);
    double dev = 0.0;
    for (const char* name : {"rotating", "commuting_demo"}) {
      const auto a = build_curve(*zoo_problem(name));
      const auto q = star_q_matrix(analytic_eigendecompose(a));
      for (int trial = 0; trial < 5; ++trial) {
        const auto v = rand_vector(rng, a.interval(), a.dim(), true);
        const auto w = rand_vector(rng, a.interval(), a.dim(), true);
        const auto qv = matrix_star_product(q, v), qw = matrix_star_product(q, w);
        for (double s : {0.0, 0.5})
          dev = std::max(dev, std::abs(star_inner_product(qv, qw, s) - star_inner_product(v, w, s)));
      }
    }
    return dev;
  });
}

void approx_suite(Runner& run) {
  run.check("Remez equioscillation (relative spread, rounding floor)", 1.0, [] {
    double worst = 0.0;
    for (const RealRange j : {RealRange{-1.0, 1.0}, RealRange{-1.263, 1.012}, RealRange{0.0, 3.0}})
      for (std::size_t n = 0; n <= 10; ++n) {
        const auto m = minimax_exp(j, n);
        if (!m.converged || m.extrema.size() < n + 2) return kInf;
        const ChebSeries p(Interval(j.lo, j.hi), std::vector<cplx>(m.cheb.begin(), m.cheb.end()));
        double lo = INFINITY, hi = 0.0, prev = 0.0;
        for (std::size_t i = 0; i < m.extrema.size(); ++i) {
          const double e = std::exp(m.extrema[i]) - p(m.extrema[i]).real();
          if (i > 0 && e * prev >= 0.0) return kInf;
          prev = e;
          lo = std::min(lo, std::abs(e));
          hi = std::max(hi, std::abs(e));
        }
        const double floor = 64 * std::numeric_limits<double>::epsilon() * std::exp(j.hi);
        worst = std::max(worst, (hi - lo) / std::max(1e-10 * hi, floor));
      }
    return worst;
  });
  run.check("E_n monotone in n and in J", 0.0, [] {
    double worst = 0.0, prev = INFINITY;
    for (std::size_t n = 0; n <= 14; ++n) {
      const double e = minimax_exp({-2.0, 1.0}, n).error;
      worst = std::max({worst, e - prev, minimax_exp({-1.0, 0.5}, n).error - e});
      prev = e;
    }
    return worst;
  });
  const auto cfg = *zoo_problem("commuting_demo");
  auto prepared = std::make_shared<std::optional<PreparedProblem>>();
  auto reports = std::make_shared<std::vector<DegreeReport>>();
  auto get = [cfg, prepared, reports]() -> const std::vector<DegreeReport>& {
    if (!*prepared) {
      *prepared = prepare_problem(build_curve(cfg), initial_vector(cfg), 12, cfg.tol);
      for (std::size_t n = 0; n <= 12; ++n) reports->push_back(theorem_bound_check(**prepared, n));
    }
    return *reports;
  };
  run.check("bound chain on commuting_demo, n = 0..12", kChainSlack, [=] {
    double gap = -INFINITY;
    for (const auto& r : get()) {
      if (r.status != ChainStatus::Asserted) return kInf;
      gap = std::max({gap, r.measured_l2 - r.channel_bound, r.channel_bound - r.bounds.theorem_bound,
                      r.bounds.theorem_bound - r.bounds.bernstein_bound});
    }
    return gap;
  });
  run.check("best L2 beats Peano-Baker and minimax polynomials", 1e-14, [=] {
    double gap = -INFINITY;
    for (const auto& r : get())
      gap = std::max({gap, r.measured_l2 - r.peano_baker_l2, r.measured_l2 - r.minimax_l2});
    return gap;
  });
  run.check("measured error nonincreasing up to the conditioning cap", 1e-14, [=] {
    double gap = -INFINITY, prev = INFINITY;
    for (const auto& r : get()) {
      if (r.ill_conditioned) break;
      gap = std::max(gap, r.measured_l2 - prev);
      prev = r.measured_l2;
    }
    return gap;
  });
  run.check("geometric decay below 4 e^2 L 2^-(n+1)", 0.0, [=] {
    double gap = -INFINITY;
    const double len = cfg.b - cfg.a;
    std::size_t n = 0;
    for (const auto& r : get())
      gap = std::max(gap, r.measured_l2 - 4 * std::exp(2.0) * len * std::pow(2.0, -static_cast<double>(++n)));
    return gap;
  });
  run.check("SVD and Gram-Schmidt solutions agree", 1e-9, [=] {
    get();
    const auto& p = **prepared;
    double dev = 0.0;
    for (std::size_t n = 0; n <= 12; ++n)
      dev = std::max(dev, std::abs(best_l2_from_images(p.images, n, p.reference, LsqMethod::Svd).error -
                                   best_l2_from_images(p.images, n, p.reference, LsqMethod::GramSchmidt).error));
    return dev;
  });
}

}  // namespace

std::vector<std::string> verify_suites() { return {"kernel", "starcalc", "spectral", "norms", "approx"}; }

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyHooks& hooks) {
  const auto names = verify_suites();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw ConfigError("unknown suite '" + suite + "'");
  std::vector<CheckResult> out;
  for (const auto& name : names) {
    if (suite != "all" && suite != name) continue;
    Runner run(name, out);
    if (name == "kernel") kernel_suite(run);
    else if (name == "starcalc") starcalc_suite(run, hooks);
    else if (name == "spectral") spectral_suite(run);
    else if (name == "norms") norms_suite(run);
    else approx_suite(run);
  }
  return out;
}

}  // namespace starpoly
