#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "starpoly/approx.hpp"

namespace starpoly {

namespace {

constexpr int kMaxRemezIter = 100;
constexpr double kSpreadTol = 1e-12;
constexpr std::size_t kDenseCheck = 4000;

double cheb_eval(const std::vector<double>& a, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + a[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + a[0];
}

// Monomial coefficients in t of sum a_k T_k((t - c) / h).
std::vector<cplx> to_monomials(const std::vector<double>& a, double c, double h) {
  const std::size_t n = a.size();
  // Monomial coefficients in x of sum a_k T_k(x).
  std::vector<long double> q(n, 0.0L), tkm1(n, 0.0L), tk(n, 0.0L), tkp1(n, 0.0L);
  tkm1[0] = 1.0L;
  if (n > 1) tk[1] = 1.0L;
  q[0] += a[0];
  if (n > 1) q[1] += a[1];
  for (std::size_t k = 2; k < n; ++k) {
    std::fill(tkp1.begin(), tkp1.end(), 0.0L);
    for (std::size_t j = 0; j + 1 < n; ++j) tkp1[j + 1] += 2.0L * tk[j];
    for (std::size_t j = 0; j < n; ++j) tkp1[j] -= tkm1[j];
    for (std::size_t j = 0; j < n; ++j) q[j] += static_cast<long double>(a[k]) * tkp1[j];
    tkm1.swap(tk);
    tk.swap(tkp1);
  }
  // Horner composition with x = (t - c) / h.
  std::vector<long double> r(n, 0.0L);
  const long double ih = 1.0L / static_cast<long double>(h);
  const long double cc = static_cast<long double>(c);
  for (std::size_t j = n; j-- > 0;) {
    std::vector<long double> next(n, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      if (r[i] == 0.0L) continue;
      if (i + 1 < n) next[i + 1] += r[i] * ih;
      next[i] -= r[i] * cc * ih;
    }
    next[0] += q[j];
    r.swap(next);
  }
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(r[i]);
  return out;
}

}  // namespace

MinimaxResult minimax_exp(const RealRange& j, std::size_t n) {
  MinimaxResult res;
  if (j.degenerate()) {
    const double v = std::exp(j.lo);
    res.poly.coeffs = {v};
    res.cheb = {v};
    res.extrema = {j.lo};
    return res;
  }
  const double c = 0.5 * (j.lo + j.hi), h = 0.5 * (j.hi - j.lo);
  auto f = [&](double x) { return std::exp(c + h * x); };
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * f(1.0);
  const std::size_t m = n + 2;

  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = -std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1));
  std::vector<double> a(n + 1, 0.0);
  double levelled = 0.0;
  bool converged = false;
  int it = 0;
  for (; it < kMaxRemezIter; ++it) {
    Eigen::MatrixXd sys(m, m);
    Eigen::VectorXd rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      double t0 = 1.0, t1 = x[i];
      for (std::size_t k = 0; k <= n; ++k) {
        double tk;
        if (k == 0) tk = 1.0;
        else if (k == 1) tk = x[i];
        else {
          tk = 2.0 * x[i] * t1 - t0;
          t0 = t1;
          t1 = tk;
        }
        sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = tk;
      }
      sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n + 1)) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs(static_cast<Eigen::Index>(i)) = f(x[i]);
    }
    const Eigen::VectorXd sol = sys.fullPivLu().solve(rhs);
    for (std::size_t k = 0; k <= n; ++k) a[k] = sol(static_cast<Eigen::Index>(k));
    levelled = sol(static_cast<Eigen::Index>(n + 1));
    auto e = [&](double y) { return f(y) - cheb_eval(a, y); };

    // Roots of the error between consecutive reference points.
    std::vector<double> b(m + 1);
    b[0] = -1.0;
    b[m] = 1.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double el = e(x[i]), er = e(x[i + 1]);
      if (el == 0.0) b[i + 1] = x[i];
      else if (er == 0.0 || (el > 0) == (er > 0)) b[i + 1] = 0.5 * (x[i] + x[i + 1]);
      else {
        boost::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(e, x[i], x[i + 1], el, er,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
        b[i + 1] = 0.5 * (r.first + r.second);
      }
    }
    // Extremum of sign-adjusted error on every sub-interval.
    const double sgn0 = levelled >= 0 ? 1.0 : -1.0;
    std::vector<double> nx(m);
    double emax = 0.0, emin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double s = (i % 2 == 0) ? sgn0 : -sgn0;
      auto neg = [&](double y) { return -s * e(y); };
      auto r = boost::math::tools::brent_find_minima(neg, b[i], b[i + 1], 52);
      double best = r.first, val = -r.second;
      for (double endpt : {b[i], b[i + 1]})
        if (s * e(endpt) > val) {
          best = endpt;
          val = s * e(endpt);
        }
      nx[i] = best;
      emax = std::max(emax, std::abs(e(best)));
      emin = std::min(emin, std::abs(e(best)));
    }
    x = nx;
    if (emax - emin <= std::max(kSpreadTol * emax, noise)) {
      converged = true;
      ++it;
      break;
    }
  }

  auto e = [&](double y) { return f(y) - cheb_eval(a, y); };
  if (!converged) {
    // Chebyshev interpolant at the Lobatto points as a certified fallback.
    std::vector<cplx> vals(n + 1);
    const auto pts = lobatto_points(n);
    for (std::size_t k = 0; k <= n; ++k) vals[k] = f(pts[k]);
    const auto coeffs = values_to_coeffs(vals);
    for (std::size_t k = 0; k <= n; ++k) a[k] = coeffs[k].real();
  }
  double err = 0.0;
  for (double y : x) err = std::max(err, std::abs(e(y)));
  for (std::size_t k = 0; k <= kDenseCheck; ++k) {
    const double y = -std::cos(std::numbers::pi * static_cast<double>(k) / kDenseCheck);
    err = std::max(err, std::abs(e(y)));
  }
  res.cheb = a;
  res.poly.coeffs = to_monomials(a, c, h);
  res.error = err;
  res.levelled = std::abs(levelled);
  res.iterations = it;
  res.converged = converged;
  for (double y : x) res.extrema.push_back(c + h * y);
  return res;
}

}  // namespace starpoly
