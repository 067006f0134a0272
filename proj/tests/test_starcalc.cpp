#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "starpoly/starcalc.hpp"

using namespace starpoly;

namespace {

const Interval kI(0.0, 2.0);

ChebSeries cos_series() { return cheb_fit([](double t) { return cplx(std::cos(t)); }, kI); }

double dev_on_triangle(const SmoothKernel& k, const std::function<cplx(double, double)>& f, unsigned seed,
                       int npts = 50) {
  double m = 0.0;
  const auto& iv = k.interval();
  for (auto [t, s] : oracle::triangle_points(npts, iv.lo(), iv.hi(), seed)) m = std::max(m, std::abs(k(t, s) - f(t, s)));
  return m;
}

StarElement iterated_power(const ChebSeries& f, int n) {
  const auto x = StarElement::theta_type(SmoothKernel::from_t(f));
  StarElement p = x;
  for (int k = 1; k < n; ++k) p = star_product(x, p);
  return p;
}

}  // namespace

TEST_CASE("star_power_closed_form") {
  const auto one = ChebSeries::constant(kI, 1.0);
  SUBCASE("f = 1, n = 3") {
    const auto k = star_power_closed_form(one, 3);
    CHECK(dev_on_triangle(k, [](double t, double s) { return cplx(0.5 * (t - s) * (t - s)); }, 1) <= 1e-14);
  }
  SUBCASE("n = 1 returns f(t)") {
    const auto c = cos_series();
    const auto k = star_power_closed_form(c, 1);
    CHECK(dev_on_triangle(k, [](double t, double) { return cplx(std::cos(t)); }, 2) <= 1e-13);
  }
  SUBCASE("cos, n = 4 against iterated quadrature products") {
    const auto c = cos_series();
    const auto closed = star_power_closed_form(c, 4);
    const auto iter = iterated_power(c, 4);
    CHECK(gen::kernel_distance(closed, *iter.theta_part()) <= 1e-9);
  }
  CHECK_THROWS_AS(star_power_closed_form(one, 0), DomainError);
}

TEST_CASE("closed form equals n-fold star products for n <= 6") {
  const std::vector<std::function<double(double)>> fs = {
      [](double) { return 1.0; }, [](double t) { return std::cos(t); }, [](double t) { return 1.0 + t / 2; }};
  for (const auto& f : fs) {
    const auto fc = cheb_fit([&](double t) { return cplx(f(t)); }, kI);
    const auto x = StarElement::theta_type(SmoothKernel::from_t(fc));
    StarElement p = x;
    for (int n = 1; n <= 6; ++n) {
      if (n > 1) p = star_product(x, p);
      const auto closed = star_power_closed_form(fc, n);
      const double scale = closed.max_abs();
      CHECK(gen::kernel_distance(closed, *p.theta_part()) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("theta_star_power_closed_form") {
  const auto one = ChebSeries::constant(kI, 1.0);
  const auto k0 = theta_star_power_closed_form(cos_series(), 0);
  CHECK(dev_on_triangle(k0, [](double, double) { return cplx(1.0); }, 3) == 0.0);
  const auto k2 = theta_star_power_closed_form(one, 2);
  CHECK(dev_on_triangle(k2, [](double t, double s) { return cplx(0.5 * (t - s) * (t - s)); }, 4) <= 1e-14);
  CHECK_THROWS_AS(theta_star_power_closed_form(one, -1), DomainError);

  SUBCASE("partial sums approach exp(sin t - sin s)") {
    // max |sin t - sin s| <= 1, so the tail after n = 20 is below e / 21!.
    const auto c = cos_series();
    SmoothKernel sum = SmoothKernel::constant(kI, 0.0);
    for (int n = 0; n <= 20; ++n) sum += theta_star_power_closed_form(c, n);
    CHECK(dev_on_triangle(sum, [](double t, double s) { return cplx(std::exp(std::sin(t) - std::sin(s))); }, 5,
                          200) <= 1e-12);
  }

  SUBCASE("factorial decay of the terms") {
    const auto c = cos_series();
    const double bigc = 1.0;  // max |sin t - sin s| on the triangle over [0, 2]
    double fact = 1.0;
    for (int n = 1; n <= 12; ++n) {
      fact *= n;
      CHECK(theta_star_power_closed_form(c, n).max_abs() <= std::pow(bigc, n) / fact * (1 + 1e-12));
    }
  }
}

TEST_CASE("star_poly_apply") {
  const Eigen::VectorXcd v = Eigen::VectorXcd::Constant(1, 1.0);
  const auto a = StarMatrix::theta_matrix(kI, 1, 1, {cos_series()});

  SUBCASE("degree 0 returns v delta") {
    const auto r = star_poly_apply(StarPolynomial{{1.0}}, a, v);
    CHECK_FALSE(r(0, 0).has_theta());
    REQUIRE(r(0, 0).has_delta());
    CHECK(r(0, 0).delta_part()->coeffs() == std::vector<cplx>{1.0});
  }
  SUBCASE("zero matrix keeps alpha_0 v delta") {
    Eigen::VectorXcd w(2);
    w << cplx(0.6, 0.0), cplx(0.0, 0.8);
    const StarMatrix z(kI, 2, 2);
    const auto r = star_poly_apply(StarPolynomial{{2.0, 3.0, -1.0}}, z, w);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK_FALSE(r(i, 0).has_theta());
      CHECK(std::abs((*r(i, 0).delta_part())(1.0) - 2.0 * w(static_cast<Eigen::Index>(i))) == 0.0);
    }
  }
  SUBCASE("cos Theta with p = 1 + x + x^2 + x^3") {
    const auto r = star_poly_apply(StarPolynomial{{1.0, 1.0, 1.0, 1.0}}, a, v);
    SmoothKernel ref = SmoothKernel::constant(kI, 0.0);
    for (int k = 1; k <= 3; ++k) ref += star_power_closed_form(cos_series(), k);
    CHECK(gen::kernel_distance(*r(0, 0).theta_part(), ref) <= 1e-9);
    CHECK((*r(0, 0).delta_part() - ChebSeries::constant(kI, 1.0)).max_abs() == 0.0);
  }
  SUBCASE("Horner and explicit powers agree") {
    std::mt19937_64 rng(11);
    const auto m = gen::random_theta_matrix(rng, kI, 2, 2, 3);
    Eigen::VectorXcd w(2);
    w << gen::random_cplx(rng), gen::random_cplx(rng);
    const StarPolynomial p{{0.5, cplx(1.0, -0.3), 0.25, cplx(0.0, 0.1), -0.05}};
    const auto h = star_poly_apply(p, m, w, PolyEval::Horner);
    const auto e = star_poly_apply(p, m, w, PolyEval::ExplicitPowers);
    for (std::size_t i = 0; i < 2; ++i) CHECK(gen::element_distance(h(i, 0), e(i, 0)) <= 1e-9);
  }
  SUBCASE("contract errors") {
    CHECK_THROWS_AS(star_poly_apply(StarPolynomial{{1.0}}, StarMatrix::identity(kI, 1), v), DomainError);
    CHECK_THROWS_AS(star_poly_apply(StarPolynomial{{1.0}}, StarMatrix(kI, 2, 3), Eigen::VectorXcd::Ones(2)),
                    DimensionError);
    CHECK_THROWS_AS(star_poly_apply(StarPolynomial{{1.0}}, a, Eigen::VectorXcd::Ones(2)), DimensionError);
  }
}

TEST_CASE("truncated resolvent and propagate") {
  const Interval unit(0.0, 1.0);
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
  const auto lam = StarMatrix::theta_matrix(unit, 1, 1, {ChebSeries::constant(unit, 1.0)});

  SUBCASE("m = 0 is v delta") {
    const auto r = truncated_resolvent_apply(lam, one, 0);
    CHECK_FALSE(r(0, 0).has_theta());
    CHECK(r(0, 0).has_delta());
  }
  SUBCASE("scalar lambda = 1 reaches e at t = 1") {
    const auto r = truncated_resolvent_apply(lam, one, 25);
    CHECK(std::abs(propagate(r, 1.0, 0.0)(0) - std::exp(1.0)) <= 1e-12);
  }
  SUBCASE("constant Hermitian 2x2 against the matrix exponential") {
    Eigen::Matrix2cd b;
    b << cplx(0.3, 0.0), cplx(0.2, -0.5), cplx(0.2, 0.5), cplx(-0.7, 0.0);
    std::vector<ChebSeries> entries;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) entries.push_back(ChebSeries::constant(unit, b(i, j)));
    const auto a = StarMatrix::theta_matrix(unit, 2, 2, entries);
    for (int col = 0; col < 2; ++col) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2);
      e(col) = 1.0;
      const auto r = truncated_resolvent_apply(a, e, 25);
      for (double t : {0.25, 0.6, 1.0}) {
        const Eigen::Matrix2cd u = (b * t).exp();
        CHECK((propagate(r, t, 0.0) - u.col(col)).norm() <= 1e-10);
      }
    }
  }
  SUBCASE("propagate of v delta is v") {
    Eigen::VectorXcd w(2);
    w << cplx(1.0, 2.0), cplx(-0.5, 0.0);
    const auto x = StarMatrix::delta_vector(unit, w);
    for (double t : {0.0, 0.3, 1.0}) CHECK((propagate(x, t, 0.0) - w).norm() == 0.0);
  }
  SUBCASE("t = s0 leaves only the alpha_0 channel") {
    const auto r = star_poly_apply(StarPolynomial{{0.5, 1.0, 1.0}}, lam, one);
    CHECK(std::abs(propagate(r, 0.4, 0.4)(0) - 0.5) == 0.0);
    CHECK_THROWS_AS(propagate(r, 0.3, 0.4), DomainError);
    CHECK_THROWS_AS(propagate(r, 1.0, 1.0), DomainError);
  }
  SUBCASE("resolvent with lambda = cos is Cauchy in m and converges to exp") {
    const auto c = cheb_fit([](double t) { return cplx(std::cos(t)); }, kI);
    const auto a = StarMatrix::theta_matrix(kI, 1, 1, {c});
    const double t = 1.7, s0 = 0.2;
    const double exact = std::exp(std::sin(t) - std::sin(s0));
    double prev_diff = INFINITY;
    cplx prev = propagate(truncated_resolvent_apply(a, one, 2), t, s0)(0);
    for (std::size_t m = 3; m <= 9; ++m) {
      const cplx cur = propagate(truncated_resolvent_apply(a, one, m), t, s0)(0);
      const double diff = std::abs(cur - prev);
      CHECK(diff < prev_diff);
      prev_diff = diff;
      prev = cur;
    }
    CHECK(std::abs(propagate(truncated_resolvent_apply(a, one, 20), t, s0)(0) - exact) <= 1e-12);
  }
}
