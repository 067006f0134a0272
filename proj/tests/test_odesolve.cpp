#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "starpoly/odesolve.hpp"

using namespace starpoly;

namespace {

const Interval kUnit(0.0, 1.0);

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = gen::random_cplx(rng, 0.5);
  return 0.5 * (m + m.adjoint());
}

Eigen::VectorXcd random_unit(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gen::random_cplx(rng);
  return v.normalized();
}

}  // namespace

TEST_CASE("reference_solve examples") {
  SUBCASE("zero matrix keeps v") {
    Eigen::VectorXcd v(2);
    v << cplx(0.6, 0.1), cplx(-0.2, 0.7);
    const auto a = HermitianCurve::scaled(ChebSeries::constant(kUnit, 0.0), Eigen::MatrixXcd::Zero(2, 2));
    const auto sol = reference_solve(a, v, 1e-12, 16);
    CHECK(sol.times.front() == 0.0);
    CHECK(sol.times.back() == 1.0);
    for (const auto& u : sol.states) CHECK((u - v).norm() == 0.0);
  }
  SUBCASE("scalar exponential") {
    const auto a = HermitianCurve::from_upper(kUnit, 1, {ChebSeries::constant(kUnit, 1.0)});
    const auto sol = reference_solve(a, Eigen::VectorXcd::Ones(1), 1e-12);
    CHECK(std::abs(sol.states.back()(0) - std::exp(1.0)) <= 1e-12);
    CHECK(sol.achieved_tol <= 1e-12);
    for (std::size_t k = 0; k < sol.times.size(); ++k) CHECK(std::abs(sol.states[k](0) - std::exp(sol.times[k])) <= 1e-12);
    // Interpolant on the Lobatto output grid is resolved.
    CHECK(sol.interpolation_tail() <= 1e-12);
  }
  SUBCASE("norm is sandwiched by the extreme eigencurve integrals") {
    auto f = [](double t) { return cplx(std::cos(3 * t)); };
    auto g = [](double t) { return cplx(0.3 * t, 0.2); };
    auto h = [](double t) { return cplx(-0.5 + t * t); };
    const auto a = HermitianCurve::from_upper(kUnit, 2, {cheb_fit(f, kUnit), cheb_fit(g, kUnit), cheb_fit(h, kUnit)});
    const auto e = analytic_eigendecompose(a);
    const auto lo = e.eigenvalues[0].antiderivative(0.0);
    const auto hi = e.eigenvalues[1].antiderivative(0.0);
    std::mt19937_64 rng(2);
    const auto sol = reference_solve(a, random_unit(rng, 2), 1e-12, 32);
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
      const double t = sol.times[k];
      const double nrm = sol.states[k].norm();
      CHECK(nrm >= std::exp(lo(t).real()) * (1 - 1e-10));
      CHECK(nrm <= std::exp(hi(t).real()) * (1 + 1e-10));
    }
  }
  CHECK_THROWS_AS(reference_solve(HermitianCurve::from_upper(kUnit, 1, {ChebSeries::constant(kUnit, 1.0)}),
                                  Eigen::VectorXcd::Ones(1), 1e-15),
                  DomainError);
}

TEST_CASE("closed_form_commuting") {
  std::mt19937_64 rng(17);
  SUBCASE("autonomous case is the matrix exponential") {
    const Eigen::MatrixXcd b = random_hermitian(rng, 3);
    const Eigen::VectorXcd v = random_unit(rng, 3);
    const auto sol = closed_form_commuting(b, ChebSeries::constant(kUnit, 1.0), v, {0.0, 0.5, 1.0});
    const Eigen::MatrixXcd eb = b.exp();
    CHECK((sol.states[2] - eb * v).norm() <= 1e-13);
    CHECK((sol.states[0] - v).norm() <= 1e-14);
  }
  SUBCASE("diagonal B gives componentwise exponentials") {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
    b(0, 0) = 0.5;
    b(1, 1) = -2.0;
    const Eigen::VectorXcd v = Eigen::VectorXcd::Ones(2);
    const auto a_fn = cheb_fit([](double t) { return cplx(1 + t / 2); }, kUnit);
    const auto sol = closed_form_commuting(b, a_fn, v, {0.3, 1.0});
    for (std::size_t k = 0; k < 2; ++k) {
      const double t = sol.times[k];
      const double big_f = t + t * t / 4;
      CHECK(std::abs(sol.states[k](0) - std::exp(0.5 * big_f)) <= 1e-14);
      CHECK(std::abs(sol.states[k](1) - std::exp(-2.0 * big_f)) <= 1e-14);
    }
  }
  SUBCASE("agrees with the reference integrator on a random 4x4 commuting instance") {
    const Eigen::MatrixXcd b = random_hermitian(rng, 4);
    const Eigen::VectorXcd v = random_unit(rng, 4);
    const auto a_fn = cheb_fit([](double t) { return cplx(1 + t / 2); }, kUnit);
    const auto ref = reference_solve(HermitianCurve::scaled(a_fn, b), v, 1e-12);
    const auto cf = closed_form_commuting(b, a_fn, v, ref.times);
    CHECK(cf.lobatto);
    double dev = 0.0;
    for (std::size_t k = 0; k < ref.times.size(); ++k) dev = std::max(dev, (ref.states[k] - cf.states[k]).norm());
    CHECK(dev <= 1e-11);
  }
}

TEST_CASE("reference_solve self-convergence and linearity") {
  std::mt19937_64 rng(5);
  auto f = [](double t) { return cplx(std::sin(2 * t)); };
  auto g = [](double t) { return cplx(0.5, -0.3 * t); };
  const auto a = HermitianCurve::from_upper(kUnit, 2, {cheb_fit(f, kUnit), cheb_fit(g, kUnit),
                                                        ChebSeries::constant(kUnit, -0.4)});
  const Eigen::VectorXcd v = random_unit(rng, 2);
  const double tol = 1e-11;
  const auto s1 = reference_solve(a, v, tol, 32);
  const auto s2 = reference_solve(a, v, tol / 2, 32);
  const cplx alpha(0.3, -1.2);
  const auto s3 = reference_solve(a, v * alpha, tol, 32);
  CHECK(s1.achieved_tol <= tol);
  for (std::size_t k = 0; k < s1.times.size(); ++k) {
    CHECK((s1.states[k] - s2.states[k]).norm() <= tol);
    CHECK((s3.states[k] - alpha * s1.states[k]).norm() <= tol * std::abs(alpha));
  }
}
