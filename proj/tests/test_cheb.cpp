#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "starpoly/cheb.hpp"

using namespace starpoly;

namespace {

double max_dev(const ChebSeries& s, const std::function<double(double)>& f, const std::vector<double>& ts) {
  double m = 0.0;
  for (double t : ts) m = std::max(m, std::abs(s(t) - f(t)));
  return m;
}

}  // namespace

TEST_CASE("interval rejects empty or non-finite bounds") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(0.0, INFINITY), DomainError);
  Interval iv(0.0, 2.0);
  CHECK(iv.to_unit(0.0) == doctest::Approx(-1.0));
  CHECK(iv.from_unit(1.0) == doctest::Approx(2.0));
}

TEST_CASE("cheb_fit of simple functions") {
  SUBCASE("constant") {
    auto s = cheb_fit([](double) { return cplx(1.0); }, Interval(0.0, 1.0));
    REQUIRE(s.coeffs().size() == 1);
    CHECK(std::abs(s.coeffs()[0] - 1.0) < 1e-15);
  }
  SUBCASE("identity on [-1,1] is T_1") {
    auto s = cheb_fit([](double t) { return cplx(t); }, Interval(-1.0, 1.0));
    REQUIRE(s.coeffs().size() == 2);
    CHECK(std::abs(s.coeffs()[0]) < 1e-15);
    CHECK(std::abs(s.coeffs()[1] - 1.0) < 1e-15);
  }
  SUBCASE("cos on [0,2] off-grid") {
    auto s = cheb_fit([](double t) { return cplx(std::cos(t)); }, Interval(0.0, 2.0), 1e-13);
    const auto ts = oracle::uniform_points(100, 0.0, 2.0, 7);
    CHECK(max_dev(s, [](double t) { return std::cos(t); }, ts) <= 1e-12);
    CHECK(s.resolved());
  }
}

TEST_CASE("cheb_fit reports unresolved functions") {
  try {
    cheb_fit([](double t) { return cplx(std::abs(t)); }, Interval(-1.0, 1.0), 1e-13);
    FAIL("expected UnresolvedError");
  } catch (const UnresolvedError& e) {
    CHECK(e.tail() > 1e-13);
  }
}

TEST_CASE("cheb_eval") {
  ChebSeries one(Interval(0.0, 3.0), {1.0});
  CHECK(one(2.2) == cplx(1.0));
  ChebSeries t1(Interval(-1.0, 1.0), {0.0, 1.0});
  CHECK(std::abs(t1(0.5) - 0.5) < 1e-16);
  auto c = cheb_fit([](double t) { return cplx(std::cos(t)); }, Interval(0.0, 2.0));
  CHECK(std::abs(c(1.0) - std::cos(1.0)) <= 1e-12);
  CHECK_THROWS_AS(c(2.5), DomainError);
  CHECK_THROWS_AS(c(-0.1), DomainError);
  CHECK(std::abs(c.eval_clamped(2.5) - std::cos(2.0)) <= 1e-12);
}

TEST_CASE("cheb_antiderivative") {
  SUBCASE("integral of one is t") {
    auto s = ChebSeries::constant(Interval(0.0, 1.0), 1.0).antiderivative(0.0);
    const auto ts = oracle::uniform_points(50, 0.0, 1.0, 3);
    CHECK(max_dev(s, [](double t) { return t; }, ts) <= 1e-15);
  }
  SUBCASE("integral of cos is sin") {
    auto c = cheb_fit([](double t) { return cplx(std::cos(t)); }, Interval(0.0, 2.0));
    auto s = c.antiderivative(0.0);
    const auto ts = oracle::uniform_points(100, 0.0, 2.0, 5);
    CHECK(max_dev(s, [](double t) { return std::sin(t); }, ts) <= 1e-12);
  }
  SUBCASE("anchoring at the midpoint") {
    auto c = cheb_fit([](double t) { return cplx(std::exp(t) * std::sin(3 * t)); }, Interval(-1.0, 2.0));
    auto s = c.antiderivative(0.5);
    CHECK(std::abs(s(0.5)) <= 1e-16);
  }
  CHECK_THROWS_AS(ChebSeries::constant(Interval(0.0, 1.0), 1.0).antiderivative(2.0), DomainError);
}

TEST_CASE("cheb_derivative") {
  const Interval iv(0.0, 1.0);
  CHECK(ChebSeries::constant(iv, 4.0).derivative().is_zero());
  auto sq = cheb_fit([](double t) { return cplx(t * t); }, iv);
  auto d = sq.derivative();
  const auto ts = oracle::uniform_points(50, 0.0, 1.0, 11);
  CHECK(max_dev(d, [](double t) { return 2 * t; }, ts) <= 1e-12);

  auto c = cheb_fit([](double t) { return cplx(std::cos(t)); }, Interval(0.0, 2.0));
  auto rt = c.antiderivative(0.0).derivative();
  const auto ts2 = oracle::uniform_points(50, 0.0, 2.0, 13);
  CHECK(max_dev(rt, [](double t) { return std::cos(t); }, ts2) <= 1e-10);
}

TEST_CASE("round-trip, calculus and linearity properties on random smooth functions") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), w = 1.0 + std::abs(u(rng));
    const double lo = u(rng);
    const Interval iv(lo, lo + 0.5 + std::abs(u(rng)));
    auto f = [=](double t) { return a * std::sin(w * t) + b * std::exp(0.3 * t); };
    auto g = [=](double t) { return std::cos(b * t) / (2.5 + std::sin(t)); };
    auto fs = cheb_fit([&](double t) { return cplx(f(t)); }, iv);
    auto gs = cheb_fit([&](double t) { return cplx(g(t)); }, iv);
    const auto ts = oracle::uniform_points(100, iv.lo(), iv.hi(), 100 + trial);
    const double fscale = std::max(1.0, fs.max_abs());
    CHECK(max_dev(fs, f, ts) <= 1e-13 * fscale * 10);

    // d/dt of the primitive returns the input within tol * (degree + 1).
    auto rt = fs.antiderivative(iv.lo()).derivative() - fs;
    CHECK(rt.max_abs() <= kDefaultTol * fscale * static_cast<double>(fs.degree() + 1));
    CHECK(std::abs(fs.antiderivative(iv.lo())(iv.lo())) <= 1e-15 * fscale);

    // Linearity of evaluation and calculus.
    const cplx alpha(0.7, -0.2);
    auto lin = fs * alpha + gs;
    auto dlin = lin.derivative() - (fs.derivative() * alpha + gs.derivative());
    CHECK(dlin.max_abs() <= 1e-12 * fscale);
    for (double t : ts) CHECK(std::abs(lin(t) - (alpha * f(t) + g(t))) <= 1e-12 * fscale);
    // Pointwise product.
    auto prod = fs * gs;
    for (double t : ts) CHECK(std::abs(prod(t) - f(t) * g(t)) <= 1e-12 * fscale);
  }
}

TEST_CASE("Clenshaw-Curtis is exact on polynomials and integrates exp") {
  auto q = clenshaw_curtis(9, -0.5, 1.5);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) acc += q.weights[i] * std::pow(q.nodes[i], 8);
  CHECK(acc == doctest::Approx((std::pow(1.5, 9) - std::pow(-0.5, 9)) / 9.0).epsilon(1e-14));
  auto q2 = clenshaw_curtis(33, 0.0, 2.0);
  acc = 0.0;
  for (std::size_t i = 0; i < q2.nodes.size(); ++i) acc += q2.weights[i] * std::exp(q2.nodes[i]);
  CHECK(std::abs(acc - (std::exp(2.0) - 1.0)) < 1e-13);
  // Integral of a series agrees with the rule.
  auto e = cheb_fit([](double t) { return cplx(std::exp(t)); }, Interval(0.0, 2.0));
  CHECK(std::abs(e.integral() - (std::exp(2.0) - 1.0)) < 1e-13);
}

TEST_CASE("values/coefficients transforms invert each other") {
  std::vector<cplx> c = {1.0, cplx(0.5, 0.1), -0.25, 0.125, cplx(0, 0.3)};
  auto v = coeffs_to_values(c);
  auto back = values_to_coeffs(v);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(back[k] - c[k]) < 1e-15);
}
