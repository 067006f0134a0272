#include "starpoly/starcalc.hpp"

#include <cmath>
#include <string>

#include "starpoly/error.hpp"

namespace starpoly {

namespace {

// (F(t) - F(s))^k / k!, re-chopped after every multiplication.
SmoothKernel bracket_power(const ChebSeries& f, int k) {
  const Interval& iv = f.interval();
  const ChebSeries big_f = f.antiderivative(iv.lo());
  const SmoothKernel bracket = SmoothKernel::from_t(big_f) - SmoothKernel::from_s(big_f);
  const double bscale = std::max(bracket.max_abs(), 1e-300);
  SmoothKernel out = SmoothKernel::constant(iv, 1.0);
  double scale = 1.0;
  for (int j = 1; j <= k; ++j) {
    out = (out * bracket) * cplx(1.0 / j);
    scale *= bscale / j;
    out = out.chopped(kDefaultTol, scale);
  }
  return out;
}

void check_square_theta(const StarMatrix& a, const Eigen::VectorXcd& v) {
  if (a.rows() != a.cols()) throw DimensionError("star polynomial: matrix is not square");
  if (static_cast<std::size_t>(v.size()) != a.rows()) throw DimensionError("star polynomial: vector length mismatch");
  if (!a.is_theta_type()) throw DomainError("star polynomial: matrix has delta parts");
}

}  // namespace

SmoothKernel star_power_closed_form(const ChebSeries& f, int n) {
  if (n < 1) throw DomainError("star_power_closed_form: n must be >= 1, got " + std::to_string(n));
  return bracket_power(f, n - 1).times_t(f);
}

SmoothKernel theta_star_power_closed_form(const ChebSeries& f, int n) {
  if (n < 0) throw DomainError("theta_star_power_closed_form: n must be >= 0, got " + std::to_string(n));
  return bracket_power(f, n);
}

StarMatrix star_poly_apply(const StarPolynomial& p, const StarMatrix& a, const Eigen::VectorXcd& v,
                           PolyEval mode) {
  check_square_theta(a, v);
  if (p.coeffs.empty()) throw DomainError("star_poly_apply: empty polynomial");
  if (p.degree() > kMaxStarDegree) throw DomainError("star_poly_apply: degree above cap");
  const Interval& iv = a.interval();
  const StarMatrix vd = StarMatrix::delta_vector(iv, v);
  const auto& al = p.coeffs;
  const std::size_t n = p.degree();

  if (mode == PolyEval::Horner) {
    StarMatrix r = vd * al[n];
    for (std::size_t k = n; k-- > 0;) r = matrix_star_product(a, r) + vd * al[k];
    return r;
  }

  StarMatrix r = vd * al[0];
  StarMatrix power = a;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) power = matrix_star_product(a, power);
    r += matrix_star_product(power, vd) * al[k];
  }
  return r;
}

StarMatrix truncated_resolvent_apply(const StarMatrix& a, const Eigen::VectorXcd& v, std::size_t m) {
  return star_poly_apply(StarPolynomial{std::vector<cplx>(m + 1, 1.0)}, a, v);
}

std::vector<SmoothKernel> propagator_kernels(const StarMatrix& x) {
  if (x.cols() != 1) throw DimensionError("propagate: expected an N x 1 element");
  std::vector<SmoothKernel> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(theta_compose(x(i, 0)));
  return out;
}

Eigen::VectorXcd propagate(const StarMatrix& x, double t, double s0) {
  const Interval& iv = x.interval();
  if (!(s0 >= iv.lo() && s0 < iv.hi())) throw DomainError("propagate: s0 outside [a, b)");
  if (t < s0) throw DomainError("propagate: t < s0");
  if (!iv.contains(t)) throw DomainError("propagate: t outside the interval");
  if (x.cols() != 1) throw DimensionError("propagate: expected an N x 1 element");
  Eigen::VectorXcd u(static_cast<Eigen::Index>(x.rows()));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const StarElement& e = x(i, 0);
    cplx val = 0.0;
    // Theta * (g delta) = g(s) Theta; the Theta part contributes int_{s0}^t.
    if (e.has_delta()) val += (*e.delta_part())(s0);
    if (e.has_theta() && t > s0) val += theta_act_left(*e.theta_part()).eval_square(t, s0);
    u(static_cast<Eigen::Index>(i)) = val;
  }
  return u;
}

}  // namespace starpoly
