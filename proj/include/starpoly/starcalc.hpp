#pragma once

// Star powers, star polynomials and the truncated resolvent (Peano-Baker
// series) for Theta-type matrices, plus the propagator map x -> (Theta * x)(t, a).

#include <Eigen/Dense>
#include <vector>

#include "starpoly/kernel.hpp"

namespace starpoly {

inline constexpr std::size_t kMaxStarDegree = 64;

// sum_k alpha_k x^{*k}, with x^{*0} = delta.
struct StarPolynomial {
  std::vector<cplx> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

// (f Theta)^{*n} = f(t) (F(t) - F(s))^{n-1} / (n-1)!, F the primitive of f
// vanishing at the interval start. Requires n >= 1.
SmoothKernel star_power_closed_form(const ChebSeries& f, int n);
// Theta * (f Theta)^{*n} = (F(t) - F(s))^n / n!. Requires n >= 0.
SmoothKernel theta_star_power_closed_form(const ChebSeries& f, int n);

enum class PolyEval { Horner, ExplicitPowers };

// p(A) * (v delta) for a square Theta-type A. Returns an N x 1 matrix whose
// delta part is alpha_0 v.
StarMatrix star_poly_apply(const StarPolynomial& p, const StarMatrix& a, const Eigen::VectorXcd& v,
                           PolyEval mode = PolyEval::Horner);
// sum_{j=0}^m A^{*j} * (v delta).
StarMatrix truncated_resolvent_apply(const StarMatrix& a, const Eigen::VectorXcd& v, std::size_t m);

// (Theta * x)(t, s0) for an N x 1 element; requires a <= s0 <= t <= b, s0 < b.
Eigen::VectorXcd propagate(const StarMatrix& x, double t, double s0);
// Kernel form of the same map, one kernel per row of x.
std::vector<SmoothKernel> propagator_kernels(const StarMatrix& x);

}  // namespace starpoly
