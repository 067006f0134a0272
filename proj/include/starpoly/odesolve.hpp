#pragma once

// Ground-truth solutions of u'(t) = A(t) u(t), u(a) = v.

#include <Eigen/Dense>
#include <vector>

#include "starpoly/spectral.hpp"

namespace starpoly {

struct SampledSolution {
  Interval interval;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  // Max deviation from a re-run at half the tolerance (0 for closed forms).
  double achieved_tol = 0.0;
  // True when times are lobatto_points(times.size() - 1, interval).
  bool lobatto = false;

  std::size_t dim() const { return states.empty() ? 0 : static_cast<std::size_t>(states.front().size()); }
  // Polynomial interpolant per component; requires a Lobatto grid.
  std::vector<ChebSeries> to_series() const;
  // Largest trailing Chebyshev coefficient of the interpolants.
  double interpolation_tail() const;
};

// Embedded Dormand-Prince 5(4) with adaptive steps, stopping exactly at the
// Lobatto points of degree out_degree. Requires tol >= 1e-14.
SampledSolution reference_solve(const HermitianCurve& a, const Eigen::VectorXcd& v, double tol = 1e-12,
                                std::size_t out_degree = 128);

// u(t) = exp((F(t) - F(a)) B) v with F' = a_fn, exact for A(t) = a(t) B.
SampledSolution closed_form_commuting(const Eigen::MatrixXcd& b, const ChebSeries& a_fn, const Eigen::VectorXcd& v,
                                      const std::vector<double>& times);

}  // namespace starpoly
