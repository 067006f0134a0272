#pragma once

// The s-parameterized star inner product and norm on N x 1 elements,
//
//     <v, w>_*(s) = int_s^b V(tau, s)^H W(tau, s) dtau,   V = Theta * v,
//
// and an estimate of the induced matrix star norm.

#include <vector>

#include "starpoly/kernel.hpp"

namespace starpoly {

cplx star_inner_product(const StarMatrix& v, const StarMatrix& w, double s);
double star_norm(const StarMatrix& v, double s);

// A function of s sampled on Chebyshev points of [a, b) (b excluded).
struct SFamily {
  Interval interval;
  std::vector<double> s;
  std::vector<double> values;

  double sup() const;
};

// star_norm(v, s) on npts Chebyshev points of [a, b).
SFamily star_norm_family(const StarMatrix& v, std::size_t npts = 9);

struct InducedNormEstimate {
  double value = 0.0;
  // (number of nodes, estimate) for every grid tried.
  std::vector<std::pair<std::size_t, double>> history;
  bool converged = false;
};

// Largest singular value of the discretized map Theta*v -> Theta*(A*v) on
// [s, b], refined by doubling the grid until the relative change drops below
// rtol. With fixed_grid set, only that grid is used.
InducedNormEstimate induced_matrix_norm_estimate(const StarMatrix& a, double s, std::size_t grid = 16,
                                                 double rtol = 1e-6, bool fixed_grid = false);

}  // namespace starpoly
