#pragma once

// Analytic eigendecomposition of a Hermitian matrix curve A(t) and the
// star eigenpairs (lambda(t) Theta, q'(t) Theta + q(t) delta) built from it.

#include <Eigen/Dense>
#include <vector>

#include "starpoly/kernel.hpp"

namespace starpoly {

class HermitianCurve {
 public:
  // Full row-major list of N*N entries; throws DomainError if not Hermitian.
  HermitianCurve(Interval iv, std::size_t n, std::vector<ChebSeries> entries);
  // Upper triangle including the diagonal, row by row (N(N+1)/2 entries).
  static HermitianCurve from_upper(const Interval& iv, std::size_t n, const std::vector<ChebSeries>& upper);
  // A(t) = a(t) B for a constant Hermitian B.
  static HermitianCurve scaled(const ChebSeries& a, const Eigen::MatrixXcd& b);

  const Interval& interval() const noexcept { return iv_; }
  std::size_t dim() const noexcept { return n_; }
  const ChebSeries& entry(std::size_t i, std::size_t j) const { return entries_.at(i * n_ + j); }
  std::size_t max_degree() const;
  bool is_constant() const;

  Eigen::MatrixXcd operator()(double t) const;
  // A(t) Theta(t - s).
  StarMatrix theta_matrix() const;

 private:
  Interval iv_;
  std::size_t n_;
  std::vector<ChebSeries> entries_;
};

struct EigenDecomposition {
  Interval interval;
  std::vector<ChebSeries> eigenvalues;               // lambda_i(t), real valued
  std::vector<std::vector<ChebSeries>> eigenvectors;  // eigenvectors[i][r]: component r of q_i(t)
  std::vector<double> grid;                           // tracking grid of the final pass

  std::size_t dim() const { return eigenvalues.size(); }
  Eigen::VectorXd values_at(double t) const;
  Eigen::MatrixXcd vectors_at(double t) const;  // columns q_i(t)
};

struct EigenOptions {
  // Number of grid intervals of the first pass; 0 picks 4 x (entry degree + 1).
  std::size_t grid_density = 0;
  // Resolve ambiguous overlaps by maximal total overlap instead of failing.
  bool force_match = false;
  double tol = 1e-12;
};

EigenDecomposition analytic_eigendecompose(const HermitianCurve& a, const EigenOptions& opts = {});

struct StarEigenPair {
  SmoothKernel lambda;  // lambda_i(t), constant in s
  StarMatrix qvec;      // N x 1, entries q'(t) Theta + q(t) delta
};

std::vector<StarEigenPair> build_star_eigenpairs(const EigenDecomposition& e);
// Q with columns qvec and the diagonal Lambda = diag(lambda_i Theta).
StarMatrix star_q_matrix(const EigenDecomposition& e);
StarMatrix star_lambda_matrix(const EigenDecomposition& e);

// sup over an s-grid of the star norm of A * q - lambda * q.
double star_eigen_residual(const StarMatrix& a, const StarEigenPair& pair);
// max entry magnitude of Theta*(Q*Q^H) - I Theta and Theta*(Q^H*Q) - I Theta.
double star_unitarity_residual(const EigenDecomposition& e);
// max entry magnitude of Theta*A^{*k} - Theta*(Q*Lambda^{*k}*Q^H).
double factorization_residual(const HermitianCurve& a, const EigenDecomposition& e, int k = 1);
// Two-sided difference q_j * lambda_j - lambda_j * q_j, max part magnitude.
double commutation_residual(const EigenDecomposition& e, std::size_t j);

}  // namespace starpoly
