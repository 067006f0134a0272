#pragma once

// Polynomial approximation of the time-ordered exponential: the spectral
// interval J, minimax approximation of exp on J, Bernstein-ellipse bounds,
// scalar channel errors and the best-L2 star polynomial.

#include <optional>
#include <string>
#include <vector>

#include "starpoly/odesolve.hpp"
#include "starpoly/spectral.hpp"
#include "starpoly/starcalc.hpp"

namespace starpoly {

// Closed real interval that may degenerate to a point.
struct RealRange {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool degenerate() const { return !(hi > lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Monomial coefficients beta_0..beta_n.
struct ScalarPolynomial {
  std::vector<cplx> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  cplx operator()(cplx x) const;
};

// alpha_k = k! beta_k and back.
StarPolynomial scalar_to_star(const ScalarPolynomial& p);
ScalarPolynomial star_to_scalar(const StarPolynomial& p);

// [min lambda_i(t), max lambda_i(t)] * length(I), ordered.
RealRange spectral_interval_J(const EigenDecomposition& e);

struct MinimaxResult {
  ScalarPolynomial poly;      // monomials in the original variable
  std::vector<double> cheb;   // Chebyshev coefficients on J mapped to [-1, 1]
  double error = 0.0;         // max |exp - p| on J
  double levelled = 0.0;      // |E| of the last reference solve
  std::vector<double> extrema;  // final reference points (original variable)
  int iterations = 0;
  bool converged = true;      // false: Chebyshev interpolant, error is an upper bound only
};

// Remez exchange for exp on J with a degree n polynomial.
MinimaxResult minimax_exp(const RealRange& j, std::size_t n);

struct BoundReport {
  std::size_t n = 0;
  RealRange j;
  double en = 0.0;              // E_n(J)
  double theorem_bound = 0.0;   // E_n(J) * length(I)
  double chi = 0.0;
  double m = 0.0;               // length(I) 2 chi / (chi - 1) max_{E_chi} |exp|, ellipse mapped to J
  double rho = 0.0;
  double bernstein_bound = 0.0; // m rho^{n+1}
  double ellipse_scan_max = 0.0;  // dense boundary scan of |exp|
  // The explicit constant length(I) 2 chi / (chi - 1) exp(chi) and its bound.
  double m_explicit = 0.0;
  double bernstein_explicit = 0.0;
};

inline constexpr double kChiMax = 50.0;

// Bernstein ellipse bound for the given chi, or with chi minimizing
// m rho^{n+1} over (1, kChiMax] when chi is empty; a degenerate J gives the
// chi -> infinity limit, bound 0. en is left at 0.
BoundReport bernstein_bound(const RealRange& j, double length_i, std::size_t n, std::optional<double> chi = {});

// ||R(lambda) - p(lambda)||_*(s) = sqrt(int_s^b |exp(L) - p(L)|^2), L' = lambda, L(s) = 0.
double channel_error(const ChebSeries& lambda, const StarPolynomial& alpha, double s);

// Images g_k(t) = (Theta * A^{*k} * v delta)(t, s0), k = 0..n, one series per component.
std::vector<std::vector<ChebSeries>> krylov_images(const StarMatrix& a, const Eigen::VectorXcd& v, std::size_t n,
                                                   double s0);

enum class LsqMethod { Svd, GramSchmidt };

struct BestL2 {
  StarPolynomial alpha;
  double error = 0.0;
  bool ill_conditioned = false;
  double condition = 0.0;
};

// L2 error on the reference grid of sum alpha_k g_k against the reference.
double l2_error(const std::vector<std::vector<ChebSeries>>& images, const StarPolynomial& alpha,
                const SampledSolution& reference);

// Best L2 approximation of the reference by span{g_0..g_n}.
BestL2 best_l2_from_images(const std::vector<std::vector<ChebSeries>>& images, std::size_t n,
                           const SampledSolution& reference, LsqMethod method = LsqMethod::Svd);
BestL2 best_l2_coefficients(const StarMatrix& a, const Eigen::VectorXcd& v, std::size_t n, double s0,
                            const SampledSolution& reference, LsqMethod method = LsqMethod::Svd);

inline constexpr double kCommutationTol = 1e-8;
inline constexpr double kChainSlack = 1e-10;

// Everything that does not depend on the degree.
struct PreparedProblem {
  HermitianCurve curve;
  Eigen::VectorXcd v;
  EigenDecomposition eig;
  RealRange j;
  SampledSolution reference;
  std::vector<std::vector<ChebSeries>> images;
  std::vector<double> commutation;  // per channel
  std::size_t n_max = 0;
};

PreparedProblem prepare_problem(const HermitianCurve& a, const Eigen::VectorXcd& v, std::size_t n_max,
                                double ref_tol = 1e-13, const EigenOptions& eig_opts = {});

enum class ChainStatus { Asserted, HypothesisViolated, OriginOutsideJ };
std::string to_string(ChainStatus s);

struct DegreeReport {
  BoundReport bounds;            // optimized chi
  double bernstein_fixed = 0.0;  // explicit constant at chi = 2
  double measured_l2 = 0.0;
  double peano_baker_l2 = 0.0;
  double minimax_l2 = 0.0;       // realized error of the minimax-derived star polynomial
  double channel_bound = 0.0;    // max_i channel_error * ||v delta||_*(a)
  double commutation_residual = 0.0;
  StarPolynomial best_alpha;
  bool ill_conditioned = false;
  bool minimax_converged = true;
  ChainStatus status = ChainStatus::Asserted;
  bool chain_holds = false;      // only meaningful when status == Asserted
};

DegreeReport theorem_bound_check(const PreparedProblem& p, std::size_t n, LsqMethod method = LsqMethod::Svd);
// Bounds only (no reference solve needed).
DegreeReport bounds_only(const RealRange& j, double length_i, std::size_t n);

}  // namespace starpoly
