#include "starpoly/norms.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "starpoly/error.hpp"

namespace starpoly {

namespace {

void check_vectors(const StarMatrix& v, const StarMatrix& w) {
  if (v.cols() != 1 || w.cols() != 1) throw DimensionError("star inner product: expected N x 1 elements");
  if (v.rows() != w.rows()) throw DimensionError("star inner product: length mismatch");
  if (!(v.interval() == w.interval())) throw DomainError("star inner product: interval mismatch");
}

void check_s(const Interval& iv, double s) {
  if (!(s >= iv.lo() && s < iv.hi())) throw DomainError("star norm: s must lie in [a, b)");
}

std::vector<ChebSeries> composed_columns(const StarMatrix& v, double s) {
  std::vector<ChebSeries> out;
  out.reserve(v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) out.push_back(theta_compose(v(i, 0)).at_s(s));
  return out;
}

// P(k, l) = int_s^{x_k} l_l(sigma) d sigma for the Lagrange basis on the
// Lobatto points x of [s, b].
Eigen::MatrixXd lagrange_primitives(const Interval& sub, std::size_t deg) {
  const auto xs = lobatto_points(deg, sub);
  const std::size_t m = deg + 1;
  Eigen::MatrixXd p(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<cplx> e(m, 0.0);
  for (std::size_t l = 0; l < m; ++l) {
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[l] = 1.0;
    const ChebSeries basis(sub, values_to_coeffs(e));
    const auto vals = basis.antiderivative(sub.lo()).values_on(xs);
    for (std::size_t k = 0; k < m; ++k) p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = vals[k].real();
  }
  return p;
}

double discrete_norm(const std::vector<std::vector<std::optional<SmoothKernel>>>& g, double s, double b,
                     std::size_t deg) {
  const std::size_t n = g.size();
  const std::size_t m = deg + 1;
  const Interval sub(s, b);
  const auto xs = lobatto_points(deg, sub);
  const auto q = clenshaw_curtis(m, s, b);
  const Eigen::MatrixXd p = lagrange_primitives(sub, deg);
  const auto mi = static_cast<Eigen::Index>(m);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n) * mi, static_cast<Eigen::Index>(n) * mi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!g[i][j]) continue;
      const Eigen::MatrixXcd gv = g[i][j]->values_on(xs, xs);
      t.block(static_cast<Eigen::Index>(i) * mi, static_cast<Eigen::Index>(j) * mi, mi, mi) =
          gv.cwiseProduct(p.cast<cplx>());
    }
  Eigen::VectorXd sw(static_cast<Eigen::Index>(n) * mi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) sw(static_cast<Eigen::Index>(i * m + k)) = std::sqrt(q.weights[k]);
  const Eigen::MatrixXcd weighted = sw.asDiagonal() * t * sw.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);
  return svd.singularValues()(0);
}

}  // namespace

cplx star_inner_product(const StarMatrix& v, const StarMatrix& w, double s) {
  check_vectors(v, w);
  const Interval& iv = v.interval();
  check_s(iv, s);
  const auto vs = composed_columns(v, s);
  const auto ws = composed_columns(w, s);
  std::size_t deg = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) deg = std::max(deg, vs[i].degree() + ws[i].degree());
  const auto q = clenshaw_curtis(deg + 2, s, iv.hi());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto a = vs[i].values_on(q.nodes);
    const auto b = ws[i].values_on(q.nodes);
    for (std::size_t k = 0; k < q.nodes.size(); ++k) acc += q.weights[k] * std::conj(a[k]) * b[k];
  }
  return acc;
}

double star_norm(const StarMatrix& v, double s) {
  const cplx ip = star_inner_product(v, v, s);
  if (std::abs(ip.imag()) > 1e-13 * std::abs(ip.real())) throw NumericalError("star_norm: inner product not real");
  return std::sqrt(std::max(ip.real(), 0.0));
}

double SFamily::sup() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

SFamily star_norm_family(const StarMatrix& v, std::size_t npts) {
  if (npts == 0) throw DomainError("star_norm_family: need at least one point");
  const Interval& iv = v.interval();
  SFamily fam{iv, lobatto_points(npts, iv), {}};
  fam.s.pop_back();
  for (double s : fam.s) fam.values.push_back(star_norm(v, s));
  return fam;
}

InducedNormEstimate induced_matrix_norm_estimate(const StarMatrix& a, double s, std::size_t grid, double rtol,
                                                 bool fixed_grid) {
  if (a.rows() != a.cols()) throw DimensionError("induced norm: matrix is not square");
  if (!a.is_theta_type()) throw DomainError("induced norm: matrix has delta parts");
  const Interval& iv = a.interval();
  check_s(iv, s);
  // Theta * (A * v) = int_s^tau G(tau, sigma) V(sigma) d sigma with
  // G = Theta * A * delta'.
  const std::size_t n = a.rows();
  std::vector<std::vector<std::optional<SmoothKernel>>> g(n, std::vector<std::optional<SmoothKernel>>(n));
  bool any = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j).has_theta()) {
        g[i][j] = theta_compose(deltaprime_act_right(*a(i, j).theta_part()));
        any = true;
      }
  InducedNormEstimate est;
  if (!any) {
    est.converged = true;
    return est;
  }
  constexpr std::size_t kMaxGrid = 512;
  std::size_t deg = std::max<std::size_t>(grid, 2);
  double prev = -1.0;
  for (;;) {
    const double val = discrete_norm(g, s, iv.hi(), deg);
    est.history.emplace_back(deg + 1, val);
    est.value = val;
    if (fixed_grid) {
      est.converged = true;
      break;
    }
    if (prev >= 0.0 && std::abs(val - prev) <= rtol * std::max(val, 1e-300)) {
      est.converged = true;
      break;
    }
    if (2 * deg > kMaxGrid) break;
    prev = val;
    deg *= 2;
  }
  return est;
}

}  // namespace starpoly
