#include "starpoly/approx.hpp"

#include <Eigen/SVD>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "starpoly/error.hpp"
#include "starpoly/norms.hpp"

namespace starpoly {

namespace {

constexpr std::size_t kEllipsePoints = 2048;
constexpr std::size_t kJSamples = 2048;
constexpr double kSvdCutoff = 1e-12;

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
  return f;
}

void fill_bounds(BoundReport& r, const RealRange& j, double length_i, double chi) {
  const double c = 0.5 * (j.lo + j.hi), h = 0.5 * (j.hi - j.lo);
  const double semi_major = 0.5 * (chi + 1.0 / chi), semi_minor = 0.5 * (chi - 1.0 / chi);
  double scan = 0.0;
  for (std::size_t k = 0; k < kEllipsePoints; ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / kEllipsePoints;
    const cplx z = c + h * cplx(semi_major * std::cos(th), semi_minor * std::sin(th));
    scan = std::max(scan, std::abs(std::exp(z)));
  }
  r.chi = chi;
  r.rho = 1.0 / chi;
  r.ellipse_scan_max = scan;
  r.m = length_i * 2.0 * chi / (chi - 1.0) * std::exp(c + h * semi_major);
  r.bernstein_bound = r.m * std::pow(r.rho, static_cast<double>(r.n + 1));
  r.m_explicit = length_i * 2.0 * chi / (chi - 1.0) * std::exp(chi);
  r.bernstein_explicit = r.m_explicit * std::pow(r.rho, static_cast<double>(r.n + 1));
}

// log of m rho^{n+1} as a function of chi.
double log_bound(const RealRange& j, double length_i, std::size_t n, double chi) {
  const double c = 0.5 * (j.lo + j.hi), h = 0.5 * (j.hi - j.lo);
  return std::log(length_i) + std::log(2.0 * chi / (chi - 1.0)) + c + h * 0.5 * (chi + 1.0 / chi) -
         static_cast<double>(n + 1) * std::log(chi);
}

// Weighted design matrix and right-hand side on the reference grid.
void assemble(const std::vector<std::vector<ChebSeries>>& images, std::size_t n, const SampledSolution& ref,
              Eigen::MatrixXcd& d, Eigen::VectorXcd& y) {
  const std::size_t nn = ref.dim();
  const std::size_t m = ref.times.size();
  const auto q = clenshaw_curtis(m, ref.interval.lo(), ref.interval.hi());
  d.resize(static_cast<Eigen::Index>(nn * m), static_cast<Eigen::Index>(n + 1));
  y.resize(static_cast<Eigen::Index>(nn * m));
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t r = 0; r < nn; ++r) {
      const auto vals = images[k][r].values_on(ref.times);
      for (std::size_t i = 0; i < m; ++i)
        d(static_cast<Eigen::Index>(r * m + i), static_cast<Eigen::Index>(k)) = std::sqrt(q.weights[i]) * vals[i];
    }
  for (std::size_t r = 0; r < nn; ++r)
    for (std::size_t i = 0; i < m; ++i)
      y(static_cast<Eigen::Index>(r * m + i)) = std::sqrt(q.weights[i]) * ref.states[i](static_cast<Eigen::Index>(r));
}

void check_reference(const std::vector<std::vector<ChebSeries>>& images, std::size_t n, const SampledSolution& ref) {
  if (!ref.lobatto) throw DomainError("best L2: reference must be sampled on a Lobatto grid");
  if (images.size() < n + 1) throw DimensionError("best L2: not enough images");
  if (images.front().size() != ref.dim()) throw DimensionError("best L2: dimension mismatch");
}

}  // namespace

cplx ScalarPolynomial::operator()(cplx x) const {
  cplx acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

StarPolynomial scalar_to_star(const ScalarPolynomial& p) {
  StarPolynomial out;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) out.coeffs.push_back(p.coeffs[k] * factorial(k));
  return out;
}

ScalarPolynomial star_to_scalar(const StarPolynomial& p) {
  ScalarPolynomial out;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) out.coeffs.push_back(p.coeffs[k] / factorial(k));
  return out;
}

RealRange spectral_interval_J(const EigenDecomposition& e) {
  const Interval& iv = e.interval;
  auto ts = lobatto_points(kJSamples, iv);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& lam : e.eigenvalues)
    for (const auto& v : lam.values_on(ts)) {
      lo = std::min(lo, v.real());
      hi = std::max(hi, v.real());
    }
  const double a = lo * iv.length(), b = hi * iv.length();
  return RealRange{std::min(a, b), std::max(a, b)};
}

BoundReport bernstein_bound(const RealRange& j, double length_i, std::size_t n, std::optional<double> chi) {
  if (chi && !(*chi > 1.0)) throw DomainError("bernstein_bound: chi must exceed 1");
  BoundReport r;
  r.n = n;
  r.j = j;
  if (chi) {
    fill_bounds(r, j, length_i, *chi);
    return r;
  }
  if (j.degenerate()) {
    // Limit chi -> infinity: exp on a point is a constant polynomial.
    r.chi = INFINITY;
    r.rho = 0.0;
    r.m = 2.0 * length_i * std::exp(j.lo);
    r.ellipse_scan_max = std::exp(j.lo);
    r.m_explicit = INFINITY;
    return r;
  }
  auto obj = [&](double x) { return log_bound(j, length_i, n, x); };
  // Coarse scan guards Brent against a poor bracket.
  double best = kChiMax, best_val = obj(kChiMax);
  for (int k = 1; k <= 200; ++k) {
    const double x = 1.0 + (kChiMax - 1.0) * std::pow(static_cast<double>(k) / 200.0, 2);
    if (obj(x) < best_val) {
      best = x;
      best_val = obj(x);
    }
  }
  const double lo = std::max(1.0 + 1e-9, best - 0.5 * (best - 1.0)), hi = std::min(kChiMax, best * 1.5);
  const auto bm = boost::math::tools::brent_find_minima(obj, lo, hi, 52);
  if (bm.second < best_val) best = bm.first;
  fill_bounds(r, j, length_i, best);
  return r;
}

double channel_error(const ChebSeries& lambda, const StarPolynomial& alpha, double s) {
  const Interval& iv = lambda.interval();
  if (!(s >= iv.lo() && s < iv.hi())) throw DomainError("channel_error: s must lie in [a, b)");
  const ChebSeries big_l = lambda.antiderivative(s);
  const ScalarPolynomial p = star_to_scalar(alpha);
  const Interval sub(s, iv.hi());
  double vscale = 0.0;
  for (double t : lobatto_points(32, sub)) vscale = std::max(vscale, std::abs(std::exp(big_l(t))));
  const ChebSeries e = cheb_fit(
      [&](double t) {
        const cplx l = big_l(t);
        return std::exp(l) - p(l);
      },
      sub, kDefaultTol, vscale);
  const double sq = (e.conj() * e).integral().real();
  return std::sqrt(std::max(sq, 0.0));
}

std::vector<std::vector<ChebSeries>> krylov_images(const StarMatrix& a, const Eigen::VectorXcd& v, std::size_t n,
                                                   double s0) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(v.size()) != a.rows())
    throw DimensionError("krylov_images: shape mismatch");
  if (!a.is_theta_type()) throw DomainError("krylov_images: matrix has delta parts");
  std::vector<std::vector<ChebSeries>> out;
  StarMatrix x = StarMatrix::delta_vector(a.interval(), v);
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) x = matrix_star_product(a, x);
    std::vector<ChebSeries> g;
    for (const auto& ker : propagator_kernels(x)) g.push_back(ker.at_s(s0));
    out.push_back(std::move(g));
  }
  return out;
}

double l2_error(const std::vector<std::vector<ChebSeries>>& images, const StarPolynomial& alpha,
                const SampledSolution& reference) {
  const std::size_t n = alpha.degree();
  check_reference(images, n, reference);
  Eigen::MatrixXcd d;
  Eigen::VectorXcd y;
  assemble(images, n, reference, d, y);
  Eigen::VectorXcd al(static_cast<Eigen::Index>(n + 1));
  for (std::size_t k = 0; k <= n; ++k) al(static_cast<Eigen::Index>(k)) = alpha.coeffs[k];
  return (y - d * al).norm();
}

BestL2 best_l2_from_images(const std::vector<std::vector<ChebSeries>>& images, std::size_t n,
                           const SampledSolution& reference, LsqMethod method) {
  check_reference(images, n, reference);
  Eigen::MatrixXcd d;
  Eigen::VectorXcd y;
  assemble(images, n, reference, d, y);
  const auto cols = d.cols();
  BestL2 out;
  Eigen::VectorXcd al = Eigen::VectorXcd::Zero(cols);

  if (method == LsqMethod::Svd) {
    // Column equilibration: the images decay roughly like 1/k!.
    Eigen::VectorXd cs = d.colwise().norm().transpose();
    for (Eigen::Index k = 0; k < cols; ++k)
      if (cs(k) == 0.0) cs(k) = 1.0;
    const Eigen::MatrixXcd ds = d * cs.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ds, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kSvdCutoff);
    const auto& sv = svd.singularValues();
    out.condition = sv(cols - 1) > 0 ? sv(0) / sv(cols - 1) : INFINITY;
    out.ill_conditioned = svd.rank() < cols;
    if (d.norm() > 0) al = cs.cwiseInverse().asDiagonal() * svd.solve(y);
  } else {
    // Modified Gram-Schmidt on the weighted images.
    Eigen::MatrixXcd q = d;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(cols, cols);
    std::vector<bool> kept(static_cast<std::size_t>(cols), false);
    const double scale = d.colwise().norm().maxCoeff();
    for (Eigen::Index k = 0; k < cols; ++k) {
      for (Eigen::Index j = 0; j < k; ++j) {
        if (!kept[static_cast<std::size_t>(j)]) continue;
        r(j, k) = q.col(j).dot(q.col(k));
        q.col(k) -= r(j, k) * q.col(j);
      }
      const double nrm = q.col(k).norm();
      if (nrm > kSvdCutoff * scale) {
        r(k, k) = nrm;
        q.col(k) /= nrm;
        kept[static_cast<std::size_t>(k)] = true;
      } else {
        out.ill_conditioned = true;
      }
    }
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(cols);
    for (Eigen::Index k = 0; k < cols; ++k)
      if (kept[static_cast<std::size_t>(k)]) z(k) = q.col(k).dot(y);
    for (Eigen::Index k = cols; k-- > 0;) {
      if (!kept[static_cast<std::size_t>(k)]) continue;
      cplx acc = z(k);
      for (Eigen::Index j = k + 1; j < cols; ++j) acc -= r(k, j) * al(j);
      al(k) = acc / r(k, k);
    }
    double dmin = INFINITY, dmax = 0.0;
    for (Eigen::Index k = 0; k < cols; ++k)
      if (kept[static_cast<std::size_t>(k)]) {
        dmin = std::min(dmin, std::abs(r(k, k)));
        dmax = std::max(dmax, std::abs(r(k, k)));
      }
    out.condition = dmax / dmin;
  }
  out.alpha.coeffs.assign(al.data(), al.data() + al.size());
  out.error = (y - d * al).norm();
  return out;
}

BestL2 best_l2_coefficients(const StarMatrix& a, const Eigen::VectorXcd& v, std::size_t n, double s0,
                            const SampledSolution& reference, LsqMethod method) {
  if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("best_l2_coefficients: v must have unit norm");
  if (std::abs(reference.interval.lo() - s0) > 0.0) throw DomainError("best_l2_coefficients: reference must start at s0");
  return best_l2_from_images(krylov_images(a, v, n, s0), n, reference, method);
}

PreparedProblem prepare_problem(const HermitianCurve& a, const Eigen::VectorXcd& v, std::size_t n_max,
                                double ref_tol, const EigenOptions& eig_opts) {
  if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("prepare_problem: v must have unit norm");
  if (n_max > kMaxStarDegree) throw DomainError("prepare_problem: degree above cap");
  PreparedProblem p{a, v, analytic_eigendecompose(a, eig_opts), {}, reference_solve(a, v, ref_tol), {}, {}, n_max};
  p.j = spectral_interval_J(p.eig);
  p.images = krylov_images(a.theta_matrix(), v, n_max, a.interval().lo());
  for (std::size_t i = 0; i < a.dim(); ++i) p.commutation.push_back(commutation_residual(p.eig, i));
  return p;
}

std::string to_string(ChainStatus s) {
  switch (s) {
    case ChainStatus::Asserted: return "asserted";
    case ChainStatus::HypothesisViolated: return "hypothesis violated - bound not asserted";
    case ChainStatus::OriginOutsideJ: return "J excludes 0 - bound not asserted";
  }
  return "unknown";
}

DegreeReport bounds_only(const RealRange& j, double length_i, std::size_t n) {
  DegreeReport r;
  const auto mm = minimax_exp(j, n);
  r.bounds = bernstein_bound(j, length_i, n);
  r.bounds.en = mm.error;
  r.bounds.theorem_bound = mm.error * length_i;
  r.bernstein_fixed = bernstein_bound(j, length_i, n, 2.0).bernstein_explicit;
  r.minimax_converged = mm.converged;
  return r;
}

DegreeReport theorem_bound_check(const PreparedProblem& p, std::size_t n, LsqMethod method) {
  if (n > p.n_max) throw DomainError("theorem_bound_check: degree above the prepared maximum");
  const Interval& iv = p.curve.interval();
  const double len = iv.length();
  DegreeReport r;

  const auto best = best_l2_from_images(p.images, n, p.reference, method);
  r.measured_l2 = best.error;
  r.best_alpha = best.alpha;
  r.ill_conditioned = best.ill_conditioned;
  r.peano_baker_l2 = l2_error(p.images, StarPolynomial{std::vector<cplx>(n + 1, 1.0)}, p.reference);

  const auto mm = minimax_exp(p.j, n);
  r.minimax_converged = mm.converged;
  const StarPolynomial alpha_mm = scalar_to_star(mm.poly);
  r.minimax_l2 = l2_error(p.images, alpha_mm, p.reference);
  double ch = 0.0;
  for (const auto& lam : p.eig.eigenvalues) ch = std::max(ch, channel_error(lam, alpha_mm, iv.lo()));
  r.channel_bound = ch * std::sqrt(len);

  r.bounds = bernstein_bound(p.j, len, n);
  r.bounds.en = mm.error;
  r.bounds.theorem_bound = mm.error * len;
  r.bernstein_fixed = bernstein_bound(p.j, len, n, 2.0).bernstein_explicit;

  for (double c : p.commutation) r.commutation_residual = std::max(r.commutation_residual, c);
  if (r.commutation_residual > kCommutationTol) r.status = ChainStatus::HypothesisViolated;
  else if (!p.j.contains(0.0)) r.status = ChainStatus::OriginOutsideJ;
  r.chain_holds = r.measured_l2 <= r.channel_bound + kChainSlack &&
                  r.channel_bound <= r.bounds.theorem_bound + kChainSlack &&
                  r.bounds.theorem_bound <= r.bounds.bernstein_bound + kChainSlack;
  return r;
}

}  // namespace starpoly
