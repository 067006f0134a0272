#include "starpoly/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "starpoly/error.hpp"
#include "starpoly/norms.hpp"

namespace starpoly {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kAmbiguity = 0.1;
constexpr std::size_t kMaxTrackDegree = 4096;

double entry_scale(const std::vector<ChebSeries>& entries) {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.coeff_norm());
  return std::max(m, 1.0);
}

// Make the largest-magnitude component real positive.
void gauge_first(Eigen::MatrixXcd& q) {
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    Eigen::Index r = 0;
    q.col(c).cwiseAbs().maxCoeff(&r);
    const cplx z = q(r, c);
    if (std::abs(z) > 0.0) q.col(c) *= std::conj(z) / std::abs(z);
  }
}

std::vector<Eigen::Index> best_permutation(const Eigen::MatrixXd& overlap) {
  const Eigen::Index n = overlap.rows();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 8) {
    std::vector<Eigen::Index> best = perm;
    double best_sum = -1.0;
    do {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) sum += overlap(i, perm[static_cast<std::size_t>(i)]);
      if (sum > best_sum) {
        best_sum = sum;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Greedy on larger problems.
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!used[static_cast<std::size_t>(j)] && (arg < 0 || overlap(i, j) > overlap(i, arg))) arg = j;
    used[static_cast<std::size_t>(arg)] = true;
    perm[static_cast<std::size_t>(i)] = arg;
  }
  return perm;
}

struct Tracked {
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixXcd> vectors;
};

Tracked track(const HermitianCurve& a, const std::vector<double>& ts, bool force_match) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  Tracked out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    es.compute(a(ts[k]));
    Eigen::VectorXd lam = es.eigenvalues();
    Eigen::MatrixXcd q = es.eigenvectors();
    if (k == 0) {
      gauge_first(q);
    } else {
      const Eigen::MatrixXcd& prev = out.vectors.back();
      const Eigen::MatrixXd overlap = (prev.adjoint() * q).cwiseAbs();
      std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
      bool ambiguous = false;
      std::vector<bool> taken(static_cast<std::size_t>(n), false);
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index arg = 0;
        const double best = overlap.row(i).maxCoeff(&arg);
        double second = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != arg) second = std::max(second, overlap(i, j));
        if (best - second < kAmbiguity || taken[static_cast<std::size_t>(arg)]) ambiguous = true;
        taken[static_cast<std::size_t>(arg)] = true;
        perm[static_cast<std::size_t>(i)] = arg;
      }
      if (ambiguous) {
        if (!force_match)
          throw CrossingError("analytic_eigendecompose: ambiguous eigenvector matching near t = " +
                                  std::to_string(ts[k]) + " (node " + std::to_string(k) + ")",
                              k, ts[k]);
        perm = best_permutation(overlap);
      }
      Eigen::VectorXd lam2(n);
      Eigen::MatrixXcd q2(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = perm[static_cast<std::size_t>(i)];
        lam2(i) = lam(j);
        q2.col(i) = q.col(j);
        const cplx ph = prev.col(i).dot(q2.col(i));
        if (std::abs(ph) > 0.0) q2.col(i) *= std::conj(ph) / std::abs(ph);
      }
      lam = lam2;
      q = q2;
    }
    out.values.push_back(lam);
    out.vectors.push_back(q);
  }
  return out;
}

bool tail_small(const std::vector<cplx>& c, double bound) {
  const std::size_t m = c.size();
  const std::size_t k = std::max<std::size_t>(3, m / 8);
  for (std::size_t j = m > k ? m - k : 0; j < m; ++j)
    if (std::abs(c[j]) > bound) return false;
  return true;
}

}  // namespace

HermitianCurve::HermitianCurve(Interval iv, std::size_t n, std::vector<ChebSeries> entries)
    : iv_(iv), n_(n), entries_(std::move(entries)) {
  if (n == 0 || entries_.size() != n * n) throw DimensionError("HermitianCurve: need N*N entries");
  for (const auto& e : entries_)
    if (!(e.interval() == iv_)) throw DomainError("HermitianCurve: entry interval mismatch");
  const double scale = entry_scale(entries_);
  for (double t : lobatto_points(32, iv_)) {
    const Eigen::MatrixXcd m = (*this)(t);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
      throw DomainError("HermitianCurve: matrix is not Hermitian at t = " + std::to_string(t));
  }
}

HermitianCurve HermitianCurve::from_upper(const Interval& iv, std::size_t n, const std::vector<ChebSeries>& upper) {
  if (upper.size() != n * (n + 1) / 2) throw DimensionError("HermitianCurve: need N(N+1)/2 upper entries");
  std::vector<ChebSeries> full(n * n, ChebSeries::constant(iv, 0.0));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++k) {
      full[i * n + j] = upper[k];
      full[j * n + i] = upper[k].conj();
    }
  return HermitianCurve(iv, n, std::move(full));
}

HermitianCurve HermitianCurve::scaled(const ChebSeries& a, const Eigen::MatrixXcd& b) {
  if (b.rows() != b.cols()) throw DimensionError("HermitianCurve: B must be square");
  const auto n = static_cast<std::size_t>(b.rows());
  std::vector<ChebSeries> entries;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) entries.push_back(a * b(i, j));
  return HermitianCurve(a.interval(), n, std::move(entries));
}

std::size_t HermitianCurve::max_degree() const {
  std::size_t d = 0;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

bool HermitianCurve::is_constant() const { return max_degree() == 0; }

Eigen::MatrixXcd HermitianCurve::operator()(double t) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = entries_[static_cast<std::size_t>(i * n + j)](t);
  return m;
}

StarMatrix HermitianCurve::theta_matrix() const { return StarMatrix::theta_matrix(iv_, n_, n_, entries_); }

Eigen::VectorXd EigenDecomposition::values_at(double t) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < dim(); ++i) v(static_cast<Eigen::Index>(i)) = eigenvalues[i](t).real();
  return v;
}

Eigen::MatrixXcd EigenDecomposition::vectors_at(double t) const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index r = 0; r < n; ++r) q(r, i) = eigenvectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)](t);
  return q;
}

EigenDecomposition analytic_eigendecompose(const HermitianCurve& a, const EigenOptions& opts) {
  const Interval& iv = a.interval();
  const std::size_t n = a.dim();
  EigenDecomposition out{iv, {}, {}, {}};

  if (a.is_constant()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a(iv.lo()));
    Eigen::MatrixXcd q = es.eigenvectors();
    gauge_first(q);
    for (std::size_t i = 0; i < n; ++i) {
      out.eigenvalues.push_back(ChebSeries::constant(iv, es.eigenvalues()(static_cast<Eigen::Index>(i))));
      std::vector<ChebSeries> col;
      for (std::size_t r = 0; r < n; ++r)
        col.push_back(ChebSeries::constant(iv, q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i))));
      out.eigenvectors.push_back(std::move(col));
    }
    out.grid = {iv.lo()};
    return out;
  }

  std::size_t deg = opts.grid_density ? opts.grid_density : 4 * (a.max_degree() + 1);
  deg = std::max<std::size_t>(deg, 16);
  double worst = 0.0;
  for (; deg <= kMaxTrackDegree; deg *= 2) {
    const auto ts = lobatto_points(deg, iv);
    const Tracked tr = track(a, ts, opts.force_match);
    const std::size_t m = ts.size();

    std::vector<std::vector<cplx>> lam_c(n), vec_c(n * n);
    double lscale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<cplx> vals(m);
      for (std::size_t k = 0; k < m; ++k) vals[k] = tr.values[k](static_cast<Eigen::Index>(i));
      lam_c[i] = values_to_coeffs(vals);
      for (const auto& c : lam_c[i]) lscale = std::max(lscale, std::abs(c));
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < m; ++k)
          vals[k] = tr.vectors[k](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
        vec_c[i * n + r] = values_to_coeffs(vals);
      }
    }
    lscale = std::max(lscale, 1e-300);
    bool ok = true;
    worst = 0.0;
    for (std::size_t i = 0; i < n && ok; ++i) ok = tail_small(lam_c[i], opts.tol * lscale);
    for (std::size_t k = 0; k < n * n && ok; ++k) ok = tail_small(vec_c[k], opts.tol);
    if (!ok) {
      for (const auto& c : vec_c) worst = std::max(worst, std::abs(c.back()));
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& c : lam_c[i]) c = c.real();
      out.eigenvalues.push_back(ChebSeries(iv, lam_c[i]).chopped(opts.tol, lscale));
      std::vector<ChebSeries> col;
      for (std::size_t r = 0; r < n; ++r) col.push_back(ChebSeries(iv, vec_c[i * n + r]).chopped(opts.tol, 1.0));
      out.eigenvectors.push_back(std::move(col));
    }
    out.grid = ts;
    return out;
  }
  throw UnresolvedError("analytic_eigendecompose: eigencurves not resolved on the finest grid", worst);
}

std::vector<StarEigenPair> build_star_eigenpairs(const EigenDecomposition& e) {
  const Interval& iv = e.interval;
  std::vector<StarEigenPair> pairs;
  for (std::size_t i = 0; i < e.dim(); ++i) {
    StarMatrix q(iv, e.dim(), 1);
    for (std::size_t r = 0; r < e.dim(); ++r) {
      const ChebSeries& qr = e.eigenvectors[i][r];
      const ChebSeries dq = qr.derivative();
      std::optional<SmoothKernel> th;
      std::optional<ChebSeries> de;
      if (!dq.is_zero()) th = SmoothKernel::from_t(dq);
      if (!qr.is_zero()) de = qr;
      q(r, 0) = StarElement(iv, th, de);
    }
    pairs.push_back(StarEigenPair{SmoothKernel::from_t(e.eigenvalues[i]), std::move(q)});
  }
  return pairs;
}

StarMatrix star_q_matrix(const EigenDecomposition& e) {
  const auto pairs = build_star_eigenpairs(e);
  StarMatrix q(e.interval, e.dim(), e.dim());
  for (std::size_t i = 0; i < e.dim(); ++i)
    for (std::size_t r = 0; r < e.dim(); ++r) q(r, i) = pairs[i].qvec(r, 0);
  return q;
}

StarMatrix star_lambda_matrix(const EigenDecomposition& e) {
  StarMatrix l(e.interval, e.dim(), e.dim());
  for (std::size_t i = 0; i < e.dim(); ++i)
    if (!e.eigenvalues[i].is_zero()) l(i, i) = StarElement::theta_type(SmoothKernel::from_t(e.eigenvalues[i]));
  return l;
}

double star_eigen_residual(const StarMatrix& a, const StarEigenPair& pair) {
  const StarElement lam = StarElement::theta_type(pair.lambda);
  const StarMatrix diff = matrix_star_product(a, pair.qvec) - star_scale_left(lam, pair.qvec);
  double r = 0.0;
  for (std::size_t i = 0; i < diff.rows(); ++i) {
    StarMatrix entry(diff.interval(), 1, 1);
    entry(0, 0) = diff(i, 0);
    r = std::max(r, star_norm_family(entry).sup());
  }
  return r;
}

namespace {

double composed_distance_to_identity(const StarMatrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      SmoothKernel k = theta_compose(m(i, j));
      if (i == j) k -= SmoothKernel::constant(m.interval(), 1.0);
      r = std::max(r, k.max_abs());
    }
  return r;
}

}  // namespace

double star_unitarity_residual(const EigenDecomposition& e) {
  const StarMatrix q = star_q_matrix(e);
  const StarMatrix qh = hermitian_transpose(q);
  return std::max(composed_distance_to_identity(matrix_star_product(q, qh)),
                  composed_distance_to_identity(matrix_star_product(qh, q)));
}

double factorization_residual(const HermitianCurve& a, const EigenDecomposition& e, int k) {
  if (k < 1) throw DomainError("factorization_residual: k must be >= 1");
  const StarMatrix am = a.theta_matrix();
  const StarMatrix lam = star_lambda_matrix(e);
  StarMatrix ak = am, lk = lam;
  for (int j = 1; j < k; ++j) {
    ak = matrix_star_product(am, ak);
    lk = matrix_star_product(lam, lk);
  }
  const StarMatrix q = star_q_matrix(e);
  const StarMatrix rhs = matrix_star_product(matrix_star_product(q, lk), hermitian_transpose(q));
  double r = 0.0;
  for (std::size_t i = 0; i < am.rows(); ++i)
    for (std::size_t j = 0; j < am.cols(); ++j)
      r = std::max(r, (theta_compose(ak(i, j)) - theta_compose(rhs(i, j))).max_abs());
  return r;
}

double commutation_residual(const EigenDecomposition& e, std::size_t j) {
  if (j >= e.dim()) throw DomainError("commutation_residual: channel index out of range");
  const auto pairs = build_star_eigenpairs(e);
  const StarElement lam = StarElement::theta_type(pairs[j].lambda);
  const StarMatrix diff = star_scale_right(pairs[j].qvec, lam) - star_scale_left(lam, pairs[j].qvec);
  double r = 0.0;
  for (std::size_t i = 0; i < diff.rows(); ++i) {
    const StarElement& d = diff(i, 0);
    if (d.has_theta()) r = std::max(r, d.theta_part()->max_abs());
    if (d.has_delta()) r = std::max(r, d.delta_part()->max_abs());
  }
  return r;
}

}  // namespace starpoly
