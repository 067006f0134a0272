#include "starpoly/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace starpoly {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

// values -> coefficients on the Lobatto grid of degree n.
std::shared_ptr<const MatrixXd> dct_matrix(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const MatrixXd>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto m = std::make_shared<MatrixXd>(n + 1, n + 1);
  if (n == 0) {
    (*m)(0, 0) = 1.0;
  } else {
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t j = 0; j <= n; ++j) {
        double w = (j == 0 || j == n) ? 0.5 : 1.0;
        if (k == 0 || k == n) w *= 0.5;
        const double sign = (k % 2 == 1) ? -1.0 : 1.0;
        const auto idx = (j * k) % (2 * n);
        (*m)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
            sign * w * (2.0 / nd) * std::cos(std::numbers::pi * static_cast<double>(idx) / nd);
      }
    }
  }
  cache.emplace(n, m);
  return m;
}

std::vector<cplx> column(const MatrixXcd& c, Eigen::Index q) {
  std::vector<cplx> v(static_cast<std::size_t>(c.rows()));
  for (Eigen::Index p = 0; p < c.rows(); ++p) v[static_cast<std::size_t>(p)] = c(p, q);
  return v;
}

// Derivative of a coefficient vector on [-1,1].
std::vector<cplx> diff_coeffs(const std::vector<cplx>& c) {
  const std::size_t n = c.size() - 1;
  if (n == 0) return {0.0};
  std::vector<cplx> tmp(n + 2, 0.0);
  for (std::size_t k = n; k >= 1; --k) tmp[k - 1] = tmp[k + 1] + 2.0 * static_cast<double>(k) * c[k];
  tmp.resize(n);
  tmp[0] *= 0.5;
  return tmp;
}

// Primitive on [-1,1] vanishing at x = -1.
std::vector<cplx> prim_coeffs(const std::vector<cplx>& cin) {
  const std::size_t n = cin.size() - 1;
  std::vector<cplx> c(cin);
  c.resize(n + 3, 0.0);
  std::vector<cplx> b(n + 2, 0.0);
  b[1] = c[0] - 0.5 * c[2];
  for (std::size_t k = 2; k <= n + 1; ++k) b[k] = (c[k - 1] - c[k + 1]) / (2.0 * static_cast<double>(k));
  cplx at_minus_one = 0.0;
  for (std::size_t k = 1; k < b.size(); ++k) at_minus_one += (k % 2 == 1) ? -b[k] : b[k];
  b[0] = -at_minus_one;
  return b;
}

// Coefficient-space product of two Chebyshev vectors.
std::vector<cplx> mul_coeffs(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] == cplx(0.0)) continue;
    for (std::size_t n = 0; n < b.size(); ++n) {
      const cplx p = 0.5 * a[m] * b[n];
      c[m + n] += p;
      c[m > n ? m - n : n - m] += p;
    }
  }
  return c;
}

MatrixXcd padded(const MatrixXcd& c, Eigen::Index rows, Eigen::Index cols) {
  MatrixXcd out = MatrixXcd::Zero(std::max(rows, c.rows()), std::max(cols, c.cols()));
  out.topLeftCorner(c.rows(), c.cols()) = c;
  return out;
}

void require_same(const Interval& a, const Interval& b) {
  if (!(a == b)) throw DomainError("star algebra: interval mismatch");
}

// Spectral integration matrix: W(i, k) = int_lo^{x_i} l_k(tau) dtau, where l_k
// is the Lagrange basis on the Lobatto grid of degree n.
MatrixXd integration_weights(const Interval& iv, const std::vector<double>& xs, std::size_t n) {
  const auto dct = dct_matrix(n);
  // Primitive of each basis column, then evaluation.
  MatrixXd prim(n + 2, n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<cplx> col(n + 1);
    for (std::size_t p = 0; p <= n; ++p)
      col[p] = (*dct)(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k));
    const auto b = prim_coeffs(col);
    for (std::size_t p = 0; p < b.size(); ++p)
      prim(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) = b[p].real();
  }
  prim *= 0.5 * iv.length();
  return cheb_vandermonde(iv, xs, n + 1) * prim;
}

}  // namespace

Eigen::MatrixXd cheb_vandermonde(const Interval& iv, const std::vector<double>& pts, std::size_t degree) {
  MatrixXd v(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(degree + 1));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = std::clamp(iv.to_unit(pts[i]), -1.0, 1.0);
    const auto r = static_cast<Eigen::Index>(i);
    v(r, 0) = 1.0;
    if (degree >= 1) v(r, 1) = x;
    for (std::size_t p = 2; p <= degree; ++p) {
      const auto pp = static_cast<Eigen::Index>(p);
      v(r, pp) = 2.0 * x * v(r, pp - 1) - v(r, pp - 2);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// SmoothKernel

SmoothKernel::SmoothKernel(Interval iv, Eigen::MatrixXcd coeffs) : iv_(iv), c_(std::move(coeffs)) {
  if (c_.size() == 0) c_ = MatrixXcd::Zero(1, 1);
}

SmoothKernel SmoothKernel::constant(const Interval& iv, cplx value) {
  MatrixXcd c(1, 1);
  c(0, 0) = value;
  return SmoothKernel(iv, c);
}

SmoothKernel SmoothKernel::from_t(const ChebSeries& g) {
  const auto& cf = g.coeffs();
  MatrixXcd c(static_cast<Eigen::Index>(cf.size()), 1);
  for (std::size_t p = 0; p < cf.size(); ++p) c(static_cast<Eigen::Index>(p), 0) = cf[p];
  return SmoothKernel(g.interval(), c);
}

SmoothKernel SmoothKernel::from_s(const ChebSeries& g) {
  const auto& cf = g.coeffs();
  MatrixXcd c(1, static_cast<Eigen::Index>(cf.size()));
  for (std::size_t q = 0; q < cf.size(); ++q) c(0, static_cast<Eigen::Index>(q)) = cf[q];
  return SmoothKernel(g.interval(), c);
}

SmoothKernel SmoothKernel::from_values(const Interval& iv, const Eigen::MatrixXcd& values) {
  const auto dt = dct_matrix(static_cast<std::size_t>(values.rows()) - 1);
  const auto ds = dct_matrix(static_cast<std::size_t>(values.cols()) - 1);
  MatrixXcd c = dt->cast<cplx>() * values * ds->transpose().cast<cplx>();
  return SmoothKernel(iv, std::move(c));
}

SmoothKernel SmoothKernel::sample(const Interval& iv, std::size_t deg_t, std::size_t deg_s,
                                  const std::function<cplx(double, double)>& f) {
  const auto ts = lobatto_points(deg_t, iv);
  const auto ss = lobatto_points(deg_s, iv);
  MatrixXcd v(static_cast<Eigen::Index>(ts.size()), static_cast<Eigen::Index>(ss.size()));
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < ss.size(); ++j)
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(ts[i], ss[j]);
  return from_values(iv, v);
}

SmoothKernel SmoothKernel::fit(const std::function<cplx(double, double)>& f, const Interval& iv,
                               double tol) {
  double tail = 0.0;
  for (std::size_t n = 8; n <= 512; n *= 2) {
    auto k = sample(iv, n, n, f);
    const auto& c = k.coeffs();
    const double vmax = c.cwiseAbs().maxCoeff();
    const Eigen::Index tl = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(n + 1) / 8);
    tail = std::max(c.bottomRows(tl).cwiseAbs().maxCoeff(), c.rightCols(tl).cwiseAbs().maxCoeff());
    if (tail <= tol * vmax || vmax == 0.0) return k.chopped(tol);
  }
  throw UnresolvedError("unresolved kernel at maximal grid size", tail);
}

cplx SmoothKernel::operator()(double t, double s) const {
  const double sl = 1e-14 * std::max(1.0, iv_.length());
  if (!iv_.contains(t) || !iv_.contains(s) || s > t + sl) {
    std::ostringstream os;
    os << "kernel evaluated off the triangle at (t, s) = (" << t << ", " << s << ")";
    throw DomainError(os.str());
  }
  return eval_square(t, s);
}

cplx SmoothKernel::eval_square(double t, double s) const {
  const double xs = std::clamp(iv_.to_unit(s), -1.0, 1.0);
  std::vector<cplx> ct(static_cast<std::size_t>(c_.rows()));
  std::vector<cplx> row(static_cast<std::size_t>(c_.cols()));
  for (Eigen::Index p = 0; p < c_.rows(); ++p) {
    for (Eigen::Index q = 0; q < c_.cols(); ++q) row[static_cast<std::size_t>(q)] = c_(p, q);
    ct[static_cast<std::size_t>(p)] = clenshaw(row, xs);
  }
  return clenshaw(ct, std::clamp(iv_.to_unit(t), -1.0, 1.0));
}

Eigen::MatrixXcd SmoothKernel::values_on(const std::vector<double>& ts, const std::vector<double>& ss) const {
  const auto vt = cheb_vandermonde(iv_, ts, degree_t());
  const auto vs = cheb_vandermonde(iv_, ss, degree_s());
  return vt.cast<cplx>() * c_ * vs.transpose().cast<cplx>();
}

Eigen::MatrixXcd SmoothKernel::grid_values(std::size_t deg_t, std::size_t deg_s) const {
  return values_on(lobatto_points(deg_t, iv_), lobatto_points(deg_s, iv_));
}

ChebSeries SmoothKernel::at_s(double s) const {
  const auto vs = cheb_vandermonde(iv_, {s}, degree_s());
  Eigen::VectorXcd col = c_ * vs.row(0).transpose().cast<cplx>();
  return ChebSeries(iv_, std::vector<cplx>(col.data(), col.data() + col.size()));
}

ChebSeries SmoothKernel::at_t(double t) const {
  const auto vt = cheb_vandermonde(iv_, {t}, degree_t());
  Eigen::RowVectorXcd row = vt.row(0).cast<cplx>() * c_;
  return ChebSeries(iv_, std::vector<cplx>(row.data(), row.data() + row.size()));
}

ChebSeries SmoothKernel::diagonal() const {
  std::vector<cplx> d(static_cast<std::size_t>(c_.rows() + c_.cols() - 1), 0.0);
  for (Eigen::Index p = 0; p < c_.rows(); ++p) {
    for (Eigen::Index q = 0; q < c_.cols(); ++q) {
      const cplx h = 0.5 * c_(p, q);
      d[static_cast<std::size_t>(p + q)] += h;
      d[static_cast<std::size_t>(std::abs(p - q))] += h;
    }
  }
  return ChebSeries(iv_, std::move(d));
}

SmoothKernel SmoothKernel::d_t() const {
  const double scale = 2.0 / iv_.length();
  const Eigen::Index rows = std::max<Eigen::Index>(1, c_.rows() - 1);
  MatrixXcd out(rows, c_.cols());
  for (Eigen::Index q = 0; q < c_.cols(); ++q) {
    const auto d = diff_coeffs(column(c_, q));
    for (Eigen::Index p = 0; p < rows; ++p) out(p, q) = scale * d[static_cast<std::size_t>(p)];
  }
  return SmoothKernel(iv_, out);
}

SmoothKernel SmoothKernel::d_s() const {
  SmoothKernel tr(iv_, c_.transpose());
  return SmoothKernel(iv_, tr.d_t().c_.transpose());
}

SmoothKernel SmoothKernel::primitive_t() const {
  const double scale = 0.5 * iv_.length();
  MatrixXcd out(c_.rows() + 1, c_.cols());
  for (Eigen::Index q = 0; q < c_.cols(); ++q) {
    const auto b = prim_coeffs(column(c_, q));
    for (Eigen::Index p = 0; p < out.rows(); ++p) out(p, q) = scale * b[static_cast<std::size_t>(p)];
  }
  return SmoothKernel(iv_, out);
}

SmoothKernel SmoothKernel::primitive_s() const {
  SmoothKernel tr(iv_, c_.transpose());
  return SmoothKernel(iv_, tr.primitive_t().c_.transpose());
}

SmoothKernel SmoothKernel::times_t(const ChebSeries& g) const {
  require_same(iv_, g.interval());
  const auto& gc = g.coeffs();
  MatrixXcd out(c_.rows() + static_cast<Eigen::Index>(gc.size()) - 1, c_.cols());
  for (Eigen::Index q = 0; q < c_.cols(); ++q) {
    const auto prod = mul_coeffs(column(c_, q), gc);
    for (Eigen::Index p = 0; p < out.rows(); ++p) out(p, q) = prod[static_cast<std::size_t>(p)];
  }
  return SmoothKernel(iv_, out);
}

SmoothKernel SmoothKernel::times_s(const ChebSeries& g) const {
  SmoothKernel tr(iv_, c_.transpose());
  return SmoothKernel(iv_, tr.times_t(g).c_.transpose());
}

SmoothKernel SmoothKernel::conj() const { return SmoothKernel(iv_, c_.conjugate()); }

SmoothKernel& SmoothKernel::operator+=(const SmoothKernel& o) {
  require_same(iv_, o.iv_);
  c_ = padded(c_, o.c_.rows(), o.c_.cols());
  c_.topLeftCorner(o.c_.rows(), o.c_.cols()) += o.c_;
  return *this;
}

SmoothKernel& SmoothKernel::operator-=(const SmoothKernel& o) {
  require_same(iv_, o.iv_);
  c_ = padded(c_, o.c_.rows(), o.c_.cols());
  c_.topLeftCorner(o.c_.rows(), o.c_.cols()) -= o.c_;
  return *this;
}

SmoothKernel& SmoothKernel::operator*=(cplx a) {
  c_ *= a;
  return *this;
}

SmoothKernel operator*(const SmoothKernel& a, const SmoothKernel& b) {
  require_same(a.iv_, b.iv_);
  const std::size_t dt = a.degree_t() + b.degree_t();
  const std::size_t ds = a.degree_s() + b.degree_s();
  MatrixXcd v = a.grid_values(dt, ds).cwiseProduct(b.grid_values(dt, ds));
  return SmoothKernel::from_values(a.iv_, v);
}

double SmoothKernel::coeff_norm() const { return c_.cwiseAbs().sum(); }

double SmoothKernel::max_abs() const {
  const std::size_t nt = std::max<std::size_t>(2 * degree_t() + 8, 32);
  const std::size_t ns = std::max<std::size_t>(2 * degree_s() + 8, 32);
  const auto ts = lobatto_points(nt, iv_);
  const auto ss = lobatto_points(ns, iv_);
  const MatrixXcd v = values_on(ts, ss);
  double m = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < ss.size(); ++j)
      if (ss[j] <= ts[i]) m = std::max(m, std::abs(v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  return m;
}

bool SmoothKernel::is_zero() const { return (c_.array() == cplx(0.0)).all(); }

SmoothKernel SmoothKernel::chopped(double tol, double scale) const {
  const double vmax = c_.cwiseAbs().maxCoeff();
  const double budget = tol * std::max(scale, vmax);
  if (c_.cwiseAbs().sum() <= budget) return SmoothKernel::constant(iv_, 0.0);
  // Split the budget between the two axes.
  double left = 0.5 * budget;
  Eigen::Index rows = c_.rows();
  while (rows > 1) {
    const double r = c_.row(rows - 1).cwiseAbs().sum();
    if (r > left) break;
    left -= r;
    --rows;
  }
  left += 0.5 * budget;
  Eigen::Index cols = c_.cols();
  while (cols > 1) {
    const double r = c_.col(cols - 1).head(rows).cwiseAbs().sum();
    if (r > left) break;
    left -= r;
    --cols;
  }
  return SmoothKernel(iv_, c_.topLeftCorner(rows, cols));
}

// ---------------------------------------------------------------------------
// StarElement

StarElement::StarElement(Interval iv, std::optional<SmoothKernel> theta, std::optional<ChebSeries> delta)
    : iv_(iv), theta_(std::move(theta)), delta_(std::move(delta)) {
  if (theta_) require_same(iv_, theta_->interval());
  if (delta_) require_same(iv_, delta_->interval());
}

StarElement StarElement::delta(const Interval& iv, cplx value) {
  return StarElement(iv, std::nullopt, ChebSeries::constant(iv, value));
}

StarElement StarElement::heaviside(const Interval& iv, cplx value) {
  return StarElement(iv, SmoothKernel::constant(iv, value), std::nullopt);
}

StarElement StarElement::theta_type(SmoothKernel k) {
  const Interval iv = k.interval();
  return StarElement(iv, std::move(k), std::nullopt);
}

StarElement StarElement::delta_type(ChebSeries g) {
  const Interval iv = g.interval();
  return StarElement(iv, std::nullopt, std::move(g));
}

double StarElement::magnitude() const {
  return (theta_ ? theta_->coeff_norm() : 0.0) + (delta_ ? delta_->coeff_norm() : 0.0);
}

StarElement StarElement::conj() const {
  std::optional<SmoothKernel> th;
  std::optional<ChebSeries> de;
  if (theta_) th = theta_->conj();
  if (delta_) de = delta_->conj();
  return StarElement(iv_, std::move(th), std::move(de));
}

StarElement StarElement::canonical(double tol, double scale) const {
  StarElement out(*this);
  if (out.theta_) {
    if (out.theta_->coeff_norm() <= tol * scale) {
      out.theta_.reset();
    } else {
      out.theta_ = out.theta_->chopped(tol, scale);
    }
  }
  if (out.delta_ && out.delta_->coeff_norm() <= tol * scale) out.delta_.reset();
  return out;
}

StarElement& StarElement::operator+=(const StarElement& o) {
  require_same(iv_, o.iv_);
  if (o.theta_) {
    if (theta_) *theta_ += *o.theta_;
    else theta_ = o.theta_;
  }
  if (o.delta_) {
    if (delta_) *delta_ += *o.delta_;
    else delta_ = o.delta_;
  }
  return *this;
}

StarElement& StarElement::operator-=(const StarElement& o) { return *this += o * cplx(-1.0); }

StarElement& StarElement::operator*=(cplx a) {
  if (theta_) *theta_ *= a;
  if (delta_) *delta_ *= a;
  return *this;
}

// ---------------------------------------------------------------------------
// StarMatrix

StarMatrix::StarMatrix(Interval iv, std::size_t rows, std::size_t cols)
    : iv_(iv), rows_(rows), cols_(cols), entries_(rows * cols, StarElement(iv)) {
  if (rows == 0 || cols == 0) throw DimensionError("StarMatrix: empty shape");
}

StarMatrix StarMatrix::identity(const Interval& iv, std::size_t n) {
  StarMatrix m(iv, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = StarElement::delta(iv);
  return m;
}

StarMatrix StarMatrix::delta_vector(const Interval& iv, const Eigen::VectorXcd& v) {
  StarMatrix m(iv, static_cast<std::size_t>(v.size()), 1);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != cplx(0.0)) m(static_cast<std::size_t>(i), 0) = StarElement::delta(iv, v(i));
  return m;
}

StarMatrix StarMatrix::theta_matrix(const Interval& iv, std::size_t rows, std::size_t cols,
                                    const std::vector<ChebSeries>& entries) {
  if (entries.size() != rows * cols) throw DimensionError("theta_matrix: wrong number of entries");
  StarMatrix m(iv, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& e = entries[i * cols + j];
      if (!e.is_zero()) m(i, j) = StarElement::theta_type(SmoothKernel::from_t(e));
    }
  return m;
}

bool StarMatrix::is_theta_type() const {
  return std::none_of(entries_.begin(), entries_.end(), [](const StarElement& e) { return e.has_delta(); });
}

StarMatrix& StarMatrix::operator+=(const StarMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("StarMatrix: shape mismatch in sum");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

StarMatrix& StarMatrix::operator-=(const StarMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("StarMatrix: shape mismatch in difference");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

StarMatrix& StarMatrix::operator*=(cplx a) {
  for (auto& e : entries_) e *= a;
  return *this;
}

// ---------------------------------------------------------------------------
// Products and actions

SmoothKernel theta_theta_product(const SmoothKernel& f, const SmoothKernel& g) {
  require_same(f.interval(), g.interval());
  const Interval& iv = f.interval();
  // Exact degrees of the result for polynomial operands.
  const std::size_t inner = f.degree_s() + g.degree_t();
  const std::size_t dt = f.degree_t() + inner + 1;
  const std::size_t ds = g.degree_s() + inner + 1;
  const auto tau = lobatto_points(inner, iv);
  const auto xt = lobatto_points(dt, iv);
  const auto ys = lobatto_points(ds, iv);
  MatrixXcd fv = f.values_on(xt, tau);  // (dt+1) x K
  MatrixXcd gv = g.values_on(tau, ys);  // K x (ds+1)
  const MatrixXd wt = integration_weights(iv, xt, inner);
  const MatrixXd ws = integration_weights(iv, ys, inner);
  // h(i,j) = sum_k (W(t_i)_k - W(s_j)_k) f(t_i, tau_k) g(tau_k, s_j)
  MatrixXcd h = (wt.cast<cplx>().cwiseProduct(fv)) * gv - fv * (ws.transpose().cast<cplx>().cwiseProduct(gv));
  return SmoothKernel::from_values(iv, h);
}

namespace {

struct ProductTerms {
  std::optional<SmoothKernel> theta;
  std::optional<ChebSeries> delta;
  double scale = 0.0;
  bool quadrature = false;

  void add(const StarElement& x, const StarElement& y) {
    require_same(x.interval(), y.interval());
    const double sc = x.magnitude() * y.magnitude() * std::max(1.0, x.interval().length());
    scale = std::max(scale, sc);
    auto acc = [&](SmoothKernel k) {
      if (theta) *theta += k;
      else theta = std::move(k);
    };
    if (x.has_theta() && y.has_theta()) {
      acc(theta_theta_product(*x.theta_part(), *y.theta_part()));
      quadrature = true;
    }
    if (x.has_theta() && y.has_delta()) acc(x.theta_part()->times_s(*y.delta_part()));
    if (x.has_delta() && y.has_theta()) acc(y.theta_part()->times_t(*x.delta_part()));
    if (x.has_delta() && y.has_delta()) {
      auto d = *x.delta_part() * *y.delta_part();
      if (delta) *delta += d;
      else delta = std::move(d);
    }
  }

  StarElement finish(const Interval& iv) const {
    StarElement e(iv, theta, delta);
    if (!quadrature) {
      // delta rules are exact; only drop parts that vanish identically.
      std::optional<SmoothKernel> th = theta;
      std::optional<ChebSeries> de = delta;
      if (th && th->is_zero()) th.reset();
      if (de && de->is_zero()) de.reset();
      return StarElement(iv, std::move(th), std::move(de));
    }
    return e.canonical(kDefaultTol, scale);
  }
};

}  // namespace

StarElement star_product(const StarElement& x, const StarElement& y) {
  ProductTerms terms;
  terms.add(x, y);
  return terms.finish(x.interval());
}

StarMatrix matrix_star_product(const StarMatrix& x, const StarMatrix& y) {
  if (x.cols() != y.rows()) throw DimensionError("matrix_star_product: inner dimensions disagree");
  require_same(x.interval(), y.interval());
  StarMatrix out(x.interval(), x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      ProductTerms terms;
      for (std::size_t k = 0; k < x.cols(); ++k) {
        if (x(i, k).is_zero() || y(k, j).is_zero()) continue;
        terms.add(x(i, k), y(k, j));
      }
      out(i, j) = terms.finish(x.interval());
    }
  return out;
}

StarMatrix star_scale_left(const StarElement& a, const StarMatrix& x) {
  StarMatrix out(x.interval(), x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = star_product(a, x(i, j));
  return out;
}

StarMatrix star_scale_right(const StarMatrix& x, const StarElement& a) {
  StarMatrix out(x.interval(), x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = star_product(x(i, j), a);
  return out;
}

SmoothKernel theta_act_left(const SmoothKernel& f) {
  const SmoothKernel p = f.primitive_t();
  return p - SmoothKernel::from_s(p.diagonal());
}

SmoothKernel theta_act_right(const SmoothKernel& f) {
  const SmoothKernel q = f.primitive_s();
  return SmoothKernel::from_t(q.diagonal()) - q;
}

namespace {

StarElement with_parts(const SmoothKernel& theta, const ChebSeries& delta, double scale) {
  return StarElement(theta.interval(), theta, delta).canonical(kDefaultTol, scale);
}

}  // namespace

StarElement deltaprime_act_left(const SmoothKernel& f) {
  return with_parts(f.d_t(), f.diagonal(), f.coeff_norm());
}

StarElement deltaprime_act_right(const SmoothKernel& f) {
  return with_parts(f.d_s() * cplx(-1.0), f.diagonal(), f.coeff_norm());
}

SmoothKernel theta_compose(const StarElement& x) {
  SmoothKernel out = SmoothKernel::constant(x.interval(), 0.0);
  if (x.has_theta()) out += theta_act_left(*x.theta_part());
  if (x.has_delta()) out += SmoothKernel::from_s(*x.delta_part());
  return out;
}

StarMatrix hermitian_transpose(const StarMatrix& a) {
  StarMatrix out(a.interval(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j).conj();
  return out;
}

}  // namespace starpoly
