#pragma once

// Elements of the star algebra restricted to order <= 0:
//
//     x(t, s) = f(t, s) Theta(t - s) + g(t) delta(t - s),
//
// with f a bivariate analytic kernel and g a univariate analytic curve.
// Derivatives of delta only appear as one-shot actions (deltaprime_act_*).
//
// Kernels are tensor Chebyshev series on the full square interval^2 but are
// meaningful (and queried) only on the triangle s <= t.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "starpoly/cheb.hpp"

namespace starpoly {

class SmoothKernel {
 public:
  // coeffs(p, q) multiplies T_p(t) T_q(s) on the mapped interval.
  SmoothKernel(Interval iv, Eigen::MatrixXcd coeffs);

  static SmoothKernel constant(const Interval& iv, cplx value);
  // g(t), constant in s.
  static SmoothKernel from_t(const ChebSeries& g);
  // g(s), constant in t.
  static SmoothKernel from_s(const ChebSeries& g);
  // Values on the Lobatto tensor grid (rows: t nodes, cols: s nodes).
  static SmoothKernel from_values(const Interval& iv, const Eigen::MatrixXcd& values);
  // Interpolate f on a Lobatto grid of the given degrees.
  static SmoothKernel sample(const Interval& iv, std::size_t deg_t, std::size_t deg_s,
                             const std::function<cplx(double, double)>& f);
  // Adaptive interpolation by doubling both degrees.
  static SmoothKernel fit(const std::function<cplx(double, double)>& f, const Interval& iv,
                          double tol = kDefaultTol);

  const Interval& interval() const noexcept { return iv_; }
  const Eigen::MatrixXcd& coeffs() const noexcept { return c_; }
  std::size_t degree_t() const noexcept { return static_cast<std::size_t>(c_.rows()) - 1; }
  std::size_t degree_s() const noexcept { return static_cast<std::size_t>(c_.cols()) - 1; }

  // Evaluation on the triangle; throws DomainError for s > t or points outside.
  cplx operator()(double t, double s) const;
  // Evaluation anywhere on the square (analytic continuation below the diagonal).
  cplx eval_square(double t, double s) const;
  // Values on arbitrary tensor point sets.
  Eigen::MatrixXcd values_on(const std::vector<double>& ts, const std::vector<double>& ss) const;
  Eigen::MatrixXcd grid_values(std::size_t deg_t, std::size_t deg_s) const;

  // Univariate restrictions.
  ChebSeries at_s(double s) const;  // t -> f(t, s)
  ChebSeries at_t(double t) const;  // s -> f(t, s)
  ChebSeries diagonal() const;      // t -> f(t, t)

  SmoothKernel d_t() const;
  SmoothKernel d_s() const;
  // Primitive along one axis, anchored to vanish at the interval start.
  SmoothKernel primitive_t() const;
  SmoothKernel primitive_s() const;

  SmoothKernel times_t(const ChebSeries& g) const;  // f(t,s) g(t)
  SmoothKernel times_s(const ChebSeries& g) const;  // f(t,s) g(s)
  SmoothKernel conj() const;

  SmoothKernel& operator+=(const SmoothKernel& o);
  SmoothKernel& operator-=(const SmoothKernel& o);
  SmoothKernel& operator*=(cplx a);
  friend SmoothKernel operator+(SmoothKernel a, const SmoothKernel& b) { return a += b; }
  friend SmoothKernel operator-(SmoothKernel a, const SmoothKernel& b) { return a -= b; }
  friend SmoothKernel operator*(SmoothKernel a, cplx s) { return a *= s; }
  friend SmoothKernel operator*(cplx s, SmoothKernel a) { return a *= s; }
  // Pointwise product.
  friend SmoothKernel operator*(const SmoothKernel& a, const SmoothKernel& b);

  // Sum of |c_pq|, an upper bound for the sup norm.
  double coeff_norm() const;
  // Sampled max |f| over the closed triangle.
  double max_abs() const;
  bool is_zero() const;
  // Drop trailing rows/columns whose combined magnitude stays below
  // tol * max(scale, max|c_pq|).
  SmoothKernel chopped(double tol, double scale = 0.0) const;

  friend bool operator==(const SmoothKernel& a, const SmoothKernel& b) {
    return a.iv_ == b.iv_ && a.c_.rows() == b.c_.rows() && a.c_.cols() == b.c_.cols() && a.c_ == b.c_;
  }

 private:
  Interval iv_;
  Eigen::MatrixXcd c_;
};

// Chebyshev Vandermonde matrix V(i, p) = T_p(x_i) for points in the interval.
Eigen::MatrixXd cheb_vandermonde(const Interval& iv, const std::vector<double>& pts, std::size_t degree);

// ---------------------------------------------------------------------------

class StarElement {
 public:
  // Canonical zero.
  explicit StarElement(Interval iv) : iv_(iv) {}
  StarElement(Interval iv, std::optional<SmoothKernel> theta, std::optional<ChebSeries> delta);

  static StarElement zero(const Interval& iv) { return StarElement(iv); }
  static StarElement delta(const Interval& iv, cplx value = 1.0);
  static StarElement heaviside(const Interval& iv, cplx value = 1.0);
  static StarElement theta_type(SmoothKernel k);
  static StarElement delta_type(ChebSeries g);

  const Interval& interval() const noexcept { return iv_; }
  const std::optional<SmoothKernel>& theta_part() const noexcept { return theta_; }
  const std::optional<ChebSeries>& delta_part() const noexcept { return delta_; }
  bool has_theta() const noexcept { return theta_.has_value(); }
  bool has_delta() const noexcept { return delta_.has_value(); }
  bool is_zero() const noexcept { return !theta_ && !delta_; }
  double magnitude() const;

  StarElement conj() const;
  // Drops parts whose magnitude is below tol * scale.
  StarElement canonical(double tol, double scale) const;

  StarElement& operator+=(const StarElement& o);
  StarElement& operator-=(const StarElement& o);
  StarElement& operator*=(cplx a);
  friend StarElement operator+(StarElement a, const StarElement& b) { return a += b; }
  friend StarElement operator-(StarElement a, const StarElement& b) { return a -= b; }
  friend StarElement operator*(StarElement a, cplx s) { return a *= s; }
  friend StarElement operator*(cplx s, StarElement a) { return a *= s; }

 private:
  Interval iv_;
  std::optional<SmoothKernel> theta_;
  std::optional<ChebSeries> delta_;
};

class StarMatrix {
 public:
  StarMatrix(Interval iv, std::size_t rows, std::size_t cols);

  static StarMatrix identity(const Interval& iv, std::size_t n);
  // Constant vector v times delta, as an N x 1 matrix.
  static StarMatrix delta_vector(const Interval& iv, const Eigen::VectorXcd& v);
  // A(t) Theta(t - s) from a matrix of curves (row-major, rows x cols).
  static StarMatrix theta_matrix(const Interval& iv, std::size_t rows, std::size_t cols,
                                 const std::vector<ChebSeries>& entries);

  const Interval& interval() const noexcept { return iv_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  StarElement& operator()(std::size_t i, std::size_t j) { return entries_.at(i * cols_ + j); }
  const StarElement& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * cols_ + j); }

  bool is_theta_type() const;
  StarMatrix& operator+=(const StarMatrix& o);
  StarMatrix& operator-=(const StarMatrix& o);
  StarMatrix& operator*=(cplx a);
  friend StarMatrix operator+(StarMatrix a, const StarMatrix& b) { return a += b; }
  friend StarMatrix operator-(StarMatrix a, const StarMatrix& b) { return a -= b; }
  friend StarMatrix operator*(StarMatrix a, cplx s) { return a *= s; }

 private:
  Interval iv_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<StarElement> entries_;
};

// The star product restricted to order <= 0 elements.
StarElement star_product(const StarElement& x, const StarElement& y);
StarMatrix matrix_star_product(const StarMatrix& x, const StarMatrix& y);
// Scalar element times every entry, from the left / right.
StarMatrix star_scale_left(const StarElement& a, const StarMatrix& x);
StarMatrix star_scale_right(const StarMatrix& x, const StarElement& a);

// Kernel part of the Theta-Theta product: int_s^t f(t, tau) g(tau, s) dtau.
SmoothKernel theta_theta_product(const SmoothKernel& f, const SmoothKernel& g);

// Theta * (f Theta) = F Theta with F(t,s) = int_s^t f(tau, s) dtau.
SmoothKernel theta_act_left(const SmoothKernel& f);
// (f Theta) * Theta = F Theta with F(t,s) = int_s^t f(t, tau) dtau.
SmoothKernel theta_act_right(const SmoothKernel& f);
// delta' * (f Theta) = f_t Theta + f(t,t) delta.
StarElement deltaprime_act_left(const SmoothKernel& f);
// (f Theta) * delta' = -f_s Theta + f(t,t) delta.
StarElement deltaprime_act_right(const SmoothKernel& f);
// Theta * x for an arbitrary element; the delta part g contributes g(s).
SmoothKernel theta_compose(const StarElement& x);

// Entrywise conjugate transpose; the variables (t, s) are not swapped.
StarMatrix hermitian_transpose(const StarMatrix& a);

}  // namespace starpoly
