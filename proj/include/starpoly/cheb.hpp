#pragma once

// Univariate Chebyshev technology: adaptive interpolation, evaluation,
// calculus and arithmetic on a bounded interval.  Every analytic curve in
// the library (kernels' diagonal traces, eigencurves, eigenvector entries,
// primitives) is a ChebSeries.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "starpoly/error.hpp"

namespace starpoly {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-13;
inline constexpr std::size_t kMaxFitDegree = std::size_t{1} << 14;

class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept { return 0.5 * (lo_ + hi_); }
  bool contains(double t) const noexcept;

  // Affine maps between the interval and [-1, 1].
  double to_unit(double t) const noexcept { return (2.0 * t - lo_ - hi_) / (hi_ - lo_); }
  double from_unit(double x) const noexcept { return midpoint() + 0.5 * length() * x; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

// Chebyshev–Lobatto points of degree n (n + 1 points) in increasing order.
std::vector<double> lobatto_points(std::size_t n);
std::vector<double> lobatto_points(std::size_t n, const Interval& iv);

// Values at lobatto_points(n) <-> Chebyshev coefficients (DCT-I).
std::vector<cplx> values_to_coeffs(std::span<const cplx> values);
std::vector<cplx> coeffs_to_values(std::span<const cplx> coeffs);

// Clenshaw–Curtis rule with npts nodes (npts >= 2) on [lo, hi]; exact for
// polynomials of degree npts - 1.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature clenshaw_curtis(std::size_t npts, double lo, double hi);

// Clenshaw evaluation of sum c_k T_k(x), x in [-1, 1].
cplx clenshaw(std::span<const cplx> coeffs, double x);

class ChebSeries {
 public:
  ChebSeries(Interval iv, std::vector<cplx> coeffs);

  static ChebSeries constant(const Interval& iv, cplx value);
  // f(t) = t.
  static ChebSeries identity(const Interval& iv);
  static ChebSeries from_values(const Interval& iv, std::span<const cplx> lobatto_values);

  const Interval& interval() const noexcept { return iv_; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  // Trailing-coefficient test carried over from adaptive construction.
  bool resolved() const noexcept { return resolved_; }

  // Throws DomainError outside the interval.
  cplx operator()(double t) const;
  cplx eval_clamped(double t) const;
  std::vector<cplx> values_on(std::span<const double> ts) const;

  ChebSeries derivative() const;
  // Primitive F with F(anchor) = 0.
  ChebSeries antiderivative(double anchor) const;
  // Integral over the whole interval.
  cplx integral() const;

  ChebSeries conj() const;
  ChebSeries real() const;
  double max_abs() const;
  // Sum of |c_k|: a cheap upper bound for max_abs.
  double coeff_norm() const;
  bool is_zero() const;

  // Drop trailing coefficients with magnitude <= tol * max(scale, max|c_k|).
  ChebSeries chopped(double tol, double scale = 0.0) const;

  ChebSeries& operator+=(const ChebSeries& o);
  ChebSeries& operator-=(const ChebSeries& o);
  ChebSeries& operator*=(cplx a);

  friend ChebSeries operator+(ChebSeries a, const ChebSeries& b) { return a += b; }
  friend ChebSeries operator-(ChebSeries a, const ChebSeries& b) { return a -= b; }
  friend ChebSeries operator*(ChebSeries a, cplx s) { return a *= s; }
  friend ChebSeries operator*(cplx s, ChebSeries a) { return a *= s; }
  friend ChebSeries operator-(ChebSeries a) { return a *= -1.0; }
  // Pointwise product (exact in coefficient space).
  friend ChebSeries operator*(const ChebSeries& a, const ChebSeries& b);

 private:
  friend ChebSeries cheb_fit(const std::function<cplx(double)>&, const Interval&, double, double);
  Interval iv_;
  std::vector<cplx> coeffs_;
  bool resolved_ = true;
};

// Adaptive interpolation by degree doubling.  The trailing coefficients must
// fall below tol * max(vscale_hint, max|c_k|); the hint gives an absolute
// floor for functions that are themselves near zero.  Throws UnresolvedError
// beyond kMaxFitDegree.
ChebSeries cheb_fit(const std::function<cplx(double)>& f, const Interval& iv,
                    double tol = kDefaultTol, double vscale_hint = 0.0);

}  // namespace starpoly
