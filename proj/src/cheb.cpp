#include "starpoly/cheb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace starpoly {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// cos(pi * m / n) for m in [0, 2n).
std::vector<double> cos_table(std::size_t n) {
  std::vector<double> table(2 * n);
  for (std::size_t m = 0; m < 2 * n; ++m)
    table[m] = std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  return table;
}

double slack(const Interval& iv) {
  return 8.0 * kEps * std::max({std::abs(iv.lo()), std::abs(iv.hi()), iv.length()});
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    std::ostringstream os;
    os << "invalid interval [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
}

bool Interval::contains(double t) const noexcept {
  const double sl = slack(*this);
  return t >= lo_ - sl && t <= hi_ + sl;
}

std::vector<double> lobatto_points(std::size_t n) {
  if (n == 0) return {0.0};
  std::vector<double> x(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    x[j] = -std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  // Exact symmetry and endpoints.
  x.front() = -1.0;
  x.back() = 1.0;
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double m = 0.5 * (x[n - j] - x[j]);
    x[j] = -m;
    x[n - j] = m;
  }
  return x;
}

std::vector<double> lobatto_points(std::size_t n, const Interval& iv) {
  auto x = lobatto_points(n);
  for (auto& v : x) v = iv.from_unit(v);
  if (n > 0) {
    x.front() = iv.lo();
    x.back() = iv.hi();
  }
  return x;
}

std::vector<cplx> values_to_coeffs(std::span<const cplx> values) {
  const std::size_t m = values.size();
  if (m == 0) throw DomainError("values_to_coeffs: empty input");
  if (m == 1) return {values[0]};
  const std::size_t n = m - 1;
  const auto table = cos_table(n);
  std::vector<cplx> c(m);
  for (std::size_t k = 0; k <= n; ++k) {
    cplx acc = 0.5 * (values[0] + values[n] * table[(n * k) % (2 * n)]);
    for (std::size_t j = 1; j < n; ++j) acc += values[j] * table[(j * k) % (2 * n)];
    acc *= 2.0 / static_cast<double>(n);
    if (k % 2 == 1) acc = -acc;  // x_j = -cos(pi j / n)
    c[k] = acc;
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

std::vector<cplx> coeffs_to_values(std::span<const cplx> coeffs) {
  const std::size_t m = coeffs.size();
  if (m == 0) throw DomainError("coeffs_to_values: empty input");
  if (m == 1) return {coeffs[0]};
  const std::size_t n = m - 1;
  const auto table = cos_table(n);
  std::vector<cplx> v(m);
  for (std::size_t j = 0; j <= n; ++j) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double sign = (k % 2 == 1) ? -1.0 : 1.0;
      acc += coeffs[k] * (sign * table[(j * k) % (2 * n)]);
    }
    v[j] = acc;
  }
  return v;
}

Quadrature clenshaw_curtis(std::size_t npts, double lo, double hi) {
  if (npts < 2) throw DomainError("clenshaw_curtis: need at least two nodes");
  const std::size_t n = npts - 1;
  const double nd = static_cast<double>(n);
  std::vector<double> w(npts, 0.0);
  std::vector<double> theta(npts);
  for (std::size_t j = 0; j <= n; ++j) theta[j] = std::numbers::pi * static_cast<double>(j) / nd;
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (nd * nd - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (nd * nd);
  }
  for (std::size_t j = 1; j < n; ++j) {
    double v = 1.0;
    const std::size_t kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double kk = static_cast<double>(k);
      v -= 2.0 * std::cos(2.0 * kk * theta[j]) / (4.0 * kk * kk - 1.0);
    }
    if (n % 2 == 0) v -= std::cos(nd * theta[j]) / (nd * nd - 1.0);
    w[j] = 2.0 * v / nd;
  }
  const Interval iv(lo, hi);
  Quadrature q;
  q.nodes = lobatto_points(n, iv);
  q.weights.resize(npts);
  // The rule is symmetric, so ordering of theta vs nodes is immaterial.
  for (std::size_t j = 0; j <= n; ++j) q.weights[j] = 0.5 * iv.length() * w[j];
  return q;
}

cplx clenshaw(std::span<const cplx> coeffs, double x) {
  cplx b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    const cplx b0 = coeffs[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs[0] + x * b1 - b2;
}

// ---------------------------------------------------------------------------

ChebSeries::ChebSeries(Interval iv, std::vector<cplx> coeffs) : iv_(iv), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

ChebSeries ChebSeries::constant(const Interval& iv, cplx value) { return ChebSeries(iv, {value}); }

ChebSeries ChebSeries::identity(const Interval& iv) {
  return ChebSeries(iv, {iv.midpoint(), 0.5 * iv.length()});
}

ChebSeries ChebSeries::from_values(const Interval& iv, std::span<const cplx> lobatto_values) {
  return ChebSeries(iv, values_to_coeffs(lobatto_values));
}

cplx ChebSeries::operator()(double t) const {
  if (!iv_.contains(t)) {
    std::ostringstream os;
    os << "point " << t << " outside interval [" << iv_.lo() << ", " << iv_.hi() << "]";
    throw DomainError(os.str());
  }
  return eval_clamped(t);
}

cplx ChebSeries::eval_clamped(double t) const {
  const double x = std::clamp(iv_.to_unit(t), -1.0, 1.0);
  return clenshaw(coeffs_, x);
}

std::vector<cplx> ChebSeries::values_on(std::span<const double> ts) const {
  std::vector<cplx> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back((*this)(t));
  return out;
}

ChebSeries ChebSeries::derivative() const {
  const std::size_t n = degree();
  if (n == 0) return ChebSeries(iv_, {0.0});
  std::vector<cplx> d(n, 0.0);
  // d_{k-1} = d_{k+1} + 2k c_k
  std::vector<cplx> tmp(n + 2, 0.0);
  for (std::size_t k = n; k >= 1; --k) tmp[k - 1] = tmp[k + 1] + 2.0 * static_cast<double>(k) * coeffs_[k];
  for (std::size_t k = 0; k < n; ++k) d[k] = tmp[k];
  d[0] *= 0.5;
  const double scale = 2.0 / iv_.length();
  for (auto& v : d) v *= scale;
  return ChebSeries(iv_, std::move(d));
}

ChebSeries ChebSeries::antiderivative(double anchor) const {
  if (!iv_.contains(anchor)) throw DomainError("antiderivative: anchor outside interval");
  const std::size_t n = degree();
  std::vector<cplx> c(coeffs_);
  c.resize(n + 3, 0.0);
  std::vector<cplx> b(n + 2, 0.0);
  b[1] = c[0] - 0.5 * c[2];
  for (std::size_t k = 2; k <= n + 1; ++k)
    b[k] = (c[k - 1] - c[k + 1]) / (2.0 * static_cast<double>(k));
  const double scale = 0.5 * iv_.length();
  for (auto& v : b) v *= scale;
  ChebSeries out(iv_, std::move(b));
  out.coeffs_[0] -= out.eval_clamped(anchor);
  return out;
}

cplx ChebSeries::integral() const {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); k += 2) {
    const double kk = static_cast<double>(k);
    acc += coeffs_[k] * (2.0 / (1.0 - kk * kk));
  }
  return 0.5 * iv_.length() * acc;
}

ChebSeries ChebSeries::conj() const {
  std::vector<cplx> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](cplx z) { return std::conj(z); });
  return ChebSeries(iv_, std::move(c));
}

ChebSeries ChebSeries::real() const {
  std::vector<cplx> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](cplx z) { return cplx(z.real(), 0.0); });
  return ChebSeries(iv_, std::move(c));
}

double ChebSeries::max_abs() const {
  if (degree() == 0) return std::abs(coeffs_[0]);
  // Sample on a 4x oversampled Lobatto grid (endpoints included).
  std::vector<cplx> padded(coeffs_);
  padded.resize(std::max<std::size_t>(4 * degree(), 64) + 1, 0.0);
  const auto v = coeffs_to_values(padded);
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double ChebSeries::coeff_norm() const {
  double s = 0.0;
  for (const auto& z : coeffs_) s += std::abs(z);
  return s;
}

bool ChebSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx z) { return z == cplx(0.0); });
}

ChebSeries ChebSeries::chopped(double tol, double scale) const {
  double vmax = 0.0;
  for (const auto& z : coeffs_) vmax = std::max(vmax, std::abs(z));
  const double budget = tol * std::max(scale, vmax);
  std::size_t keep = coeffs_.size();
  double dropped = 0.0;
  while (keep > 1) {
    dropped += std::abs(coeffs_[keep - 1]);
    if (dropped > budget) break;
    --keep;
  }
  ChebSeries out(iv_, std::vector<cplx>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(keep)));
  if (keep == 1 && std::abs(out.coeffs_[0]) <= budget) out.coeffs_[0] = 0.0;
  out.resolved_ = resolved_;
  return out;
}

ChebSeries& ChebSeries::operator+=(const ChebSeries& o) {
  if (!(iv_ == o.iv_)) throw DomainError("ChebSeries: interval mismatch");
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

ChebSeries& ChebSeries::operator-=(const ChebSeries& o) {
  if (!(iv_ == o.iv_)) throw DomainError("ChebSeries: interval mismatch");
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

ChebSeries& ChebSeries::operator*=(cplx a) {
  for (auto& z : coeffs_) z *= a;
  return *this;
}

ChebSeries operator*(const ChebSeries& a, const ChebSeries& b) {
  if (!(a.iv_ == b.iv_)) throw DomainError("ChebSeries: interval mismatch");
  const std::size_t na = a.coeffs_.size(), nb = b.coeffs_.size();
  std::vector<cplx> c(na + nb - 1, 0.0);
  for (std::size_t m = 0; m < na; ++m) {
    for (std::size_t n = 0; n < nb; ++n) {
      const cplx p = 0.5 * a.coeffs_[m] * b.coeffs_[n];
      c[m + n] += p;
      c[m > n ? m - n : n - m] += p;
    }
  }
  return ChebSeries(a.iv_, std::move(c));
}

ChebSeries cheb_fit(const std::function<cplx(double)>& f, const Interval& iv, double tol,
                    double vscale_hint) {
  if (!(tol > 0.0)) throw DomainError("cheb_fit: tolerance must be positive");
  double tail = 0.0;
  for (std::size_t n = 16; n <= kMaxFitDegree; n *= 2) {
    const auto x = lobatto_points(n, iv);
    std::vector<cplx> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      v[j] = f(x[j]);
      if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
        throw DomainError("cheb_fit: function returned a non-finite value");
    }
    auto c = values_to_coeffs(v);
    double vmax = vscale_hint;
    for (const auto& z : c) vmax = std::max(vmax, std::abs(z));
    const std::size_t tail_len = std::max<std::size_t>(3, (n + 1) / 8);
    tail = 0.0;
    for (std::size_t k = n + 1 - tail_len; k <= n; ++k) tail = std::max(tail, std::abs(c[k]));
    if (tail <= tol * vmax || vmax == 0.0) {
      return ChebSeries(iv, std::move(c)).chopped(tol, vmax);
    }
  }
  std::ostringstream os;
  os << "unresolved function: tail " << tail << " at degree " << kMaxFitDegree;
  throw UnresolvedError(os.str(), tail);
}

}  // namespace starpoly
