#include "starpoly/odesolve.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "starpoly/error.hpp"

namespace starpoly {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

// Real 2N form of u' = A(t) u: (re, im) interleaved.
struct Rhs {
  const HermitianCurve* a;
  std::size_t n;

  void operator()(const State& x, State& dx, double t) const {
    const Eigen::MatrixXcd m = (*a)(std::clamp(t, a->interval().lo(), a->interval().hi()));
    Eigen::VectorXcd u(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) u(static_cast<Eigen::Index>(i)) = cplx(x[2 * i], x[2 * i + 1]);
    const Eigen::VectorXcd du = m * u;
    for (std::size_t i = 0; i < n; ++i) {
      dx[2 * i] = du(static_cast<Eigen::Index>(i)).real();
      dx[2 * i + 1] = du(static_cast<Eigen::Index>(i)).imag();
    }
  }
};

std::vector<Eigen::VectorXcd> integrate(const HermitianCurve& a, const Eigen::VectorXcd& v, double tol,
                                        const std::vector<double>& ts) {
  const auto n = static_cast<std::size_t>(v.size());
  State x(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    x[2 * i] = v(static_cast<Eigen::Index>(i)).real();
    x[2 * i + 1] = v(static_cast<Eigen::Index>(i)).imag();
  }
  std::vector<Eigen::VectorXcd> out;
  out.reserve(ts.size());
  auto observer = [&](const State& s, double) {
    Eigen::VectorXcd u(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) u(static_cast<Eigen::Index>(i)) = cplx(s[2 * i], s[2 * i + 1]);
    out.push_back(u);
  };
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  const double dt0 = (ts.back() - ts.front()) * 1e-3;
  try {
    odeint::integrate_times(stepper, Rhs{&a, n}, x, ts.begin(), ts.end(), dt0, observer,
                            odeint::max_step_checker(100000));
  } catch (const odeint::step_adjustment_error& e) {
    throw NumericalError(std::string("reference_solve: step size underflow (stiff problem?); try the closed form "
                                     "or a shorter interval: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw NumericalError(std::string("reference_solve: no progress; try the closed form or a shorter interval: ") +
                         e.what());
  }
  return out;
}

}  // namespace

std::vector<ChebSeries> SampledSolution::to_series() const {
  if (!lobatto) throw DomainError("SampledSolution::to_series: samples are not on a Lobatto grid");
  std::vector<ChebSeries> out;
  std::vector<cplx> vals(times.size());
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = 0; k < times.size(); ++k) vals[k] = states[k](static_cast<Eigen::Index>(r));
    out.push_back(ChebSeries::from_values(interval, vals));
  }
  return out;
}

double SampledSolution::interpolation_tail() const {
  double tail = 0.0;
  for (const auto& s : to_series()) {
    const auto& c = s.coeffs();
    for (std::size_t k = c.size() > 4 ? c.size() - 4 : 0; k < c.size(); ++k) tail = std::max(tail, std::abs(c[k]));
  }
  return tail;
}

SampledSolution reference_solve(const HermitianCurve& a, const Eigen::VectorXcd& v, double tol,
                                std::size_t out_degree) {
  if (!(tol >= 1e-14)) throw DomainError("reference_solve: tol must be >= 1e-14");
  if (static_cast<std::size_t>(v.size()) != a.dim()) throw DimensionError("reference_solve: vector length mismatch");
  if (out_degree < 1) throw DomainError("reference_solve: need at least two output points");
  const Interval& iv = a.interval();
  SampledSolution sol{iv, lobatto_points(out_degree, iv), {}, 0.0, true};
  // Local error control at tol / 10 keeps the accumulated global error near tol.
  const double local = tol / 10;
  sol.states = integrate(a, v, local, sol.times);
  const auto half = integrate(a, v, local / 2, sol.times);
  for (std::size_t k = 0; k < half.size(); ++k)
    sol.achieved_tol = std::max(sol.achieved_tol, (half[k] - sol.states[k]).norm());
  sol.states = half;
  return sol;
}

SampledSolution closed_form_commuting(const Eigen::MatrixXcd& b, const ChebSeries& a_fn, const Eigen::VectorXcd& v,
                                      const std::vector<double>& times) {
  if (b.rows() != b.cols() || b.rows() != v.size()) throw DimensionError("closed_form_commuting: shape mismatch");
  if ((b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff()))
    throw DomainError("closed_form_commuting: B is not Hermitian");
  const Interval& iv = a_fn.interval();
  const ChebSeries big_f = a_fn.antiderivative(iv.lo());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b);
  const Eigen::MatrixXcd& u = es.eigenvectors();
  const Eigen::VectorXcd w = u.adjoint() * v;
  SampledSolution sol{iv, times, {}, 0.0, false};
  for (double t : times) {
    const cplx f = big_f(t);
    Eigen::VectorXcd e(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) e(i) = std::exp(f * es.eigenvalues()(i)) * w(i);
    sol.states.push_back(u * e);
  }
  if (times.size() >= 2) sol.lobatto = times == lobatto_points(times.size() - 1, iv);
  return sol;
}

}  // namespace starpoly
