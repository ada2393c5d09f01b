#ifndef SUBORD_CONVDERIV_HPP
#define SUBORD_CONVDERIV_HPP

// Convolution-type derivatives with respect to a Bernstein function f:
//
//   Caputo-Djrbashian  D u(t) = b u'(t) + int_0^t u'(t - s) nu(s) ds
//   Riemann-Liouville  DD u(t) = D u(t) + nu(t) u(0)
//
// The integral is split at t/2. Each half is covered by geometrically graded cells
// towards its singular end (nu may blow up at s = 0, u' may blow up at t - s = 0),
// with Gauss-Legendre inside each cell. The innermost cell on each side uses a
// product rule: u'(t - h/2) * int_0^h nu on the left, nu(t - h/2) (u(h) - u(0)) on
// the right.
//
// Curves are templated on their value type, so a std::valarray<double> curve
// evaluates a whole family (all x of a pmf lattice, say) on one set of nodes.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <valarray>

#include "subord/bernstein.hpp"
#include "subord/errors.hpp"
#include "subord/gamma.hpp"
#include "subord/quadrature.hpp"

namespace subord {

template <class V = double>
struct DifferentiableCurve {
  std::function<V(double)> value;
  // Empty means central differences of `value` (lower accuracy).
  std::function<V(double)> derivative;
  V value_at_zero{};
  // Right end T of the interval the curve is defined on.
  double horizon = std::numeric_limits<double>::infinity();
};

struct QuadratureSpec {
  int n_cells = 32;              // graded cells on each side of t/2
  double grading_exponent = 2.0; // ratio between neighbouring cell widths
  int order = 8;                 // Gauss-Legendre points per cell
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;

  void validate() const {
    if (n_cells < 1) throw std::invalid_argument("QuadratureSpec: n_cells must be >= 1");
    if (!(grading_exponent > 1.0)) throw std::invalid_argument("QuadratureSpec: grading_exponent must be > 1");
    if (order < 1 || order > 64) throw std::invalid_argument("QuadratureSpec: order must lie in [1, 64]");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: tolerances must be > 0");
  }
};

namespace detail {

template <class V>
V zero_like(const V& v) {
  if constexpr (std::is_arithmetic_v<V>) {
    return V{};
  } else {
    V z(v);
    z = 0.0;
    return z;
  }
}

template <class V>
V curve_derivative(const DifferentiableCurve<V>& u, double t) {
  if (u.derivative) return u.derivative(t);
  const double horizon = std::isfinite(u.horizon) ? u.horizon : 1.0;
  const double h = std::max(1e-6, 1e-8 * horizon);
  if (t > h) return V((u.value(t + h) - u.value(t - h)) / (2.0 * h));
  // One-sided second-order stencil near 0.
  return V((-3.0 * u.value(t) + 4.0 * u.value(t + h) - u.value(t + 2.0 * h)) / (2.0 * h));
}

// Rejects tails that are not integrable at 0 by checking that s * nu(s) -> 0.
inline void check_tail_integrable(const BernsteinFunction& f) {
  const double a = 1e-10 * f.tail(1e-10), b = 1e-6 * f.tail(1e-6);
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b || a < 1e-9))
    throw integrability_error("convolution derivative: tail nu(s) is not integrable at s = 0");
}

}  // namespace detail

/// int_0^t u'(t - s) nu(s) ds, without the drift term.
template <class V>
V convolution_integral(const DifferentiableCurve<V>& u, const BernsteinFunction& f, double t, const QuadratureSpec& q) {
  const auto& gl = quad::gauss_legendre(q.order);
  const double half = 0.5 * t;
  const double r = q.grading_exponent;
  V sum = detail::zero_like(u.value_at_zero);

  auto cell = [&](double lo, double hi, auto&& g) {
    const double c = 0.5 * (lo + hi), w = 0.5 * (hi - lo);
    for (int i = 0; i < q.order; ++i) sum += (w * gl.weights[i]) * g(c + w * gl.nodes[i]);
  };
  // Left half, s in [0, t/2]: graded towards s = 0.
  auto left = [&](double s) { return V(detail::curve_derivative(u, t - s) * f.tail(s)); };
  // Right half in sigma = t - s in [0, t/2]: graded towards sigma = 0.
  auto right = [&](double sigma) { return V(detail::curve_derivative(u, sigma) * f.tail(t - sigma)); };

  double hi = half;
  for (int j = 0; j < q.n_cells; ++j) {
    const double lo = hi / r;
    cell(lo, hi, left);
    cell(lo, hi, right);
    hi = lo;
  }
  const double h = hi;
  sum += V(detail::curve_derivative(u, t - 0.5 * h) * f.tail_integral(h));
  sum += V((u.value(h) - u.value_at_zero) * f.tail(t - 0.5 * h));
  return sum;
}

/// Generalized Caputo-Djrbashian derivative b u'(t) + int_0^t u'(t - s) nu(s) ds.
template <class V>
V cd_derivative(const DifferentiableCurve<V>& u, const BernsteinFunction& f, double t, const QuadratureSpec& q = {}) {
  q.validate();
  if (!(t > 0.0)) throw std::domain_error("cd_derivative: t must be > 0");
  if (t > u.horizon) throw std::domain_error("cd_derivative: t beyond the curve's horizon");
  detail::check_tail_integrable(f);
  V out = convolution_integral(u, f, t, q);
  if (f.drift() != 0.0) out += V(f.drift() * detail::curve_derivative(u, t));
  return out;
}

/// Generalized Riemann-Liouville derivative, through DD u = D u + nu(t) u(0).
template <class V>
V rl_derivative(const DifferentiableCurve<V>& u, const BernsteinFunction& f, double t, const QuadratureSpec& q = {}) {
  const double nu_t = f.tail(t);
  if (!std::isfinite(nu_t)) throw std::domain_error("rl_derivative: nu(t) is not finite");
  V out = cd_derivative(u, f, t, q);
  out += V(nu_t * u.value_at_zero);
  return out;
}

/// Classical Caputo derivative (1/Gamma(1-a)) int_0^t u'(s) (t - s)^{-a} ds, by
/// Gauss-Legendre on [0, t/2] and Gauss-Jacobi (weight (t-s)^{-a}) on [t/2, t].
template <class V>
V caputo_derivative(const DifferentiableCurve<V>& u, double alpha, double t, const QuadratureSpec& q = {}) {
  q.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("caputo_derivative: alpha must lie in (0, 1)");
  if (!(t > 0.0)) throw std::domain_error("caputo_derivative: t must be > 0");
  const int n = std::max(24, 3 * q.order);
  const auto& gl = quad::gauss_legendre(n);
  const quad::Rule gj = quad::gauss_jacobi(n, -alpha, 0.0);
  const double half = 0.5 * t;
  V sum = detail::zero_like(u.value_at_zero);
  // [0, t/2]: smooth kernel.
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * half * (gl.nodes[i] + 1.0);
    sum += (0.5 * half * gl.weights[i] * std::pow(t - s, -alpha)) * detail::curve_derivative(u, s);
  }
  // [t/2, t]: s = 3t/4 + (t/4) x, t - s = (t/4)(1 - x).
  const double scale = std::pow(0.25 * t, 1.0 - alpha);
  for (int i = 0; i < n; ++i) {
    const double s = 0.75 * t + 0.25 * t * gj.nodes[i];
    sum += (scale * gj.weights[i]) * detail::curve_derivative(u, s);
  }
  return V(sum / gamma_fn(1.0 - alpha));
}

/// Exponential growth bound |u(t)|, |u'(t)| <= constant * e^{rate t}.
struct GrowthBound {
  double constant = 1.0;
  double rate = 0.0;
};

struct LaplaceIdentityResult {
  double residual = 0.0;
  double transform_of_derivative = 0.0;  // int_0^T e^{-st} D u(t) dt
  double right_side = 0.0;               // f(s) int_0^T e^{-st} u dt - f(s)/s u(0)
  double tail_bound = 0.0;               // bound on the neglected [T, inf) parts
  double horizon = 0.0;                  // T actually used
  bool truncation_sufficient = true;
};

/// Residual of L[D u](s) = f(s) L[u](s) - (f(s)/s) u(0), both sides integrated on [0, T].
/// With T <= 0 the horizon is chosen so that the tail bound falls below q.abs_tol.
inline LaplaceIdentityResult laplace_identity_residual(const DifferentiableCurve<double>& u, const BernsteinFunction& f,
                                                       double s, double T, const GrowthBound& growth = {},
                                                       const QuadratureSpec& q = {}) {
  q.validate();
  const double c = s - growth.rate;
  if (!(c > 0.0)) throw std::domain_error("laplace_identity_residual: s must exceed the growth rate");
  const double fs = f(s);
  // |D u(t)| <= M e^{rate t} (b + N(t)) and N(t) <= N(T) + nu(T) (t - T) for t >= T.
  auto bound = [&](double horizon) {
    const double e = std::exp(-c * horizon) * growth.constant;
    const double lhs = e * ((f.drift() + f.tail_integral(horizon)) / c + f.tail(horizon) / (c * c));
    const double rhs = e * fs / c;
    return lhs + rhs;
  };
  if (!(T > 0.0)) {
    T = 1.0 / c;
    while (bound(T) > q.abs_tol && T < 1e6) T *= 1.25;
  }
  LaplaceIdentityResult out;
  out.horizon = T;
  out.tail_bound = bound(T);
  out.truncation_sufficient = out.tail_bound <= q.abs_tol;
  auto lhs = [&](double t) { return t <= 0.0 ? 0.0 : std::exp(-s * t) * cd_derivative(u, f, t, q); };
  auto rhs = [&](double t) { return std::exp(-s * t) * u.value(t); };
  // Tanh-sinh clusters nodes at both ends, where D u may behave like t^{-alpha}.
  out.transform_of_derivative = quad::tanh_sinh(lhs, 0.0, T, q.rel_tol, q.abs_tol).value;
  out.right_side = fs * quad::tanh_sinh(rhs, 0.0, T, q.rel_tol, q.abs_tol).value - fs / s * u.value_at_zero;
  out.residual = std::fabs(out.transform_of_derivative - out.right_side);
  return out;
}

}  // namespace subord

#endif  // SUBORD_CONVDERIV_HPP
