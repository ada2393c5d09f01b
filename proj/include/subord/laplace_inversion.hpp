#ifndef SUBORD_LAPLACE_INVERSION_HPP
#define SUBORD_LAPLACE_INVERSION_HPP

// Numerical Laplace inversion by two independent routes:
//
//  * contour: trapezoidal rule on a hyperbolic deformation of the Bromwich line,
//    s(theta) = mu (1 + sin(i theta - delta)). The asymptotic opening angle
//    pi/2 + delta is kept below the transform's growth angle, so factors such as
//    e^{-u f(s)} with f(s) ~ s^alpha, alpha > 1/2, stay bounded on the path;
//  * accelerated_real: Gaver functionals with Stehfest acceleration on the
//    positive real axis, evaluated in extended precision. The usable order is
//    bounded by the precision of the transform evaluator (about 1.1 x digits).
//
// The two routes fail in unrelated ways, so their agreement is the error estimate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "subord/errors.hpp"
#include "subord/extended.hpp"

namespace subord {

struct TransformFunction {
  std::function<std::complex<double>(std::complex<double>)> contour;
  std::function<extended(extended)> real;
  // Every singularity of the transform has real part <= this abscissa.
  double singularity_abscissa = 0.0;
  // The transform stays bounded on rays |arg s| <= max_angle (at most pi).
  double max_angle = std::numbers::pi;
  // Significant digits delivered by `real`.
  int real_digits = extended_digits;
};

enum class InversionMethod { contour, accelerated_real };

struct InversionPolicy {
  // Contour nodes; 0 picks the smallest count that reaches `contour_accuracy`.
  int contour_order = 0;
  double contour_accuracy = 1e-14;
  // Capped per transform by stehfest_order_for_digits.
  int real_order = 36;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  bool cross_check = true;

  void validate() const {
    if (contour_order < 0) throw std::invalid_argument("InversionPolicy: contour_order must be >= 0");
    if (!(contour_accuracy > 0.0 && contour_accuracy < 1e-3))
      throw std::invalid_argument("InversionPolicy: contour_accuracy must lie in (0, 1e-3)");
    if (real_order < 2 || real_order % 2 != 0 || real_order > 40)
      throw std::invalid_argument("InversionPolicy: real_order must be even in [2, 40]");
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0)) throw std::invalid_argument("InversionPolicy: bad tolerances");
  }
};

/// Highest Stehfest order that the given evaluator precision supports.
inline int stehfest_order_for_digits(int digits) {
  int n = static_cast<int>(1.1 * digits);
  if (n % 2 != 0) --n;
  return std::clamp(n, 8, 36);
}

struct HyperbolaParameters {
  double mu_t = 0.0;  // mu * t
  double step = 0.0;  // theta spacing
  double delta = 0.0;
  int nodes = 0;      // theta = 0, h, ..., nodes * h
};

namespace detail {

// Error model (Weideman-Trefethen): discretisation ~ exp(mu_t (1 - sin(delta - d)) - 2 pi d / h),
// truncation ~ exp(mu_t (1 - sin(delta) cosh(N h))). Both are set to exp(log_eps) and N is
// minimised over mu_t.
inline HyperbolaParameters hyperbola_for_accuracy(double max_angle, double log_eps) {
  const double delta = 0.5 * (std::min(max_angle, std::numbers::pi) - 0.5 * std::numbers::pi);
  if (!(delta > 0.0)) throw std::domain_error("contour: growth angle must exceed pi/2");
  const double d = 0.9 * delta;
  const double lift = 1.0 - std::sin(delta - d);
  HyperbolaParameters best;
  double best_n = std::numeric_limits<double>::infinity();
  for (double mt = 0.25; mt < 400.0; mt *= 1.02) {
    const double n =
        std::acosh((mt - log_eps) / (mt * std::sin(delta))) * (mt * lift - log_eps) / (2.0 * std::numbers::pi * d);
    if (n < best_n) {
      best_n = n;
      best.mu_t = mt;
    }
  }
  best.delta = delta;
  best.step = 2.0 * std::numbers::pi * d / (best.mu_t * lift - log_eps);
  best.nodes = static_cast<int>(std::ceil(best_n));
  return best;
}

}  // namespace detail

/// Contour parameters: for order == 0 the cheapest set reaching `accuracy`; otherwise
/// the most accurate set that fits in `order` nodes.
inline HyperbolaParameters hyperbola_parameters(double max_angle, int order = 0, double accuracy = 1e-14) {
  if (order == 0) return detail::hyperbola_for_accuracy(max_angle, std::log(accuracy));
  if (order < 4) throw std::invalid_argument("contour: order must be >= 4");
  double lo = -40.0, hi = -1.0;  // log-accuracy bracket: lo too demanding, hi attainable
  if (detail::hyperbola_for_accuracy(max_angle, hi).nodes > order) return detail::hyperbola_for_accuracy(max_angle, hi);
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::hyperbola_for_accuracy(max_angle, mid).nodes <= order)
      hi = mid;
    else
      lo = mid;
  }
  auto p = detail::hyperbola_for_accuracy(max_angle, hi);
  p.nodes = order;
  return p;
}

/// Quadrature nodes for one evaluation time: g(t) ~= Re sum_k weight[k] * G(node[k]).
/// Only the upper half of the contour is stored; for real originals the lower half
/// contributes the complex conjugate.
struct ContourNodes {
  double t = 0.0;
  std::vector<std::complex<double>> node;
  std::vector<std::complex<double>> weight;
};

inline ContourNodes contour_nodes(double t, const HyperbolaParameters& p, double shift = 0.0) {
  if (!(t > 0.0)) throw std::domain_error("contour_nodes: t must be > 0");
  ContourNodes c;
  c.t = t;
  c.node.reserve(p.nodes + 1);
  c.weight.reserve(p.nodes + 1);
  const double mu = p.mu_t / t;
  for (int k = 0; k <= p.nodes; ++k) {
    const std::complex<double> arg(-p.delta, k * p.step);
    const std::complex<double> s = mu * (1.0 + std::sin(arg)) + shift;
    // ds/dtheta = i mu cos(arg); with 1/(2 pi i) and the conjugate half this gives h/pi.
    const double half = (k == 0) ? 0.5 : 1.0;
    c.node.push_back(s);
    c.weight.push_back(half * p.step / std::numbers::pi * mu * std::cos(arg) * std::exp(s * t));
  }
  return c;
}

inline ContourNodes contour_nodes(double t, double max_angle = std::numbers::pi, int order = 0, double shift = 0.0,
                                  double accuracy = 1e-14) {
  return contour_nodes(t, hyperbola_parameters(max_angle, order, accuracy), shift);
}

template <class G>
double apply_nodes(const ContourNodes& c, G&& g) {
  double sum = 0.0;
  for (std::size_t k = 0; k < c.node.size(); ++k) sum += (c.weight[k] * g(c.node[k])).real();
  return sum;
}

namespace detail {

// Stehfest weights V_k, k = 1..n (n even). Every factor is an integer below 2^113,
// so the weights are exact up to the final rounding.
inline std::vector<extended> stehfest_weights(int n) {
  const int half = n / 2;
  auto fact = [](int k) {
    extended r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  auto ipow = [](int b, int e) {
    extended r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  std::vector<extended> v(n + 1, extended(0));
  for (int k = 1; k <= n; ++k) {
    extended s = 0;
    const int jlo = (k + 1) / 2;
    const int jhi = k < half ? k : half;
    for (int j = jlo; j <= jhi; ++j) {
      s += ipow(j, half) * fact(2 * j) / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    v[k] = ((half + k) % 2 == 0) ? s : -s;
  }
  return v;
}

}  // namespace detail

/// Gaver-Stehfest inversion of a real-axis transform. `order` must be even.
template <class G>
extended gaver_stehfest(G&& g, double t, int order = 14, double shift = 0.0) {
  if (!(t > 0.0)) throw std::domain_error("gaver_stehfest: t must be > 0");
  if (order < 2 || order % 2 != 0 || order > 40) throw std::invalid_argument("gaver_stehfest: order must be even in [2, 40]");
  const auto v = detail::stehfest_weights(order);
  const extended ln2t = ext_ln2() / static_cast<extended>(t);
  const extended c = shift;
  extended sum = 0;
  for (int k = 1; k <= order; ++k) sum += v[k] * g(static_cast<extended>(k) * ln2t + c);
  return ln2t * sum * ext_exp(c * static_cast<extended>(t));
}

/// Single-route inversion. For the contour route `order` is the node count (0 = automatic).
inline double invert(const TransformFunction& gh, double t, InversionMethod method, int order) {
  if (!(t > 0.0)) throw std::domain_error("invert: t must be > 0");
  const double shift = gh.singularity_abscissa > 0.0 ? gh.singularity_abscissa : 0.0;
  if (method == InversionMethod::contour) {
    if (!gh.contour) throw evaluator_domain_error("invert: transform has no complex evaluator");
    const double v = apply_nodes(contour_nodes(t, gh.max_angle, order, shift), gh.contour);
    if (!std::isfinite(v)) throw evaluator_domain_error("invert: transform not finite on the contour");
    return v;
  }
  if (!gh.real) throw evaluator_domain_error("invert: transform has no real-axis evaluator");
  const double v = static_cast<double>(gaver_stehfest(gh.real, t, order, shift));
  if (!std::isfinite(v)) throw evaluator_domain_error("invert: transform not finite on the real axis");
  return v;
}

inline double invert(const TransformFunction& gh, double t, InversionMethod method = InversionMethod::contour) {
  return invert(gh, t, method, method == InversionMethod::contour ? 0 : stehfest_order_for_digits(gh.real_digits));
}

/// Contour inversion cross-checked against the real-axis route when both evaluators
/// exist and the policy asks for it. Returns the contour value.
inline double invert_checked(const TransformFunction& gh, double t, const InversionPolicy& policy = {}) {
  policy.validate();
  if (!(t > 0.0)) throw std::domain_error("invert: t must be > 0");
  if (!gh.contour) throw evaluator_domain_error("invert: transform has no complex evaluator");
  const double shift = gh.singularity_abscissa > 0.0 ? gh.singularity_abscissa : 0.0;
  const double c = apply_nodes(contour_nodes(t, gh.max_angle, policy.contour_order, shift, policy.contour_accuracy),
                               gh.contour);
  if (!std::isfinite(c)) throw evaluator_domain_error("invert: transform not finite on the contour");
  if (!policy.cross_check || !gh.real) return c;
  const int order = std::min(policy.real_order, stehfest_order_for_digits(gh.real_digits));
  const double r = invert(gh, t, InversionMethod::accelerated_real, order);
  if (std::fabs(c - r) > policy.rel_tol * std::fabs(c) + policy.abs_tol) {
    throw inversion_disagreement("Laplace inversion routes disagree at t=" + std::to_string(t) + ": contour " +
                                     std::to_string(c) + " vs real-axis " + std::to_string(r),
                                 c, r);
  }
  return c;
}

}  // namespace subord

#endif  // SUBORD_LAPLACE_INVERSION_HPP
