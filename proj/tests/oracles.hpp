#ifndef SUBORD_TESTS_ORACLES_HPP
#define SUBORD_TESTS_ORACLES_HPP

// Reference values computed independently of the library: Boost.Math special
// functions and quadrature, and multiprecision series.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

/// E_alpha(-x) from the power series in 100-digit arithmetic. Only for moderate
/// x^{1/alpha}, where the cancellation stays well inside the working precision.
inline double ml_series(double alpha, double x) {
  const big z = -big(x);
  big sum = 0, zn = 1;
  for (int n = 0; n < 4000; ++n) {
    const big term = zn / boost::math::tgamma(big(alpha) * n + 1);
    sum += term;
    if (n > 10 && abs(term) < big("1e-60")) break;
    zn *= z;
  }
  return static_cast<double>(sum);
}

/// E_alpha(-x) as the Laplace transform of its spectral density, by Boost quadrature.
inline double ml_integral(double alpha, double x) {
  const long double a = alpha, pi = std::numbers::pi_v<long double>;
  const long double tau = std::pow(static_cast<long double>(x), 1.0L / a);
  auto kernel = [&](long double r) -> long double {
    const long double ra = std::pow(r, a);
    return std::sin(pi * a) * std::pow(r, a - 1) / (pi * (ra * ra + 2 * ra * std::cos(pi * a) + 1)) * std::exp(-r * tau);
  };
  boost::math::quadrature::exp_sinh<long double> es;
  return static_cast<double>(es.integrate(kernel, 0.0L, std::numeric_limits<long double>::infinity(), 1e-15L));
}

/// E_alpha(-x), x >= 0, alpha in (0, 1].
inline double mittag_leffler(double alpha, double x) {
  if (x == 0.0) return 1.0;
  if (alpha == 1.0) return std::exp(-x);
  if (alpha == 0.5) {
    const long double xl = x;
    return static_cast<double>(std::exp(xl * xl) * boost::math::erfc(xl));
  }
  if (std::pow(x, 1.0 / alpha) <= 60.0) return ml_series(alpha, x);
  return ml_integral(alpha, x);
}

/// E Y(t)^k for the inverse alpha-stable subordinator: k! t^{k alpha} / Gamma(1 + k alpha).
inline double stable_inverse_moment(double alpha, double t, int k) {
  return boost::math::tgamma(k + 1.0) * std::pow(t, k * alpha) / boost::math::tgamma(1.0 + k * alpha);
}

/// Density of the inverse 1/2-stable subordinator, (pi t)^{-1/2} e^{-u^2/(4t)}.
inline double half_stable_density(double t, double u) {
  return std::exp(-u * u / (4.0 * t)) / std::sqrt(std::numbers::pi * t);
}

/// Density of the inverse alpha-stable subordinator from Zolotarev's integral
/// representation of the one-sided stable law:
///   l(t,u) = (t/alpha) u^{-1-1/alpha} g(t u^{-1/alpha}),
///   g(x) = alpha/((1-alpha) pi) x^{-1/(1-alpha)} int_0^pi A(p) exp(-x^{-alpha/(1-alpha)} A(p)) dp,
///   A(p) = (sin(alpha p)/sin p)^{1/(1-alpha)} sin((1-alpha)p)/sin(alpha p).
inline double stable_inverse_density(double alpha, double t, double u) {
  const long double a = alpha;
  const long double x = t * std::pow(static_cast<long double>(u), -1.0L / a);
  const long double c = std::pow(x, -a / (1 - a));
  auto integrand = [&](long double p) -> long double {
    const long double A = std::pow(std::sin(a * p) / std::sin(p), 1 / (1 - a)) * std::sin((1 - a) * p) / std::sin(a * p);
    if (!std::isfinite(static_cast<double>(A))) return 0.0L;
    return A * std::exp(-c * A);
  };
  const long double pi = std::numbers::pi_v<long double>;
  const long double I = boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(integrand, 0.0L, pi, 20, 1e-15L);
  const long double g = a / ((1 - a) * pi) * std::pow(x, -1 / (1 - a)) * I;
  return static_cast<double>(t / a * std::pow(static_cast<long double>(u), -1 - 1 / a) * g);
}

}  // namespace oracle

#endif  // SUBORD_TESTS_ORACLES_HPP
