#ifndef SUBORD_SPECIAL_FUNCTIONS_HPP
#define SUBORD_SPECIAL_FUNCTIONS_HPP

// Mittag-Leffler function on the non-positive real axis, modified Bessel
// functions of the first kind for integer order, and Stirling numbers of the
// second kind.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "subord/gamma.hpp"
#include "subord/quadrature.hpp"

namespace subord {

struct SeriesPolicy {
  int max_terms = 2000;
  double abs_tol = 1e-16;
  // Mittag-Leffler: |z| above which the integral representation replaces the series.
  double switch_radius = 1.0;

  void validate() const {
    if (max_terms < 1) throw std::invalid_argument("SeriesPolicy: max_terms must be >= 1");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("SeriesPolicy: abs_tol must be > 0");
    if (!(switch_radius >= 0.0)) throw std::invalid_argument("SeriesPolicy: switch_radius must be >= 0");
  }
};

namespace detail {

// E_alpha(-x) = int_0^inf e^{-r t} K(r) dr with t = x^{1/alpha} and
// K(r) = sin(pi a) r^{a-1} / (pi (r^{2a} + 2 r^a cos(pi a) + 1)).
// Substituting r = rho / t gives int_0^inf e^{-rho} K(rho / t) / t drho.
inline double mittag_leffler_integral(double alpha, double x) {
  const double t = std::pow(x, 1.0 / alpha);
  const double sa = std::sin(std::numbers::pi * alpha);
  const double ca = std::cos(std::numbers::pi * alpha);
  auto kernel = [&](double rho) {
    if (rho <= 0.0) return 0.0;
    const double r = rho / t;
    const double ra = std::pow(r, alpha);
    const double den = ra * ra + 2.0 * ra * ca + 1.0;
    return std::exp(-rho) * sa * ra / (r * std::numbers::pi * den) / t;
  };
  // K peaks at r^a = -cos(pi a) when alpha > 1/2; put a breakpoint there.
  double peak = 0.0;
  if (ca < 0.0) peak = t * std::pow(-ca, 1.0 / alpha);
  constexpr double rho_end = 60.0;
  double sum = 0.0;
  if (peak > 0.0 && peak < rho_end) {
    const double width = std::max(1e-3 * peak, std::min(0.5 * peak, 4.0 * sa * peak));
    const double p0 = peak - width, p1 = std::min(peak + width, rho_end);
    sum += quad::tanh_sinh(kernel, 0.0, p0, 1e-14).value;
    sum += quad::gauss_kronrod(kernel, p0, peak, 1e-14, 1e-18).value;
    sum += quad::gauss_kronrod(kernel, peak, p1, 1e-14, 1e-18).value;
    if (p1 < rho_end) sum += quad::gauss_kronrod(kernel, p1, rho_end, 1e-14, 1e-18).value;
  } else {
    const double split = std::min(1.0, rho_end);
    sum += quad::tanh_sinh(kernel, 0.0, split, 1e-14).value;
    sum += quad::gauss_kronrod(kernel, split, rho_end, 1e-14, 1e-18).value;
  }
  return sum;
}

}  // namespace detail

/// One-parameter Mittag-Leffler function E_alpha(z) for alpha in (0, 1] and z <= 0.
inline double mittag_leffler(double alpha, double z, const SeriesPolicy& policy = {}) {
  policy.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("mittag_leffler: alpha must lie in (0, 1]");
  if (!(z <= 0.0)) throw std::domain_error("mittag_leffler: only z <= 0 is supported");
  if (z == 0.0) return 1.0;
  if (alpha == 1.0) return std::exp(z);
  const double x = -z;
  if (x > policy.switch_radius) return detail::mittag_leffler_integral(alpha, x);
  double sum = 1.0;
  const double lx = std::log(x);
  for (int n = 1; n < policy.max_terms; ++n) {
    const double mag = std::exp(n * lx - log_gamma(alpha * n + 1.0));
    sum += (n % 2 == 0) ? mag : -mag;
    if (mag < policy.abs_tol && n > 2) break;
  }
  return sum;
}

/// log(e^{-z} I_k(z)) for integer k and z > 0.
///
/// Sums the power series outward from its largest term, so the result is accurate
/// to rounding for any z and k without overflow or underflow.
inline double log_bessel_i_scaled(int k, double z) {
  if (k < 0) k = -k;
  if (!(z > 0.0)) throw std::domain_error("log_bessel_i_scaled: z must be > 0");
  const double q = 0.25 * z * z;  // (z/2)^2
  // Largest term where (n+1)(n+k+1) ~ q.
  const double kk = k;
  long peak = static_cast<long>(std::floor(0.5 * (-(kk + 2.0) + std::sqrt(kk * kk + 4.0 * q))));
  if (peak < 0) peak = 0;
  const double log_peak = (2.0 * peak + kk) * std::log(0.5 * z) - log_gamma(peak + 1.0) -
                          log_gamma(peak + kk + 1.0) - z;
  double sum = 1.0;
  double term = 1.0;
  for (long n = peak; n < peak + 100000; ++n) {
    term *= q / ((n + 1.0) * (n + kk + 1.0));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  term = 1.0;
  for (long n = peak; n > 0; --n) {
    term *= (static_cast<double>(n) * (n + kk)) / q;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return log_peak + std::log(sum);
}

/// e^{-z} I_k(z) for integer k and z >= 0.
inline double bessel_i_scaled(int k, double z) {
  if (z < 0.0) throw std::domain_error("bessel_i_scaled: z must be >= 0");
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(log_bessel_i_scaled(k, z));
}

/// log(e^{-z} I_k(z)) for k = 0..kmax at once: I_0 from the series, then the ratios
/// I_k / I_{k-1} from the backward continued-fraction recurrence.
inline std::vector<double> log_bessel_i_scaled_sequence(int kmax, double z) {
  if (kmax < 0) throw std::domain_error("log_bessel_i_scaled_sequence: kmax must be >= 0");
  if (!(z > 0.0)) throw std::domain_error("log_bessel_i_scaled_sequence: z must be > 0");
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
  out[0] = log_bessel_i_scaled(0, z);
  if (kmax == 0) return out;
  const long start = kmax + 40 + static_cast<long>(std::ceil(std::sqrt(40.0 * (z + kmax))));
  std::vector<double> ratio(static_cast<std::size_t>(kmax) + 1);
  double r = 0.0;
  for (long j = start; j >= 1; --j) {
    r = 1.0 / (2.0 * j / z + r);
    if (j <= kmax) ratio[static_cast<std::size_t>(j)] = r;
  }
  for (int j = 1; j <= kmax; ++j) out[j] = out[j - 1] + std::log(ratio[j]);
  return out;
}

struct BesselValue {
  double value = 0.0;
  // true when `value` holds e^{-z} I_k(z) because I_k(z) itself would overflow.
  bool exponent_scaled = false;
};

inline constexpr double bessel_overflow_threshold = 700.0;

/// Modified Bessel function I_k(z), integer k (I_{-k} = I_k), z >= 0.
inline BesselValue bessel_i(int k, double z, const SeriesPolicy& policy = {}) {
  policy.validate();
  if (z < 0.0) throw std::domain_error("bessel_i: z must be >= 0");
  const double s = bessel_i_scaled(k, z);
  if (z > bessel_overflow_threshold) return {s, true};
  return {s * std::exp(z), false};
}

/// Stirling number of the second kind, S(k, i) = (1/i!) sum_j (-1)^{i-j} C(i,j) j^k,
/// evaluated exactly in 128-bit integer arithmetic. Supports 1 <= i <= k <= 20.
inline std::int64_t stirling2(int k, int i) {
  if (k < 1 || i < 1 || i > k) throw std::domain_error("stirling2: requires 1 <= i <= k");
  if (k > 20) throw std::domain_error("stirling2: k > 20 exceeds exact 128-bit range");
  __int128 sum = 0;
  __int128 binom = 1;  // C(i, j)
  for (int j = 0; j <= i; ++j) {
    if (j > 0) binom = binom * (i - j + 1) / j;
    __int128 pw = (j == 0) ? 0 : 1;
    for (int e = 0; e < k && j > 0; ++e) pw *= j;
    const __int128 term = binom * pw;
    sum += ((i - j) % 2 == 0) ? term : -term;
  }
  __int128 fact = 1;
  for (int j = 2; j <= i; ++j) fact *= j;
  return static_cast<std::int64_t>(sum / fact);
}

}  // namespace subord

#endif  // SUBORD_SPECIAL_FUNCTIONS_HPP
