#ifndef SUBORD_SKELLAM_TC_HPP
#define SUBORD_SKELLAM_TC_HPP

// Time-changed Skellam process S(Y(t)) = N1(Y(t)) - N2(Y(t)).
// pmf vectors are indexed by k + K for k in [-K, K].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <valarray>
#include <vector>

#include "subord/convderiv.hpp"
#include "subord/inverse_subordinator.hpp"
#include "subord/parallel.hpp"
#include "subord/poisson_tc.hpp"
#include "subord/residual_report.hpp"
#include "subord/special_functions.hpp"

namespace subord {

struct SkellamParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;

  void validate() const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2))
      throw std::invalid_argument("SkellamParams: both rates must be finite and > 0");
  }
  /// Laplace exponent of S at -theta: lambda1 (1 - e^theta) + lambda2 (1 - e^{-theta}).
  double exponent(double theta) const { return -lambda1 * std::expm1(theta) - lambda2 * std::expm1(-theta); }
};

/// s_k(t) = e^{-t(l1+l2)} (l1/l2)^{k/2} I_|k|(2t sqrt(l1 l2)), in log space.
inline double skellam_pmf(const SkellamParams& p, long k, double t) {
  p.validate();
  if (t < 0.0) throw std::domain_error("skellam_pmf: t must be >= 0");
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  const double z = 2.0 * t * std::sqrt(p.lambda1 * p.lambda2);
  const double s1 = std::sqrt(p.lambda1), s2 = std::sqrt(p.lambda2);
  const double lg = -t * (s1 - s2) * (s1 - s2) + 0.5 * static_cast<double>(k) * std::log(p.lambda1 / p.lambda2) +
                    log_bessel_i_scaled(static_cast<int>(std::labs(k)), z);
  return std::exp(lg);
}

namespace detail {

// (s_{-K}(u), ..., s_K(u)).
inline std::valarray<double> skellam_vector(const SkellamParams& p, long kmax, double u) {
  const std::size_t n = static_cast<std::size_t>(2 * kmax + 1);
  std::valarray<double> out(0.0, n);
  if (u <= 0.0) {
    out[static_cast<std::size_t>(kmax)] = 1.0;
    return out;
  }
  const double s1 = std::sqrt(p.lambda1), s2 = std::sqrt(p.lambda2);
  const double z = 2.0 * u * s1 * s2;
  const double base = -u * (s1 - s2) * (s1 - s2);
  const double half_log_ratio = 0.5 * std::log(p.lambda1 / p.lambda2);
  const auto li = log_bessel_i_scaled_sequence(static_cast<int>(kmax), z);
  for (long k = -kmax; k <= kmax; ++k)
    out[static_cast<std::size_t>(k + kmax)] = std::exp(base + k * half_log_ratio + li[static_cast<std::size_t>(std::labs(k))]);
  return out;
}

inline long max_abs_index(const std::vector<int>& ks) {
  if (ks.empty()) throw std::invalid_argument("empty lattice of states");
  long m = 0;
  for (int k : ks) m = std::max<long>(m, std::labs(k));
  return m;
}

inline std::string k_label(long k) { return "k=" + std::to_string(k); }

}  // namespace detail

/// (r_{-K}(t), ..., r_K(t)) on a given master grid.
inline std::valarray<double> pmf_vector(const SkellamParams& p, long kmax, const MixtureGrid& grid) {
  return grid.integrate([&](double u) { return detail::skellam_vector(p, kmax, u); });
}

inline std::valarray<double> pmf_vector(const SkellamParams& p, const InverseSubordinatorLaw& law, long kmax, double t) {
  p.validate();
  if (kmax < 0) throw std::domain_error("pmf: K must be >= 0");
  if (t == 0.0) return detail::skellam_vector(p, kmax, 0.0);
  return pmf_vector(p, kmax, law.master_grid(t));
}

/// r_k(t) = int s_k(u) l(t,u) du.
inline double pmf(const SkellamParams& p, const InverseSubordinatorLaw& law, long k, double t) {
  const long K = std::labs(k);
  return pmf_vector(p, law, K, t)[static_cast<std::size_t>(k + K)];
}

/// Smallest K with both Poisson tails at means lambda_i u_max below eps.
inline long k_cutoff(const SkellamParams& p, const TruncationCertificate& c, double eps = 1e-8) {
  return std::max(poisson_cutoff(p.lambda1 * c.u_max, eps), poisson_cutoff(p.lambda2 * c.u_max, eps));
}

struct SkellamNormalizationAudit {
  double t = 0.0;
  long cutoff = 0;
  double sum = 0.0;
  double state_tail = 0.0;  // bound on P(|S| > K | Y <= u_max)
  double truncation = 0.0;
  TruncationCertificate certificate;
};

inline SkellamNormalizationAudit normalization(const SkellamParams& p, const InverseSubordinatorLaw& law, double t,
                                               double eps = 1e-8) {
  SkellamNormalizationAudit a;
  a.t = t;
  const MixtureGrid grid = law.master_grid(t);
  a.certificate = grid.certificate;
  a.cutoff = k_cutoff(p, grid.certificate, eps);
  a.sum = pmf_vector(p, a.cutoff, grid).sum();
  a.state_tail = poisson_upper_tail(a.cutoff + 1, p.lambda1 * grid.certificate.u_max) +
                 poisson_upper_tail(a.cutoff + 1, p.lambda2 * grid.certificate.u_max);
  a.truncation = grid.certificate.bound;
  return a;
}

/// D_t r_k = lambda1 (r_{k-1} - r_k) - lambda2 (r_k - r_{k+1}), r_k(0) = 1{k=0}.
inline ResidualReport residual_governing(const SkellamParams& p, const InverseSubordinatorLaw& law,
                                         const std::vector<int>& ks, const std::vector<double>& t_grid,
                                         const ResidualOptions& opt = {}) {
  p.validate();
  const long K = detail::max_abs_index(ks) + 1;
  DifferentiableCurve<std::valarray<double>> curve;
  curve.value = [&](double t) { return pmf_vector(p, law, K, t); };
  curve.derivative = [&](double t) {
    const MixtureGrid g = law.master_grid(t);
    return g.integrate_dt([&](double u) { return detail::skellam_vector(p, K, u); });
  };
  curve.value_at_zero = detail::skellam_vector(p, K, 0.0);
  struct Row {
    std::valarray<double> lhs, r;
  };
  const auto rows = parallel_map<Row>(t_grid.size(), detail::workers_or_default(opt.workers), [&](std::size_t i) {
    return Row{cd_derivative(curve, law.bernstein(), t_grid[i], opt.quadrature), pmf_vector(p, law, K, t_grid[i])};
  });
  ResidualReport rep;
  rep.equation = "skellam_system";
  rep.tolerance = opt.tolerance;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto& r = rows[i].r;
    for (int k : ks) {
      const std::size_t j = static_cast<std::size_t>(k + K);
      const double rhs = p.lambda1 * (r[j - 1] - r[j]) - p.lambda2 * (r[j] - r[j + 1]);
      rep.add(t_grid[i], detail::k_label(k), rows[i].lhs[j], rhs);
    }
  }
  return rep;
}

/// Closed hull of {0, ln(lambda2/lambda1)}: the thetas with a non-negative transform argument.
inline std::pair<double, double> admissible_theta_interval(const SkellamParams& p) {
  p.validate();
  const double r = std::log(p.lambda2 / p.lambda1);
  return {std::min(0.0, r), std::max(0.0, r)};
}

/// n equally spaced thetas covering the admissible interval shrunk by 10% about its centre.
inline std::vector<double> default_theta_grid(const SkellamParams& p, int n = 5) {
  const auto [a, b] = admissible_theta_interval(p);
  const double c = 0.5 * (a + b), h = 0.45 * (b - a);
  std::vector<double> out;
  if (n <= 1 || h == 0.0) return {c};
  for (int i = 0; i < n; ++i) out.push_back(c - h + 2.0 * h * i / (n - 1));
  return out;
}

namespace detail {

inline double skellam_mgf_argument(const SkellamParams& p, double theta) {
  p.validate();
  const auto [a, b] = admissible_theta_interval(p);
  if (theta < a || theta > b)
    throw std::domain_error("skellam mgf: theta=" + std::to_string(theta) + " lies outside the admissible interval [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
  return std::max(0.0, p.exponent(theta));
}

}  // namespace detail

/// L(theta, t) = l~(t, lambda1 + lambda2 - lambda1 e^theta - lambda2 e^{-theta}).
inline double mgf(const SkellamParams& p, const InverseSubordinatorLaw& law, double theta, double t) {
  const double arg = detail::skellam_mgf_argument(p, theta);
  if (t < 0.0) throw std::domain_error("mgf: t must be >= 0");
  return law.laplace(t, arg);
}

/// D_t L = [lambda1 (e^theta - 1) + lambda2 (e^{-theta} - 1)] L.
inline ResidualReport residual_mgf(const SkellamParams& p, const InverseSubordinatorLaw& law,
                                   const std::vector<double>& thetas, const std::vector<double>& t_grid,
                                   const ResidualOptions& opt = {}) {
  ResidualReport rep;
  rep.equation = "skellam_mgf";
  rep.tolerance = opt.tolerance;
  for (double theta : thetas) {
    const double arg = detail::skellam_mgf_argument(p, theta);
    DifferentiableCurve<double> curve;
    curve.value = [&law, arg](double t) { return law.laplace_fast(t, arg); };
    curve.derivative = [&law, arg](double t) { return law.laplace_dt(t, arg); };
    curve.value_at_zero = 1.0;
    const auto lhs = parallel_map<double>(t_grid.size(), detail::workers_or_default(opt.workers), [&](std::size_t i) {
      return arg == 0.0 ? 0.0 : cd_derivative(curve, law.bernstein(), t_grid[i], opt.quadrature);
    });
    for (std::size_t i = 0; i < t_grid.size(); ++i)
      rep.add(t_grid[i], "theta=" + std::to_string(theta), lhs[i], -arg * law.laplace_fast(t_grid[i], arg));
  }
  return rep;
}

}  // namespace subord

#endif  // SUBORD_SKELLAM_TC_HPP
