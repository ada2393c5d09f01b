#ifndef SUBORD_POISSON_TC_HPP
#define SUBORD_POISSON_TC_HPP

// Time-changed Poisson counts N(Y(t)) with Y an inverse subordinator.
//
// Every u-integral of a given t runs over the law's master grid for that t, so both
// sides of a residual share the same truncation and nodes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <valarray>
#include <vector>

#include "subord/convderiv.hpp"
#include "subord/errors.hpp"
#include "subord/gamma.hpp"
#include "subord/inverse_subordinator.hpp"
#include "subord/parallel.hpp"
#include "subord/quadrature.hpp"
#include "subord/random.hpp"
#include "subord/residual_report.hpp"
#include "subord/special_functions.hpp"

namespace subord {

// ---------------------------------------------------------------------------
// Intensity

/// Rate lambda(t) >= 0 of a Poisson process with cumulative Lambda(s,t) = int_s^t lambda.
class IntensityFunction {
 public:
  enum class Kind { homogeneous, sine_squared, tabulated, custom };

  IntensityFunction() : IntensityFunction(homogeneous(1.0)) {}

  static IntensityFunction homogeneous(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("IntensityFunction: rate must be finite and >= 0");
    IntensityFunction r(Kind::homogeneous, "homogeneous(" + fmt(lambda) + ")");
    r.lambda_ = lambda;
    r.rate_ = [lambda](double) { return lambda; };
    r.cumulative_ = [lambda](double t) { return lambda * t; };
    return r;
  }

  /// lambda(t) = 1 + sin^2 t, Lambda(t) = 3t/2 - sin(2t)/4.
  static IntensityFunction one_plus_sin_squared() {
    IntensityFunction r(Kind::sine_squared, "one_plus_sin_squared");
    r.rate_ = [](double t) {
      const double s = std::sin(t);
      return 1.0 + s * s;
    };
    r.cumulative_ = [](double t) { return 1.5 * t - 0.25 * std::sin(2.0 * t); };
    return r;
  }

  /// Piecewise-linear rate through (times[i], rates[i]); times start at 0, rate is
  /// held constant after the last knot.
  static IntensityFunction tabulated(std::vector<double> times, std::vector<double> rates) {
    if (times.size() != rates.size() || times.empty())
      throw std::invalid_argument("IntensityFunction::tabulated: times and rates must be non-empty and equal in size");
    if (times.front() != 0.0) throw std::invalid_argument("IntensityFunction::tabulated: first time must be 0");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!(rates[i] >= 0.0) || !std::isfinite(rates[i]))
        throw std::invalid_argument("IntensityFunction::tabulated: rates must be finite and >= 0");
      if (i > 0 && !(times[i] > times[i - 1]))
        throw std::invalid_argument("IntensityFunction::tabulated: times must be strictly increasing");
    }
    auto tt = std::make_shared<const std::vector<double>>(std::move(times));
    auto rr = std::make_shared<const std::vector<double>>(std::move(rates));
    auto cum = std::make_shared<std::vector<double>>(tt->size(), 0.0);
    for (std::size_t i = 1; i < tt->size(); ++i)
      (*cum)[i] = (*cum)[i - 1] + 0.5 * ((*tt)[i] - (*tt)[i - 1]) * ((*rr)[i] + (*rr)[i - 1]);
    IntensityFunction r(Kind::tabulated, "tabulated(" + std::to_string(tt->size()) + " knots)");
    r.rate_ = [tt, rr](double t) {
      if (t <= 0.0) return rr->front();
      if (t >= tt->back()) return rr->back();
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(tt->begin(), tt->end(), t) - tt->begin()) - 1;
      const double w = (t - (*tt)[i]) / ((*tt)[i + 1] - (*tt)[i]);
      return (1.0 - w) * (*rr)[i] + w * (*rr)[i + 1];
    };
    r.cumulative_ = [tt, rr, cum](double t) {
      if (t <= 0.0) return 0.0;
      if (t >= tt->back()) return cum->back() + rr->back() * (t - tt->back());
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(tt->begin(), tt->end(), t) - tt->begin()) - 1;
      const double h = (*tt)[i + 1] - (*tt)[i];
      const double d = t - (*tt)[i];
      const double slope = ((*rr)[i + 1] - (*rr)[i]) / h;
      return (*cum)[i] + (*rr)[i] * d + 0.5 * slope * d * d;
    };
    return r;
  }

  /// User rate; Lambda by adaptive quadrature unless `cumulative` is given.
  static IntensityFunction from_functions(std::string name, std::function<double(double)> rate,
                                          std::function<double(double)> cumulative = {}) {
    if (!rate) throw std::invalid_argument("IntensityFunction::from_functions: empty rate");
    IntensityFunction r(Kind::custom, std::move(name));
    r.rate_ = rate;
    if (cumulative) {
      r.cumulative_ = std::move(cumulative);
    } else {
      r.cumulative_ = [rate](double t) {
        if (t <= 0.0) return 0.0;
        return quad::gauss_kronrod(rate, 0.0, t, 1e-13, 1e-15).value;
      };
    }
    return r;
  }

  double rate(double t) const { return rate_(t); }
  /// Lambda(t) = Lambda(0, t).
  double cumulative(double t) const { return t <= 0.0 ? 0.0 : cumulative_(t); }
  /// Lambda(s, t), s <= t.
  double cumulative(double s, double t) const {
    if (kind_ == Kind::homogeneous) return lambda_ * (t - s);
    return cumulative(t) - cumulative(s);
  }

  Kind kind() const noexcept { return kind_; }
  bool is_homogeneous() const noexcept { return kind_ == Kind::homogeneous; }
  /// The constant rate; throws for non-homogeneous intensities.
  double constant_rate() const {
    if (!is_homogeneous()) throw std::domain_error("IntensityFunction: " + name_ + " is not homogeneous");
    return lambda_;
  }
  const std::string& describe() const noexcept { return name_; }

  /// Arrival-time laws need Lambda increasing, Lambda(0+) = 0 and Lambda(inf) = inf.
  /// Checked on a logarithmic probe grid over [1e-6, 1e6].
  void check_arrival_conditions() const {
    double prev = 0.0;
    for (int e = -24; e <= 24; ++e) {
      const double t = std::pow(10.0, e / 4.0);
      const double c = cumulative(t);
      if (!(c > prev))
        throw std::domain_error("arrival times: cumulative intensity of " + name_ + " is not increasing near t=" +
                                fmt(t));
      prev = c;
    }
    if (cumulative(1e-6) > 1e-3)
      throw std::domain_error("arrival times: cumulative intensity of " + name_ + " does not vanish at 0");
    if (prev < 50.0)
      throw std::domain_error("arrival times: cumulative intensity of " + name_ + " stays bounded");
  }

 private:
  IntensityFunction(Kind k, std::string name) : kind_(k), name_(std::move(name)) {}

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
  }

  Kind kind_ = Kind::homogeneous;
  std::string name_;
  double lambda_ = 0.0;
  std::function<double(double)> rate_;
  std::function<double(double)> cumulative_;
};

// ---------------------------------------------------------------------------
// Base Poisson law

/// Poisson pmf at mean m, in log space.
inline double poisson_pmf(long x, double m) {
  if (x < 0) return 0.0;
  if (m <= 0.0) return x == 0 ? 1.0 : 0.0;
  return std::exp(x * std::log(m) - m - log_gamma(x + 1.0));
}

/// P(N >= k) for N ~ Poisson(m).
inline double poisson_upper_tail(long k, double m) {
  if (k <= 0) return 1.0;
  if (m <= 0.0) return 0.0;
  return gamma_p(static_cast<double>(k), m);
}

/// Smallest X with P(Poisson(m) > X) < eps.
inline long poisson_cutoff(double m, double eps) {
  long x = static_cast<long>(std::floor(m));
  while (x > 0 && poisson_upper_tail(x, m) < eps) --x;
  while (poisson_upper_tail(x + 1, m) >= eps) ++x;
  return x;
}

namespace detail {

// (p_0, ..., p_X) at mean m; the recurrence is used while e^{-m} is representable.
inline std::valarray<double> poisson_vector(double m, long xmax) {
  std::valarray<double> p(0.0, static_cast<std::size_t>(xmax + 1));
  if (m <= 0.0) {
    p[0] = 1.0;
    return p;
  }
  if (m < 600.0) {
    double v = std::exp(-m);
    p[0] = v;
    for (long x = 1; x <= xmax; ++x) {
      v *= m / static_cast<double>(x);
      p[static_cast<std::size_t>(x)] = v;
    }
    return p;
  }
  for (long x = 0; x <= xmax; ++x) p[static_cast<std::size_t>(x)] = poisson_pmf(x, m);
  return p;
}

inline long max_index(const std::vector<int>& xs) {
  if (xs.empty()) throw std::invalid_argument("empty lattice of counts");
  long m = 0;
  for (int x : xs) {
    if (x < 0) throw std::domain_error("counts must be >= 0");
    m = std::max<long>(m, x);
  }
  return m;
}

}  // namespace detail

/// p_x(t, v) = P(N(t+v) - N(v) = x).
inline double base_pmf(const IntensityFunction& intensity, long x, double t, double v = 0.0) {
  if (x < 0) throw std::domain_error("base_pmf: x must be >= 0");
  if (t < 0.0 || v < 0.0) throw std::domain_error("base_pmf: t and v must be >= 0");
  return poisson_pmf(x, intensity.cumulative(v, t + v));
}

// ---------------------------------------------------------------------------
// Time-changed law

class TimeChangedPoissonLaw {
 public:
  TimeChangedPoissonLaw(IntensityFunction intensity, InverseSubordinatorLaw law)
      : intensity_(std::move(intensity)), law_(std::move(law)) {}

  const IntensityFunction& intensity() const noexcept { return intensity_; }
  const InverseSubordinatorLaw& law() const noexcept { return law_; }

  /// (p_0, ..., p_X) of the increment N(Y(t)+v) - N(v) given Y(t) = u.
  std::valarray<double> base_vector(double u, double v, long xmax) const {
    return detail::poisson_vector(intensity_.cumulative(v, u + v), xmax);
  }

 private:
  IntensityFunction intensity_;
  InverseSubordinatorLaw law_;
};

/// (p^f_0(t,v), ..., p^f_X(t,v)) from one master grid.
inline std::valarray<double> pmf_vector(const TimeChangedPoissonLaw& P, long xmax, double /*t*/, double v,
                                        const MixtureGrid& grid) {
  return grid.integrate([&](double u) { return P.base_vector(u, v, xmax); });
}

inline std::valarray<double> pmf_vector(const TimeChangedPoissonLaw& P, long xmax, double t, double v = 0.0) {
  if (xmax < 0) throw std::domain_error("pmf: x must be >= 0");
  if (v < 0.0) throw std::domain_error("pmf: v must be >= 0");
  if (t == 0.0) return detail::poisson_vector(0.0, xmax);
  return pmf_vector(P, xmax, t, v, P.law().master_grid(t));
}

/// p^f_x(t, v) = int p_x(u, v) l(t, u) du. v = 0 gives the pmf of N(Y(t)).
inline double pmf(const TimeChangedPoissonLaw& P, long x, double t, double v = 0.0) {
  if (x < 0) throw std::domain_error("pmf: x must be >= 0");
  return pmf_vector(P, x, t, v)[static_cast<std::size_t>(x)];
}

/// Count cutoff and the mass accounted for at one t.
struct NormalizationAudit {
  double t = 0.0;
  long cutoff = 0;            // X
  double sum = 0.0;           // sum_{x <= X} p_x
  double count_tail = 0.0;    // bound on P(N > X | Y <= u_max)
  double truncation = 0.0;    // bound on P(Y > u_max)
  TruncationCertificate certificate;
};

/// Smallest X whose Poisson tail at the largest retained mean Lambda(v, u_max + v) is below eps.
inline long x_cutoff(const TimeChangedPoissonLaw& P, const TruncationCertificate& c, double v = 0.0,
                     double eps = 1e-8) {
  return poisson_cutoff(P.intensity().cumulative(v, c.u_max + v), eps);
}

inline NormalizationAudit normalization(const TimeChangedPoissonLaw& P, double t, double v = 0.0, double eps = 1e-8) {
  NormalizationAudit a;
  a.t = t;
  const MixtureGrid grid = P.law().master_grid(t);
  a.certificate = grid.certificate;
  a.cutoff = x_cutoff(P, grid.certificate, v, eps);
  a.sum = pmf_vector(P, a.cutoff, t, v, grid).sum();
  a.count_tail = poisson_upper_tail(a.cutoff + 1, P.intensity().cumulative(v, grid.certificate.u_max + v));
  a.truncation = grid.certificate.bound;
  return a;
}

// ---------------------------------------------------------------------------
// Governing equations

struct ResidualOptions {
  QuadratureSpec quadrature{};
  double tolerance = 1e-4;
  int workers = 0;  // 0: default_worker_count()
};

namespace detail {

inline int workers_or_default(int w) { return w > 0 ? w : default_worker_count(); }

inline std::string x_label(long x) { return "x=" + std::to_string(x); }

// t -> (p^f_0(t,v), ..., p^f_X(t,v)) with its exact t-derivative.
inline DifferentiableCurve<std::valarray<double>> pmf_curve(const TimeChangedPoissonLaw& P, long xmax, double v) {
  DifferentiableCurve<std::valarray<double>> c;
  c.value = [&P, xmax, v](double t) { return pmf_vector(P, xmax, t, v); };
  c.derivative = [&P, xmax, v](double t) {
    const MixtureGrid g = P.law().master_grid(t);
    return g.integrate_dt([&](double u) { return P.base_vector(u, v, xmax); });
  };
  c.value_at_zero = poisson_vector(0.0, xmax);
  return c;
}

}  // namespace detail

/// D_t p^f_x(t,v) = int lambda(u+v) [p_{x-1}(u,v) - p_x(u,v)] l(t,u) du, per (t, x).
inline ResidualReport residual_thm1(const TimeChangedPoissonLaw& P, const std::vector<int>& xs,
                                    const std::vector<double>& t_grid, double v = 0.0,
                                    const ResidualOptions& opt = {}) {
  const long xmax = detail::max_index(xs);
  if (v < 0.0) throw std::domain_error("residual_thm1: v must be >= 0");
  const auto curve = detail::pmf_curve(P, xmax, v);
  struct Row {
    std::valarray<double> lhs, rhs;
  };
  const auto rows = parallel_map<Row>(t_grid.size(), detail::workers_or_default(opt.workers), [&](std::size_t i) {
    const double t = t_grid[i];
    Row r;
    r.lhs = cd_derivative(curve, P.law().bernstein(), t, opt.quadrature);
    const MixtureGrid g = P.law().master_grid(t);
    r.rhs = g.integrate([&](double u) {
      const std::valarray<double> p = P.base_vector(u, v, xmax);
      std::valarray<double> out(p.size());
      const double rate = P.intensity().rate(u + v);
      for (std::size_t x = 0; x < p.size(); ++x) out[x] = rate * ((x > 0 ? p[x - 1] : 0.0) - p[x]);
      return out;
    });
    return r;
  });
  ResidualReport rep;
  rep.equation = "poisson_increment";
  rep.tolerance = opt.tolerance;
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    for (int x : xs) rep.add(t_grid[i], detail::x_label(x), rows[i].lhs[x], rows[i].rhs[x]);
  return rep;
}

/// D_t p^f_x(t) = -lambda (p^f_x(t) - p^f_{x-1}(t)) for a homogeneous intensity.
inline ResidualReport residual_homogeneous(const TimeChangedPoissonLaw& P, const std::vector<int>& xs,
                                           const std::vector<double>& t_grid, const ResidualOptions& opt = {}) {
  const double lambda = P.intensity().constant_rate();
  const long xmax = detail::max_index(xs);
  const auto curve = detail::pmf_curve(P, xmax, 0.0);
  struct Row {
    std::valarray<double> lhs, p;
  };
  const auto rows = parallel_map<Row>(t_grid.size(), detail::workers_or_default(opt.workers), [&](std::size_t i) {
    const double t = t_grid[i];
    return Row{cd_derivative(curve, P.law().bernstein(), t, opt.quadrature), pmf_vector(P, xmax, t)};
  });
  ResidualReport rep;
  rep.equation = "poisson_homogeneous";
  rep.tolerance = opt.tolerance;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (int x : xs) {
      const double prev = x > 0 ? rows[i].p[x - 1] : 0.0;
      rep.add(t_grid[i], detail::x_label(x), rows[i].lhs[x], -lambda * (rows[i].p[x] - prev));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Moments

/// E N(Y(t))^k = int sum_i S(k,i) Lambda(u)^i l(t,u) du.
inline double moment(const TimeChangedPoissonLaw& P, int k, double t, int k_max = 6) {
  if (k < 1 || k > k_max) throw std::domain_error("moment: k must lie in [1, " + std::to_string(k_max) + "]");
  if (t == 0.0) return 0.0;
  std::vector<double> s(static_cast<std::size_t>(k) + 1, 0.0);
  for (int i = 1; i <= k; ++i) s[i] = static_cast<double>(stirling2(k, i));
  const MixtureGrid g = P.law().master_grid(t);
  return g.integrate([&](double u) {
    const double L = P.intensity().cumulative(u);
    double acc = 0.0, pw = 1.0;
    for (int i = 1; i <= k; ++i) {
      pw *= L;
      acc += s[i] * pw;
    }
    return acc;
  });
}

/// Var N(Y(t)) = E Lambda(Y) + Var Lambda(Y).
inline double variance(const TimeChangedPoissonLaw& P, double t) {
  const double m1 = moment(P, 1, t);
  return moment(P, 2, t) - m1 * m1;
}

struct CovarianceOptions {
  long n_paths = 100000;
  std::uint64_t seed = 20240531;
  double step = 0.0;  // 0: default_step at max(s, t)
  int workers = 0;
};

struct CovarianceEstimate {
  double s = 0.0, t = 0.0;
  double value = 0.0;
  double standard_error = 0.0;  // CLT, of the Monte Carlo part
  double mean_part = 0.0;       // E Lambda(Y(min(s,t))), by quadrature
  double lambda_covariance = 0.0;  // cov[Lambda(Y(s)), Lambda(Y(t))], Monte Carlo
  double cauchy_schwarz_bound = 0.0;  // sqrt(Var Lambda(Y(s)) Var Lambda(Y(t))), by quadrature
  long n_paths = 0;
};

/// cov[N(Y(s)), N(Y(t))] = E Lambda(Y(s^t)) + cov[Lambda(Y(s)), Lambda(Y(t))].
/// The joint law of (Y(s), Y(t)) is sampled from common subordinator paths.
inline CovarianceEstimate covariance(const TimeChangedPoissonLaw& P, double s, double t,
                                     const CovarianceOptions& opt = {}) {
  if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("covariance: s and t must be > 0");
  if (opt.n_paths < 2) throw std::invalid_argument("covariance: needs at least 2 paths");
  const InverseSubordinatorLaw& law = P.law();
  const IntensityFunction& I = P.intensity();
  CovarianceEstimate est;
  est.s = s;
  est.t = t;
  est.n_paths = opt.n_paths;
  const double lo = std::min(s, t), hi = std::max(s, t);
  est.mean_part = law.master_grid(lo).integrate([&](double u) { return I.cumulative(u); });
  auto lambda_var = [&](double r) {
    const MixtureGrid g = law.master_grid(r);
    const double m1 = g.integrate([&](double u) { return I.cumulative(u); });
    const double m2 = g.integrate([&](double u) {
      const double L = I.cumulative(u);
      return L * L;
    });
    return std::max(0.0, m2 - m1 * m1);
  };
  est.cauchy_schwarz_bound = std::sqrt(lambda_var(s) * lambda_var(t));

  const double step = opt.step > 0.0 ? opt.step : default_step(law, hi);
  const IncrementSampler inc(law.bernstein(), step);
  const std::vector<double> times = lo == hi ? std::vector<double>{lo} : std::vector<double>{lo, hi};
  const std::size_t n = static_cast<std::size_t>(opt.n_paths);
  std::vector<double> a(n), b(n);
  parallel_chunks(n, 4096, detail::workers_or_default(opt.workers), [&](std::size_t, std::size_t beg, std::size_t end) {
    std::vector<double> y;
    for (std::size_t i = beg; i < end; ++i) {
      Philox4x32 eng(opt.seed, i);
      simulate_first_passages(inc, times, eng, y);
      const double ys = s <= t ? y.front() : y.back();
      const double yt = s <= t ? y.back() : y.front();
      a[i] = I.cumulative(ys);
      b[i] = I.cumulative(yt);
    }
  });
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double c = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (a[i] - ma) * (b[i] - mb);
    c += z;
    c2 += z * z;
  }
  const double mean_z = c / n;
  est.lambda_covariance = c / (n - 1.0);
  est.standard_error = std::sqrt(std::max(0.0, c2 / n - mean_z * mean_z) / n);
  est.value = est.mean_part + est.lambda_covariance;
  return est;
}

// ---------------------------------------------------------------------------
// Moment generating functions

/// E e^{theta N(Y(t))} = l~(t, lambda (1 - e^theta)), homogeneous intensity.
/// theta > 0 needs allow_positive and is best effort: the transform argument is negative.
inline double mgf(const TimeChangedPoissonLaw& P, double theta, double t, bool allow_positive = false) {
  if (theta > 0.0 && !allow_positive) throw std::domain_error("mgf: theta > 0 is only evaluated on request");
  if (t < 0.0) throw std::domain_error("mgf: t must be >= 0");
  const double lambda = P.intensity().constant_rate();
  return P.law().laplace(t, -lambda * std::expm1(theta));
}

/// E e^{theta Z(Y(t))} = l~(t, f_X(-theta)) for a Lévy process Z with Laplace exponent f_X.
inline double mgf_general(const InverseSubordinatorLaw& law, const std::function<double(double)>& fx_exponent,
                          double theta, double t, bool allow_negative = false) {
  const double arg = fx_exponent(-theta);
  if (!std::isfinite(arg)) throw std::domain_error("mgf_general: f_X(-theta) is not finite");
  if (arg < 0.0 && !allow_negative)
    throw std::domain_error("mgf_general: f_X(-theta) < 0 is only evaluated on request");
  return law.laplace(t, arg);
}

/// D_t M(theta, t) = lambda (e^theta - 1) M(theta, t).
inline ResidualReport residual_mgf(const TimeChangedPoissonLaw& P, const std::vector<double>& thetas,
                                   const std::vector<double>& t_grid, const ResidualOptions& opt = {}) {
  const double lambda = P.intensity().constant_rate();
  ResidualReport rep;
  rep.equation = "poisson_mgf";
  rep.tolerance = opt.tolerance;
  const InverseSubordinatorLaw& law = P.law();
  for (double theta : thetas) {
    if (theta > 0.0) throw std::domain_error("residual_mgf: theta must be <= 0");
    const double arg = -lambda * std::expm1(theta);
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

// ---------------------------------------------------------------------------
// Arrival times

/// P(T_n <= t) for the n-th arrival of N(Y(t)): int l(t,u) P(Gamma(n) <= Lambda(u)) du.
inline double arrival_cdf(const TimeChangedPoissonLaw& P, int n, double t) {
  if (n < 1) throw std::domain_error("arrival_cdf: n must be >= 1");
  if (t < 0.0) throw std::domain_error("arrival_cdf: t must be >= 0");
  P.intensity().check_arrival_conditions();
  if (t == 0.0) return 0.0;
  const MixtureGrid g = P.law().master_grid(t);
  return g.integrate([&](double u) { return gamma_p(static_cast<double>(n), P.intensity().cumulative(u)); });
}

/// k-th lambda-derivative of l~(t, lambda), central differences with two Richardson levels.
inline double laplace_lambda_derivative(const InverseSubordinatorLaw& law, double t, double lambda, int k,
                                        double rel_step) {
  if (k == 0) return law.laplace_fast(t, lambda);
  if (k < 0 || k > 4) throw std::domain_error("laplace_lambda_derivative: order must lie in [0, 4]");
  // Central-difference stencils on points lambda + j h, j = -2..2.
  static const double coef[5][5] = {{0, 0, 1, 0, 0},
                                    {0, -0.5, 0, 0.5, 0},
                                    {0, 1, -2, 1, 0},
                                    {-0.5, 1, 0, -1, 0.5},
                                    {1, -4, 6, -4, 1}};
  auto diff = [&](double h) {
    double acc = 0.0;
    for (int j = -2; j <= 2; ++j) {
      const double c = coef[k][j + 2];
      if (c != 0.0) acc += c * law.laplace_fast(t, lambda + j * h);
    }
    return acc / std::pow(h, k);
  };
  const double h = rel_step * lambda;
  const double d1 = diff(h), d2 = diff(0.5 * h), d4 = diff(0.25 * h);
  const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

/// 1 - sum_{k<n} (lambda^k/k!) (-1)^k d^k/dlambda^k l~(t, lambda), homogeneous intensity, n <= 5.
inline double arrival_cdf_by_derivatives(const TimeChangedPoissonLaw& P, int n, double t, double rel_step = 0.05) {
  if (n < 1 || n > 5) throw std::domain_error("arrival_cdf_by_derivatives: n must lie in [1, 5]");
  const double lambda = P.intensity().constant_rate();
  if (t == 0.0) return 0.0;
  double acc = 0.0, fact = 1.0, pw = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) {
      fact *= k;
      pw *= lambda;
    }
    const double d = laplace_lambda_derivative(P.law(), t, lambda, k, rel_step);
    acc += (k % 2 == 0 ? 1.0 : -1.0) * pw / fact * d;
  }
  return 1.0 - acc;
}

}  // namespace subord

#endif  // SUBORD_POISSON_TC_HPP
