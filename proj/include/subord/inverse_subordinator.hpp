#ifndef SUBORD_INVERSE_SUBORDINATOR_HPP
#define SUBORD_INVERSE_SUBORDINATOR_HPP

// Law of the inverse subordinator Y(t) = inf{s >= 0 : H(s) > t} for a Bernstein
// function f with a = b = 0 and infinite Lévy activity.
//
// Everything comes from Laplace inversion in t:
//   density   l(t,u)       <-  f(s)/s e^{-u f(s)}
//   d/dt l(t,u)            <-  f(s) e^{-u f(s)}                  (u > 0)
//   P(Y(t) <= u)           <-  1/s - e^{-u f(s)}/s
//   E e^{-lambda Y(t)}     <-  f(s) / (s (lambda + f(s)))
//   d/dt of the above      <-  -lambda / (lambda + f(s))
//   E Y(t)^k               <-  k! / (s f(s)^k)
//
// A DensitySlice fixes the contour for one t and keeps a_k = w_k f(s_k)/s_k and
// f(s_k), so l(t,u) = Re sum_k a_k e^{-u f_k} costs one complex exponential per
// node for each further u.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <valarray>
#include <vector>

#include "subord/bernstein.hpp"
#include "subord/convderiv.hpp"
#include "subord/errors.hpp"
#include "subord/extended.hpp"
#include "subord/gamma.hpp"
#include "subord/grid_function.hpp"
#include "subord/laplace_inversion.hpp"
#include "subord/quadrature.hpp"
#include "subord/random.hpp"
#include "subord/residual_report.hpp"

namespace subord {

struct LawSettings {
  InversionPolicy inversion{};
  // Spot checks of densities against the real-axis route. Peaked densities
  // (alpha > 1/2) are beyond Gaver-Stehfest's resolution, hence the loose default.
  double density_check_rel_tol = 1e-2;
  double density_check_abs_tol = 1e-3;
  bool cross_check = true;
  // Tail mass allowed beyond u_max.
  double truncation_mass = 1e-12;
  int max_moment_order = 16;
  // Master grid: composite Gauss-Legendre on [0, u_max].
  int grid_panels = 48;
  int grid_order = 10;
  // Densities at 0 < u < u_min are evaluated at u_min.
  double u_min = 1e-10;

  void validate() const {
    inversion.validate();
    if (!(truncation_mass > 0.0 && truncation_mass < 1.0))
      throw std::invalid_argument("LawSettings: truncation_mass must lie in (0, 1)");
    if (max_moment_order < 1 || max_moment_order > 40)
      throw std::invalid_argument("LawSettings: max_moment_order must lie in [1, 40]");
    if (grid_panels < 1 || grid_order < 1 || grid_order > 64)
      throw std::invalid_argument("LawSettings: bad master grid size");
    if (!(u_min >= 0.0)) throw std::invalid_argument("LawSettings: u_min must be >= 0");
    if (!(density_check_rel_tol > 0.0) || !(density_check_abs_tol >= 0.0))
      throw std::invalid_argument("LawSettings: bad density check tolerances");
  }
};

/// Contour data for one time t.
///
/// The shared contour is fine while u is small. For larger u the integrand
/// e^{st - u f(s)} is far larger on the contour than at the real saddle point
/// t = u f'(s), and the sum cancels away the digits (badly so for tempered families,
/// where Re f < 0 near the branch point left of the origin). Such u are inverted on
/// the vertical line through the saddle point instead, where the integrand is close to
/// a Gaussian and the trapezoid rule converges geometrically.
class DensitySlice {
 public:
  DensitySlice() = default;
  DensitySlice(const BernsteinFunction& f, const ContourNodes& nodes, std::optional<HyperbolaParameters> params = {})
      : t_(nodes.t), f_(f), params_(params) {
    const std::size_t n = nodes.node.size();
    a_.resize(n);
    fk_.resize(n);
    sk_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::complex<double> s = nodes.node[k];
      const std::complex<double> fs = f(s);
      sk_[k] = s;
      fk_[k] = fs;
      a_[k] = nodes.weight[k] * fs / s;
    }
    if (params_) branch_ = f.family() == BernsteinFamily::tempered_stable ? -f.parameter("beta") : 0.0;
  }

  double t() const noexcept { return t_; }
  std::size_t nodes() const noexcept { return a_.size(); }
  /// Abscissa of the vertical line used at level u, or nothing when the shared contour is used.
  std::optional<double> saddle_line(double u) const {
    const Route r = route(u);
    if (!r.saddle) return std::nullopt;
    return r.x;
  }

  /// l(t,u) for u > 0.
  double density(double u) const {
    return sum(u, [](std::complex<double>, std::complex<double>) { return std::complex<double>(1.0); });
  }
  /// d/dt l(t,u) for u > 0.
  double density_dt(double u) const {
    return sum(u, [](std::complex<double> s, std::complex<double>) { return s; });
  }
  /// d/du l(t,u).
  double density_du(double u) const {
    return sum(u, [](std::complex<double>, std::complex<double> fs) { return -fs; });
  }
  /// l and d/dt l together (one exponential per node).
  std::pair<double, double> density_and_dt(double u) const {
    if (route(u).saddle) return {density(u), density_dt(u)};
    double v = 0.0, d = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      const std::complex<double> e = a_[k] * std::exp(-u * fk_[k]);
      v += e.real();
      d += (e * sk_[k]).real();
    }
    return {v, d};
  }
  /// P(Y(t) > u) for u >= 0.
  double survival(double u) const {
    return sum(
        u, [](std::complex<double>, std::complex<double> fs) { return 1.0 / fs; }, 1.0);
  }

 private:
  // Decay (in e-folds) the integrand must reach within line_budget steps along the line.
  static constexpr double line_decay = 45.0;
  static constexpr double line_budget = 400.0;
  static constexpr int max_line_nodes = 100000;

  struct Route {
    bool saddle = false;
    double x = 0.0, step = 0.0;
  };

  // `pole`: the transform has a simple pole at 0 (survival), not a removable point.
  Route route(double u, bool pole = false) const {
    if (!params_ || u <= 0.0) return {};
    const double x = saddle_point(u);
    // Width of the Gaussian at the saddle, and distance to the nearest singularity.
    const double d = x - branch_;
    if (!(d > 0.0)) return {};
    const double e = 1e-3 * d;
    const double curvature = u * std::fabs(derivative(x + e) - derivative(x - e)) / (2.0 * e);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) return {};
    const double sigma = 1.0 / std::sqrt(curvature);
    Route r{true, x, std::min(0.5 * sigma, d / 6.0)};
    if (pole && std::fabs(x) < 3.0 * sigma) {
      // Keep the pole several steps away; the price is a factor of about e^{4.5}.
      r.x = (x >= 0.0 || x - 3.0 * sigma - branch_ < 3.0 * sigma) ? 3.0 * sigma : -3.0 * sigma;
      r.step = std::min({r.step, std::fabs(r.x) / 6.0, (r.x - branch_) / 6.0});
    } else if (std::fabs(r.x) < 0.25 * r.step) {
      // s = 0 is a removable point of f(s)/s; step off it.
      r.x = 0.25 * r.step;
    }
    // The line needs the integrand to die out within a modest number of steps; for
    // small u it decays only through e^{-u f} and the shared contour is better.
    auto log_size = [&](double y) {
      const std::complex<double> s(r.x, y);
      return (s * t_ - u * (*f_)(s)).real() - std::log(std::abs(s));
    };
    const double top = log_size(0.0);
    for (double y = r.step; y <= line_budget * r.step; y *= 2.0)
      if (top - log_size(y) > line_decay) return r;
    return {};
  }

  // Re of the inversion sum of f(s)/s term(s, f(s)) e^{st - u f(s)}; `residue` is the
  // residue of the transform at s = 0, picked up when the line passes left of it.
  template <class Term>
  double sum(double u, Term term, double residue = 0.0) const {
    const Route r = route(u, residue != 0.0);
    if (!r.saddle) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a_.size(); ++k) acc += (a_[k] * term(sk_[k], fk_[k]) * std::exp(-u * fk_[k])).real();
      return acc;
    }
    double acc = 0.0, peak = 0.0;
    int quiet = 0;
    for (int k = 0; k < max_line_nodes && quiet < 8; ++k) {
      const std::complex<double> s(r.x, k * r.step);
      const std::complex<double> fs = (*f_)(s);
      const double w = (k == 0 ? 0.5 : 1.0) * r.step / std::numbers::pi;
      const std::complex<double> g = fs / s * std::exp(s * t_ - u * fs);
      const double c = w * (g * term(s, fs)).real();
      acc += c;
      peak = std::max(peak, std::abs(g));
      quiet = std::abs(g) <= 1e-18 * peak ? quiet + 1 : 0;
    }
    return acc + (r.x < 0.0 ? residue : 0.0);
  }

  // f'(x) by a complex step; +inf past the branch point or where f has no continuation.
  double derivative(double x) const {
    const double h = 1e-20 * std::max(1.0, std::fabs(x));
    try {
      const double d = (*f_)(std::complex<double>(x, h)).imag() / h;
      return std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
    } catch (const evaluator_domain_error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  // Real root of t = u f'(x); f' decreases along the real axis.
  double saddle_point(double u) const {
    const double c = t_ / u;
    double lo, hi;
    if (derivative(0.0) > c) {
      lo = 0.0;
      hi = 1.0;
      while (derivative(hi) > c && hi < 1e300) hi *= 2.0;
    } else {
      hi = 0.0;
      lo = -1.0;
      while (derivative(lo) <= c && lo > -1e300) lo *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (derivative(mid) > c ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double t_ = 0.0;
  std::optional<BernsteinFunction> f_;
  std::optional<HyperbolaParameters> params_;
  double branch_ = 0.0;
  std::vector<std::complex<double>> a_, fk_, sk_;
};

/// Markov bound P(Y(t) > u_max) <= E[Y^k] / u_max^k, minimised over k.
struct TruncationCertificate {
  double t = 0.0;
  double u_max = 0.0;
  double bound = 0.0;        // certified tail mass
  int moment_order = 0;      // k attaining the bound
  double computed_tail = 0.0;  // P(Y > u_max) by inversion, for information
};

/// Quadrature grid on [0, u_max(t)] with the density and its t-derivative at the nodes.
struct MixtureGrid {
  double t = 0.0;
  TruncationCertificate certificate;
  std::vector<double> nodes, weights, density, density_dt;

  /// int_0^{u_max} g(u) l(t,u) du for g returning double or a valarray.
  template <class G>
  auto integrate(G&& g) const {
    using V = std::decay_t<decltype(g(0.0))>;
    V acc = detail::zero_like(g(nodes.front()));
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += (weights[j] * density[j]) * g(nodes[j]);
    return acc;
  }
  template <class G>
  auto integrate_dt(G&& g) const {
    using V = std::decay_t<decltype(g(0.0))>;
    V acc = detail::zero_like(g(nodes.front()));
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += (weights[j] * density_dt[j]) * g(nodes[j]);
    return acc;
  }
  GridFunction density_function() const { return GridFunction(nodes, density, weights); }
};

class InverseSubordinatorLaw {
 public:
  explicit InverseSubordinatorLaw(BernsteinFunction f, LawSettings settings = {})
      : f_(std::move(f)), settings_(std::move(settings)) {
    settings_.validate();
    if (!f_.infinite_activity())
      throw std::domain_error("InverseSubordinatorLaw: the Lévy measure must have infinite mass");
    if (f_.drift() != 0.0 || f_.killing_rate() != 0.0)
      throw std::domain_error("InverseSubordinatorLaw: drift and killing rate must be zero");
    const double idx = f_.singularity_index().value_or(1.0);
    // e^{-u f(s)} stays bounded while |arg s| alpha <= pi/2.
    max_angle_ = std::min(std::numbers::pi, 0.5 * std::numbers::pi / std::max(idx, 0.5));
    if (max_angle_ <= 0.5 * std::numbers::pi + 1e-3) max_angle_ = 0.5 * std::numbers::pi + 1e-3;
    params_ = hyperbola_parameters(max_angle_, settings_.inversion.contour_order, settings_.inversion.contour_accuracy);
    params_full_ =
        hyperbola_parameters(std::numbers::pi, settings_.inversion.contour_order, settings_.inversion.contour_accuracy);
  }

  const BernsteinFunction& bernstein() const noexcept { return f_; }
  const LawSettings& settings() const noexcept { return settings_; }
  double contour_angle() const noexcept { return max_angle_; }
  int contour_nodes_count() const noexcept { return params_.nodes + 1; }

  DensitySlice slice(double t) const {
    require_time(t, "slice");
    return DensitySlice(f_, contour_nodes(t, params_), params_);
  }

  /// l(t,u). u = 0 returns the boundary value nu(t).
  double density(double t, double u) const {
    require_time(t, "density");
    if (u < 0.0) return 0.0;
    if (u == 0.0) return f_.tail(t);
    const double uu = std::max(u, settings_.u_min);
    const double c = slice(t).density(uu);
    if (settings_.cross_check) {
      const double r = real_axis(density_transform(uu), t);
      if (std::fabs(c - r) > settings_.density_check_rel_tol * std::fabs(c) + settings_.density_check_abs_tol)
        throw inversion_disagreement("density: inversion routes disagree at t=" + std::to_string(t) +
                                         ", u=" + std::to_string(u),
                                     c, r);
    }
    return c;
  }
  double density_dt(double t, double u) const {
    require_time(t, "density_dt");
    return slice(t).density_dt(std::max(u, settings_.u_min));
  }
  double density_du(double t, double u) const {
    require_time(t, "density_du");
    return slice(t).density_du(std::max(u, settings_.u_min));
  }
  /// P(Y(t) <= u).
  double cdf(double t, double u) const {
    if (u < 0.0) return 0.0;
    if (t == 0.0) return 1.0;
    require_time(t, "cdf");
    return 1.0 - slice(t).survival(u);
  }

  /// Transform of the density at level u, for external inversion.
  TransformFunction density_transform(double u) const {
    TransformFunction g;
    const BernsteinFunction f = f_;
    g.contour = [f, u](std::complex<double> s) {
      const auto fs = f(s);
      return fs / s * std::exp(-u * fs);
    };
    g.real = [f, u](extended s) {
      const extended fs = f(s);
      return fs / s * ext_exp(-static_cast<extended>(u) * fs);
    };
    g.max_angle = max_angle_;
    g.real_digits = f_.exponent_digits();
    return g;
  }

  /// Transform of E e^{-lambda Y(t)}. A negative lambda moves the pole to f(s*) = -lambda > 0.
  TransformFunction laplace_transform(double lambda) const {
    TransformFunction g;
    const BernsteinFunction f = f_;
    g.contour = [f, lambda](std::complex<double> s) {
      const auto fs = f(s);
      return fs / (s * (lambda + fs));
    };
    g.real = [f, lambda](extended s) {
      const extended fs = f(s);
      return fs / (s * (static_cast<extended>(lambda) + fs));
    };
    g.max_angle = std::numbers::pi;
    g.real_digits = f_.exponent_digits();
    if (lambda < 0.0) g.singularity_abscissa = pole_abscissa(-lambda);
    return g;
  }

  /// E e^{-lambda Y(t)}, cross-checked between the two inversion routes.
  double laplace(double t, double lambda) const {
    if (t == 0.0 || lambda == 0.0) return 1.0;
    require_time(t, "laplace");
    InversionPolicy p = settings_.inversion;
    p.cross_check = settings_.cross_check;
    return invert_checked(laplace_transform(lambda), t, p);
  }
  /// Same without the cross-check; the fast path used inside quadratures.
  double laplace_fast(double t, double lambda) const {
    if (t == 0.0 || lambda == 0.0) return 1.0;
    require_time(t, "laplace");
    const auto g = laplace_transform(lambda);
    return apply_nodes(nodes_for(t, g.max_angle, g.singularity_abscissa), g.contour);
  }
  /// d/dt E e^{-lambda Y(t)}.
  double laplace_dt(double t, double lambda) const {
    if (lambda == 0.0) return 0.0;
    require_time(t, "laplace_dt");
    const BernsteinFunction& f = f_;
    const double shift = lambda < 0.0 ? pole_abscissa(-lambda) : 0.0;
    return apply_nodes(nodes_for(t, std::numbers::pi, shift),
                       [&](std::complex<double> s) { return -lambda / (lambda + f(s)); });
  }

  /// E Y(t)^k.
  double moment(double t, int k) const {
    if (k < 0) throw std::domain_error("moment: k must be >= 0");
    if (k == 0 || t == 0.0) return k == 0 ? 1.0 : 0.0;
    require_time(t, "moment");
    const BernsteinFunction& f = f_;
    const double v = apply_nodes(nodes_for(t, std::numbers::pi, 0.0),
                                 [&](std::complex<double> s) { return 1.0 / (s * std::pow(f(s), k)); });
    return std::exp(log_gamma(k + 1.0)) * v;
  }
  double mean(double t) const { return moment(t, 1); }
  double variance(double t) const {
    const double m = mean(t);
    return moment(t, 2) - m * m;
  }

  TruncationCertificate truncation(double t) const {
    require_time(t, "truncation");
    TruncationCertificate c;
    c.t = t;
    c.u_max = std::numeric_limits<double>::infinity();
    const double eps = settings_.truncation_mass;
    for (int k = 1; k <= settings_.max_moment_order; ++k) {
      const double m = moment(t, k);
      if (!(m > 0.0) || !std::isfinite(m)) continue;
      const double u = std::pow(m / eps, 1.0 / k);
      if (u < c.u_max) {
        c.u_max = u;
        c.moment_order = k;
      }
    }
    if (!std::isfinite(c.u_max)) throw truncation_error("truncation: no finite moment bound at t=" + std::to_string(t));
    c.bound = eps;
    c.computed_tail = slice(t).survival(c.u_max);
    return c;
  }

  MixtureGrid master_grid(double t) const {
    require_time(t, "master_grid");
    MixtureGrid g;
    g.t = t;
    g.certificate = truncation(t);
    const DensitySlice sl = slice(t);
    const auto& gl = quad::gauss_legendre(settings_.grid_order);
    const double h = g.certificate.u_max / settings_.grid_panels;
    // When Y(t) is concentrated (large t) the uniform panels are far wider than the
    // bulk; refine those near the mean down to half a standard deviation.
    const double m = mean(t);
    const double sd = std::sqrt(std::max(variance(t), 0.0));
    const double lo = m - 40.0 * sd, hi = m + 40.0 * sd;
    for (int p = 0; p < settings_.grid_panels; ++p) {
      const double a = h * p;
      int pieces = 1;
      if (sd > 0.0 && a < hi && a + h > lo) pieces = static_cast<int>(std::min(1e4, std::ceil(h / (0.5 * sd))));
      const double w = h / pieces;
      for (int q = 0; q < pieces; ++q) {
        for (int i = 0; i < settings_.grid_order; ++i) {
          const double u = a + w * (q + 0.5 * (gl.nodes[i] + 1.0));
          const auto [v, d] = sl.density_and_dt(std::max(u, settings_.u_min));
          g.nodes.push_back(u);
          g.weights.push_back(0.5 * w * gl.weights[i]);
          g.density.push_back(v);
          g.density_dt.push_back(d);
        }
      }
    }
    return g;
  }

 private:
  void require_time(double t, const char* what) const {
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::domain_error(std::string(what) + ": t must be finite and > 0 (t = 0 is the point mass at u = 0)");
  }

  ContourNodes nodes_for(double t, double angle, double shift) const {
    if (angle == max_angle_) return contour_nodes(t, params_, shift);
    if (angle == std::numbers::pi) return contour_nodes(t, params_full_, shift);
    return contour_nodes(
        t, hyperbola_parameters(angle, settings_.inversion.contour_order, settings_.inversion.contour_accuracy), shift);
  }

  double real_axis(const TransformFunction& g, double t) const {
    const int order = std::min(settings_.inversion.real_order, stehfest_order_for_digits(g.real_digits));
    return invert(g, t, InversionMethod::accelerated_real, order);
  }

  // Real s* with f(s*) = y; the transform with lambda = -y has its pole there.
  double pole_abscissa(double y) const { return solve_exponent(f_, y); }

  BernsteinFunction f_;
  LawSettings settings_;
  double max_angle_ = std::numbers::pi;
  HyperbolaParameters params_, params_full_;
};

/// Residual of D_t l~(t, lambda) = -lambda l~(t, lambda) on a t-grid.
inline ResidualReport eigenfunction_residual(const InverseSubordinatorLaw& law, double lambda,
                                             const std::vector<double>& t_grid, const QuadratureSpec& q = {},
                                             double tolerance = 1e-4) {
  ResidualReport rep;
  rep.equation = "eigenfunction";
  rep.tolerance = tolerance;
  DifferentiableCurve<double> curve;
  curve.value = [&](double t) { return t <= 0.0 ? 1.0 : law.laplace_fast(t, lambda); };
  curve.derivative = [&](double t) { return law.laplace_dt(t, lambda); };
  curve.value_at_zero = 1.0;
  const std::string label = "lambda=" + std::to_string(lambda);
  for (double t : t_grid) {
    const double lhs = lambda == 0.0 ? 0.0 : cd_derivative(curve, law.bernstein(), t, q);
    const double rhs = -lambda * law.laplace_fast(t, lambda);
    rep.add(t, label, lhs, rhs);
  }
  return rep;
}

/// |DD_t l(t,u) + d/du l(t,u)| at one (t, u), u > 0.
inline ResidualEntry density_equation_residual(const InverseSubordinatorLaw& law, double t, double u,
                                               const QuadratureSpec& q = {}) {
  if (!(u > 0.0)) throw std::domain_error("density_equation_residual: u must be > 0");
  DifferentiableCurve<double> curve;
  curve.value = [&](double s) { return s <= 0.0 ? 0.0 : law.slice(s).density(u); };
  curve.derivative = [&](double s) { return law.slice(s).density_dt(u); };
  curve.value_at_zero = 0.0;
  const double lhs = rl_derivative(curve, law.bernstein(), t, q);
  const double rhs = -law.density_du(t, u);
  return {t, "u=" + std::to_string(u), lhs, rhs, std::fabs(lhs - rhs)};
}

// ---------------------------------------------------------------------------
// Path sampling

/// Draws subordinator increments H((k+1) dt) - H(k dt) exactly.
class IncrementSampler {
 public:
  IncrementSampler(const BernsteinFunction& f, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw std::domain_error("IncrementSampler: step must be > 0");
    switch (f.family()) {
      case BernsteinFamily::stable:
        alpha_ = f.parameter("alpha");
        break;
      case BernsteinFamily::tempered_stable:
        alpha_ = f.parameter("alpha");
        beta_ = f.parameter("beta");
        break;
      default:
        throw sampler_error("IncrementSampler: no exact increment sampler for " + f.describe());
    }
  }

  template <class Engine>
  double operator()(Engine& eng) const {
    if (beta_ > 0.0) return tempered_stable_increment(alpha_, beta_, dt_, eng);
    return stable_increment(alpha_, dt_, eng);
  }

  double step() const noexcept { return dt_; }

 private:
  double dt_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// First-passage levels of one subordinator path at increasing times.
/// Y = dt (k - U), k the first grid index with H(k dt) > t, U a per-path jitter.
template <class Engine>
void simulate_first_passages(const IncrementSampler& inc, const std::vector<double>& times, Engine& eng,
                             std::vector<double>& out, long max_steps = 100000000) {
  out.assign(times.size(), 0.0);
  const double jitter = uniform_open(eng);
  double h = 0.0;
  long k = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (i > 0 && t < times[i - 1]) throw std::invalid_argument("simulate_first_passages: times must be sorted");
    if (t <= 0.0) {
      out[i] = 0.0;
      continue;
    }
    while (h <= t) {
      h += inc(eng);
      if (++k > max_steps) throw sampler_error("simulate_first_passages: step guard exceeded");
    }
    out[i] = inc.step() * (static_cast<double>(k) - jitter);
  }
}

/// One draw of Y(t). t = 0 gives 0 (the point mass).
template <class Engine>
double simulate_inverse(const BernsteinFunction& f, double t, double step, Engine& eng) {
  if (t < 0.0) throw std::domain_error("simulate_inverse: t must be >= 0");
  if (t == 0.0) return 0.0;
  std::vector<double> out;
  simulate_first_passages(IncrementSampler(f, step), {t}, eng, out);
  return out[0];
}

/// Default step: a small fraction of E Y(t). With the jitter the sampled CDF is exact
/// at grid points and linear in between, so the bias is second order in the step.
inline double default_step(const InverseSubordinatorLaw& law, double t) { return 5e-3 * law.mean(t); }

}  // namespace subord

#endif  // SUBORD_INVERSE_SUBORDINATOR_HPP
