#ifndef SUBORD_BERNSTEIN_HPP
#define SUBORD_BERNSTEIN_HPP

// Bernstein functions f(x) = a + b x + int_0^inf (1 - e^{-xs}) nu(ds) with a Lévy
// density, their Lévy tails nu(s) = a + nu((s, inf)), and the stable and
// tempered-stable families. Instances are immutable and cheap to copy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subord/errors.hpp"
#include "subord/extended.hpp"
#include "subord/gamma.hpp"
#include "subord/quadrature.hpp"

namespace subord {

enum class BernsteinFamily { stable, tempered_stable, custom };

inline std::string to_string(BernsteinFamily f) {
  switch (f) {
    case BernsteinFamily::stable: return "stable";
    case BernsteinFamily::tempered_stable: return "tempered_stable";
    case BernsteinFamily::custom: return "custom";
  }
  return "unknown";
}

namespace detail {

class BernsteinModel {
 public:
  virtual ~BernsteinModel() = default;
  virtual double exponent(double x) const = 0;
  virtual std::complex<double> exponent(std::complex<double> z) const = 0;
  // Extended-precision evaluation for the real-axis inversion route. Models that
  // only know f to double precision fall back to it.
  virtual extended exponent(extended x) const { return exponent(static_cast<double>(x)); }
  virtual int exponent_digits() const { return 15; }
  virtual double levy_density(double s) const = 0;
  virtual double tail(double s) const = 0;
  virtual double tail_integral(double h) const = 0;
  virtual double drift() const { return 0.0; }
  virtual bool infinite_activity() const = 0;
  virtual std::optional<double> singularity_index() const = 0;
  virtual BernsteinFamily family() const = 0;
  virtual std::vector<std::pair<std::string, double>> parameters() const = 0;
};

class StableModel final : public BernsteinModel {
 public:
  explicit StableModel(double alpha)
      : alpha_(alpha), inv_gamma_1ma_(1.0 / gamma_fn(1.0 - alpha)), inv_gamma_2ma_(1.0 / gamma_fn(2.0 - alpha)) {}
  double exponent(double x) const override { return x <= 0.0 ? 0.0 : std::pow(x, alpha_); }
  std::complex<double> exponent(std::complex<double> z) const override {
    if (z == 0.0) return 0.0;
    return std::pow(z, alpha_);
  }
  extended exponent(extended x) const override {
    return x <= 0 ? extended(0) : ext_pow(x, static_cast<extended>(alpha_));
  }
  int exponent_digits() const override { return extended_digits; }
  double levy_density(double s) const override {
    return s <= 0.0 ? std::numeric_limits<double>::infinity() : alpha_ * std::pow(s, -alpha_ - 1.0) * inv_gamma_1ma_;
  }
  double tail(double s) const override {
    return s <= 0.0 ? std::numeric_limits<double>::infinity() : std::pow(s, -alpha_) * inv_gamma_1ma_;
  }
  double tail_integral(double h) const override { return h <= 0.0 ? 0.0 : std::pow(h, 1.0 - alpha_) * inv_gamma_2ma_; }
  bool infinite_activity() const override { return true; }
  std::optional<double> singularity_index() const override { return alpha_; }
  BernsteinFamily family() const override { return BernsteinFamily::stable; }
  std::vector<std::pair<std::string, double>> parameters() const override { return {{"alpha", alpha_}}; }

 private:
  double alpha_;
  double inv_gamma_1ma_;
  double inv_gamma_2ma_;
};

class TemperedStableModel final : public BernsteinModel {
 public:
  TemperedStableModel(double alpha, double beta)
      : alpha_(alpha), beta_(beta), beta_alpha_(std::pow(beta, alpha)), inv_gamma_1ma_(1.0 / gamma_fn(1.0 - alpha)) {}
  double exponent(double x) const override {
    if (x <= 0.0) return 0.0;
    return beta_alpha_ * std::expm1(alpha_ * std::log1p(x / beta_));
  }
  std::complex<double> exponent(std::complex<double> z) const override {
    const std::complex<double> w = z / beta_;
    if (std::abs(w) < 1e-4) {
      // (1+w)^a - 1 by its Taylor series
      const double a = alpha_;
      const auto s = w * (a + w * (a * (a - 1.0) / 2.0 + w * (a * (a - 1.0) * (a - 2.0) / 6.0 +
                                                         w * (a * (a - 1.0) * (a - 2.0) * (a - 3.0) / 24.0))));
      return beta_alpha_ * s;
    }
    return beta_alpha_ * (std::pow(1.0 + w, alpha_) - 1.0);
  }
  extended exponent(extended x) const override {
    if (x <= 0) return 0;
    const extended a = alpha_, b = beta_;
    return ext_pow(b, a) * ext_expm1(a * ext_log1p(x / b));
  }
  int exponent_digits() const override { return extended_digits; }
  double levy_density(double s) const override {
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    return alpha_ * std::exp(-beta_ * s) * std::pow(s, -alpha_ - 1.0) * inv_gamma_1ma_;
  }
  // nu(s) = alpha beta^alpha Gamma(-alpha, beta s) / Gamma(1 - alpha)
  double tail(double s) const override {
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    return alpha_ * beta_alpha_ * upper_incomplete_gamma(-alpha_, beta_ * s) * inv_gamma_1ma_;
  }
  // int_0^h nu = h nu(h) + (alpha / Gamma(1-alpha)) beta^{alpha-1} gamma(1-alpha, beta h)
  double tail_integral(double h) const override {
    if (h <= 0.0) return 0.0;
    return h * tail(h) + alpha_ * inv_gamma_1ma_ * std::pow(beta_, alpha_ - 1.0) *
                             lower_incomplete_gamma(1.0 - alpha_, beta_ * h);
  }
  bool infinite_activity() const override { return true; }
  std::optional<double> singularity_index() const override { return alpha_; }
  BernsteinFamily family() const override { return BernsteinFamily::tempered_stable; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"alpha", alpha_}, {"beta", beta_}};
  }

 private:
  double alpha_, beta_, beta_alpha_, inv_gamma_1ma_;
};

}  // namespace detail

/// Optional knowledge about a user-supplied Lévy density.
struct CustomHints {
  // nu(s) ~ C s^{-index} as s -> 0; probed from the density when absent.
  std::optional<double> singularity_index;
  std::optional<bool> infinite_activity;
  // Analytic continuation of f to the complex plane; without it complex
  // evaluation is limited to Re z > 0 (quadrature).
  std::function<std::complex<double>(std::complex<double>)> complex_exponent;
  double probe_small = 1e-10;
  double probe_large = 1e8;
  double rel_tol = 1e-12;
};

class BernsteinFunction {
 public:
  explicit BernsteinFunction(std::shared_ptr<const detail::BernsteinModel> model) : model_(std::move(model)) {}

  double killing_rate() const noexcept { return 0.0; }
  double drift() const { return model_->drift(); }

  double operator()(double x) const { return model_->exponent(x); }
  std::complex<double> operator()(std::complex<double> z) const { return model_->exponent(z); }
  extended operator()(extended x) const { return model_->exponent(x); }
  int exponent_digits() const { return model_->exponent_digits(); }
  double laplace_exponent(double x) const { return model_->exponent(x); }

  double levy_density(double s) const { return model_->levy_density(s); }
  /// Lévy tail nu(s) = a + nu((s, inf)).
  double tail(double s) const { return model_->tail(s); }
  /// int_0^h nu(s) ds; finite whenever nu is integrable at 0.
  double tail_integral(double h) const { return model_->tail_integral(h); }

  bool infinite_activity() const { return model_->infinite_activity(); }
  std::optional<double> singularity_index() const { return model_->singularity_index(); }
  BernsteinFamily family() const { return model_->family(); }
  std::vector<std::pair<std::string, double>> parameters() const { return model_->parameters(); }

  double parameter(const std::string& name) const {
    for (const auto& [k, v] : parameters())
      if (k == name) return v;
    throw std::out_of_range("BernsteinFunction: no parameter '" + name + "'");
  }

  std::string describe() const {
    std::string s = to_string(family()) + "(";
    bool first = true;
    for (const auto& [k, v] : parameters()) {
      if (!first) s += ", ";
      s += k + "=" + std::to_string(v);
      first = false;
    }
    return s + ")";
  }

 private:
  std::shared_ptr<const detail::BernsteinModel> model_;
};

/// Reconstructs b x + int_0^inf (1 - e^{-xs}) levy_density(s) ds by quadrature,
/// splitting the range at s = 1/x.
template <class Density>
double exponent_by_quadrature(const Density& levy_density, double drift, double x, double rel_tol = 1e-12) {
  if (x <= 0.0) return 0.0;
  const double split = 1.0 / x;
  // Where the density overflows near 0 the integrand is below x s^{1-a}: drop it.
  auto integrand = [&](double s) {
    const double d = levy_density(s);
    return std::isfinite(d) ? -std::expm1(-x * s) * d : 0.0;
  };
  const double near = quad::tanh_sinh(integrand, 0.0, split, rel_tol).value;
  const double far = quad::exp_sinh(integrand, split, rel_tol).value;
  return drift * x + near + far;
}

inline double exponent_by_quadrature(const BernsteinFunction& f, double x, double rel_tol = 1e-12) {
  return exponent_by_quadrature([&](double s) { return f.levy_density(s); }, f.drift(), x, rel_tol);
}

/// Stable family: f(x) = x^alpha, alpha in (0, 1).
inline BernsteinFunction make_stable(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("make_stable: alpha must lie in (0, 1)");
  return BernsteinFunction(std::make_shared<detail::StableModel>(alpha));
}

/// Tempered-stable family: f(x) = (x + beta)^alpha - beta^alpha.
inline BernsteinFunction make_tempered_stable(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("make_tempered_stable: alpha must lie in (0, 1)");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("make_tempered_stable: beta must be > 0");
  return BernsteinFunction(std::make_shared<detail::TemperedStableModel>(alpha, beta));
}

namespace detail {

class CustomModel final : public BernsteinModel {
 public:
  CustomModel(double drift, std::function<double(double)> density, CustomHints hints)
      : drift_(drift), density_(std::move(density)), hints_(std::move(hints)) {
    probe();
  }

  double exponent(double x) const override { return exponent_by_quadrature(density_, drift_, x, hints_.rel_tol); }

  std::complex<double> exponent(std::complex<double> z) const override {
    if (hints_.complex_exponent) return hints_.complex_exponent(z);
    if (z.imag() == 0.0 && z.real() >= 0.0) return exponent(z.real());
    if (!(z.real() > 0.0))
      throw evaluator_domain_error(
          "custom Bernstein function: no analytic continuation supplied for Re z <= 0");
    const double split = 1.0 / std::abs(z);
    auto integrand = [&](double s) -> std::complex<double> {
      const std::complex<double> zs = z * s;
      const std::complex<double> one_minus =
          std::abs(zs) < 1e-5 ? zs * (1.0 - zs * (0.5 - zs / 6.0)) : 1.0 - std::exp(-zs);
      const double d = density_(s);
      return std::isfinite(d) ? one_minus * d : std::complex<double>(0.0);
    };
    return drift_ * z + quad::tanh_sinh(integrand, 0.0, split, hints_.rel_tol).value +
           quad::exp_sinh(integrand, split, hints_.rel_tol).value;
  }

  int exponent_digits() const override { return 12; }

  double levy_density(double s) const override { return density_(s); }

  double tail(double s) const override {
    if (s <= 0.0) return infinite_ ? std::numeric_limits<double>::infinity() : finite_mass();
    return quad::exp_sinh(density_, s, hints_.rel_tol).value;
  }

  double tail_integral(double h) const override {
    if (h <= 0.0) return 0.0;
    auto first_moment = [&](double s) { return s * density_(s); };
    return h * tail(h) + quad::tanh_sinh(first_moment, 0.0, h, hints_.rel_tol).value;
  }

  double drift() const override { return drift_; }
  bool infinite_activity() const override { return infinite_; }
  std::optional<double> singularity_index() const override { return index_; }
  BernsteinFamily family() const override { return BernsteinFamily::custom; }
  std::vector<std::pair<std::string, double>> parameters() const override { return {{"b", drift_}}; }

 private:
  double finite_mass() const { return quad::exp_sinh(density_, 0.0, hints_.rel_tol).value; }

  // Log-log slope of the density between two probe points.
  double slope(double s0, double s1) const {
    const double g0 = density_(s0), g1 = density_(s1);
    if (g0 <= 0.0 || g1 <= 0.0) return -std::numeric_limits<double>::infinity();
    return (std::log(g1) - std::log(g0)) / (std::log(s1) - std::log(s0));
  }

  void probe() {
    if (drift_ < 0.0 || !std::isfinite(drift_)) throw std::domain_error("make_custom: drift must be >= 0");
    bool all_zero = true;
    for (double e = std::log10(hints_.probe_small); e <= std::log10(hints_.probe_large) + 1e-9; e += 0.5) {
      const double s = std::pow(10.0, e);
      const double g = density_(s);
      if (!(g >= 0.0) || std::isnan(g)) throw std::domain_error("make_custom: Lévy density must be >= 0");
      if (g > 0.0) all_zero = false;
    }
    if (all_zero) {
      infinite_ = false;
      index_ = 0.0;
      return;
    }
    // int_0^1 s g(s) ds < inf needs g(s) = o(s^{-2}) at 0.
    const double p0 = slope(hints_.probe_small, 100.0 * hints_.probe_small);
    if (p0 <= -2.0 + 1e-6)
      throw integrability_error("make_custom: int_0^1 s nu(ds) diverges (density grows like s^" +
                                std::to_string(p0) + " at 0)");
    const double pinf = slope(1e-2 * hints_.probe_large, hints_.probe_large);
    if (pinf >= -1.0 + 1e-6)
      throw integrability_error("make_custom: int_1^inf nu(ds) diverges (density decays like s^" +
                                std::to_string(pinf) + ")");
    infinite_ = hints_.infinite_activity.value_or(p0 <= -1.0 + 1e-9);
    index_ = hints_.singularity_index.value_or(std::clamp(-(p0 + 1.0), 0.0, 1.0));
  }

  double drift_;
  std::function<double(double)> density_;
  CustomHints hints_;
  bool infinite_ = true;
  std::optional<double> index_;
};

}  // namespace detail

/// User-supplied Lévy density (killing rate 0). Integrability of (s ∧ 1) against the
/// density is probed numerically at construction.
inline BernsteinFunction make_custom(double drift, std::function<double(double)> levy_density, CustomHints hints = {}) {
  if (!levy_density) throw std::invalid_argument("make_custom: empty Lévy density");
  return BernsteinFunction(std::make_shared<detail::CustomModel>(drift, std::move(levy_density), std::move(hints)));
}

/// Smallest s >= 0 with f(s) >= y, by bracketing and bisection; f must be unbounded or exceed y.
inline double solve_exponent(const BernsteinFunction& f, double y) {
  if (y <= 0.0) return 0.0;
  double hi = 1.0;
  for (int i = 0; i < 400 && f(hi) < y; ++i) hi *= 2.0;
  if (f(hi) < y) throw std::domain_error("solve_exponent: f stays below the target value");
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < y ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace subord

#endif  // SUBORD_BERNSTEIN_HPP
