#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <valarray>
#include <vector>

#include "oracles.hpp"
#include "subord/convderiv.hpp"
#include "subord/special_functions.hpp"

using namespace subord;

namespace {

DifferentiableCurve<double> curve(std::function<double(double)> v, std::function<double(double)> d) {
  DifferentiableCurve<double> c;
  c.value_at_zero = v(0.0);
  c.value = std::move(v);
  c.derivative = std::move(d);
  return c;
}

DifferentiableCurve<double> linear() {
  return curve([](double t) { return t; }, [](double) { return 1.0; });
}
DifferentiableCurve<double> square() {
  return curve([](double t) { return t * t; }, [](double t) { return 2 * t; });
}
DifferentiableCurve<double> decay() {
  return curve([](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); });
}
DifferentiableCurve<double> sine() {
  return curve([](double t) { return std::sin(t); }, [](double t) { return std::cos(t); });
}
DifferentiableCurve<double> constant(double c) {
  return curve([c](double) { return c; }, [](double) { return 0.0; });
}

}  // namespace

TEST(CdDerivative, Examples) {
  const auto f = make_stable(0.5);
  EXPECT_EQ(cd_derivative(constant(2.5), f, 1.0), 0.0);
  const double ref = 1.0 / boost::math::tgamma(1.5);
  EXPECT_NEAR(ref, 1.1283791671, 1e-10);
  EXPECT_NEAR(cd_derivative(linear(), f, 1.0), ref, 1e-12);
  for (double a : {0.3, 0.7}) {
    EXPECT_NEAR(cd_derivative(linear(), make_stable(a), 1.0), 1.0 / boost::math::tgamma(2.0 - a), 1e-12);
  }
}

TEST(CdDerivative, MittagLefflerEigenfunction) {
  for (double a : {0.5, 0.8}) {
    const auto f = make_stable(a);
    auto u = curve([a](double t) { return t <= 0 ? 1.0 : mittag_leffler(a, -std::pow(t, a)); }, nullptr);
    // u'(t) = -t^{a-1} E_{a,a}(-t^a); use the derivative identity via the series for E_{a,a}.
    u.derivative = [a](double t) {
      const double z = -std::pow(t, a);
      double s = 0, zn = 1;
      for (int n = 0; n < 200; ++n) {
        s += zn / boost::math::tgamma(a * n + a);
        zn *= z;
        if (std::fabs(zn) < 1e-18) break;
      }
      return -std::pow(t, a - 1.0) * s;
    };
    EXPECT_NEAR(cd_derivative(u, f, 1.0), -oracle::mittag_leffler(a, 1.0), 1e-8) << a;
  }
}

TEST(RlDerivative, Examples) {
  const auto f = make_stable(0.5);
  EXPECT_NEAR(rl_derivative(constant(1.0), f, 1.0), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(0.5641895835, 1.0 / std::sqrt(std::numbers::pi), 1e-10);
  EXPECT_EQ(rl_derivative(square(), f, 0.7), cd_derivative(square(), f, 0.7));
  EXPECT_NEAR(rl_derivative(linear(), f, 1.0), 1.0 / boost::math::tgamma(1.5), 1e-12);
}

TEST(CaputoDerivative, Examples) {
  EXPECT_NEAR(caputo_derivative(linear(), 0.5, 1.0), 1.0 / boost::math::tgamma(1.5), 1e-12);
  EXPECT_EQ(caputo_derivative(constant(3.0), 0.5, 1.0), 0.0);
  const double ref = 2.0 / boost::math::tgamma(2.5);
  EXPECT_NEAR(ref, 1.5045055561, 1e-10);
  EXPECT_NEAR(caputo_derivative(square(), 0.5, 1.0), ref, 1e-12);
}

TEST(CdDerivative, StableCaseEqualsCaputo) {
  double worst = 0;
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    const auto f = make_stable(a);
    for (const auto& u : {linear(), square(), decay(), sine()}) {
      for (double t : {0.25, 1.0, 4.0}) {
        const double d = std::fabs(cd_derivative(u, f, t) - caputo_derivative(u, a, t));
        worst = std::max(worst, d);
        EXPECT_LE(d, 1e-6) << "alpha=" << a << " t=" << t;
      }
    }
  }
  RecordProperty("max_difference", std::to_string(worst));
}

TEST(CdDerivative, Linearity) {
  const auto f = make_tempered_stable(0.6, 1.5);
  const double a = 1.7, b = -0.4;
  auto u = sine(), v = decay();
  auto w = curve([&](double t) { return a * u.value(t) + b * v.value(t); },
                 [&](double t) { return a * u.derivative(t) + b * v.derivative(t); });
  for (double t : {0.3, 1.1, 2.9}) {
    EXPECT_NEAR(cd_derivative(w, f, t), a * cd_derivative(u, f, t) + b * cd_derivative(v, f, t), 1e-12);
  }
}

TEST(CdDerivative, VectorCurveMatchesScalar) {
  const auto f = make_stable(0.4);
  DifferentiableCurve<std::valarray<double>> vc;
  vc.value = [](double t) { return std::valarray<double>{t, t * t, std::sin(t)}; };
  vc.derivative = [](double t) { return std::valarray<double>{1.0, 2 * t, std::cos(t)}; };
  vc.value_at_zero = std::valarray<double>{0.0, 0.0, 0.0};
  const auto r = cd_derivative(vc, f, 1.3);
  EXPECT_DOUBLE_EQ(r[0], cd_derivative(linear(), f, 1.3));
  EXPECT_DOUBLE_EQ(r[1], cd_derivative(square(), f, 1.3));
  EXPECT_DOUBLE_EQ(r[2], cd_derivative(sine(), f, 1.3));
}

TEST(CdDerivative, MeshConvergence) {
  // Error against t^{2-a} 2/Gamma(3-a) as the graded mesh is refined.
  const double a = 0.7, t = 1.0;
  const auto f = make_stable(a);
  const double ref = 2.0 / boost::math::tgamma(3.0 - a);
  std::vector<double> err;
  for (int cells : {2, 4, 8}) {
    QuadratureSpec q;
    q.n_cells = cells;
    q.order = 2;
    err.push_back(std::fabs(cd_derivative(square(), f, t, q) - ref));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double order = std::log2(err[i - 1] / err[i]);
    RecordProperty("observed_order_" + std::to_string(i), std::to_string(order));
    EXPECT_GE(order, 1.0) << err[i - 1] << " -> " << err[i];
  }
}

TEST(CdDerivative, FiniteDifferenceFallback) {
  auto u = sine();
  u.derivative = nullptr;
  u.horizon = 5.0;
  const auto f = make_stable(0.5);
  EXPECT_NEAR(cd_derivative(u, f, 1.0), cd_derivative(sine(), f, 1.0), 1e-6);
}

TEST(CdDerivative, DerivativeConsistentWithValue) {
  for (const auto& u : {linear(), square(), decay(), sine()}) {
    for (double t : {0.3, 1.0, 2.2}) {
      const double h = 1e-5;
      EXPECT_NEAR((u.value(t + h) - u.value(t - h)) / (2 * h), u.derivative(t), 1e-8);
    }
  }
}

TEST(CdDerivative, Errors) {
  const auto f = make_stable(0.5);
  EXPECT_THROW(cd_derivative(linear(), f, 0.0), std::domain_error);
  auto u = linear();
  u.horizon = 1.0;
  EXPECT_THROW(cd_derivative(u, f, 2.0), std::domain_error);
  QuadratureSpec q;
  q.grading_exponent = 1.0;
  EXPECT_THROW(cd_derivative(linear(), f, 1.0, q), std::invalid_argument);
  // nu(s) = s^{-1.2} / c is not integrable at 0.
  EXPECT_THROW(cd_derivative(linear(), make_custom(0.0, [](double s) { return 1.2 * std::pow(s, -2.2); }), 1.0),
               integrability_error);
  EXPECT_THROW(caputo_derivative(linear(), 1.0, 1.0), std::domain_error);
}

TEST(LaplaceIdentity, ConstantFunction) {
  const auto r = laplace_identity_residual(constant(1.0), make_stable(0.5), 1.0, 0.0);
  EXPECT_LE(r.residual, 1e-12);
  EXPECT_TRUE(r.truncation_sufficient);
}

TEST(LaplaceIdentity, Examples) {
  // e^{-t} is bounded by e^{0 t}; t is bounded by e^{1 t}.
  const auto r1 = laplace_identity_residual(decay(), make_stable(0.5), 2.0, 0.0, {1.0, 0.0});
  EXPECT_LE(r1.residual, 1e-6);
  EXPECT_TRUE(r1.truncation_sufficient);
  const auto r2 = laplace_identity_residual(linear(), make_tempered_stable(0.5, 1.0), 3.0, 0.0, {1.0, 1.0});
  EXPECT_LE(r2.residual, 1e-6);
  EXPECT_TRUE(r2.truncation_sufficient);
}

TEST(LaplaceIdentity, ShortHorizonFlagsTruncation) {
  const auto r = laplace_identity_residual(decay(), make_stable(0.5), 2.0, 0.5, {1.0, 0.0});
  EXPECT_FALSE(r.truncation_sufficient);
  EXPECT_THROW(laplace_identity_residual(linear(), make_stable(0.5), 0.5, 0.0, {1.0, 1.0}), std::domain_error);
}
