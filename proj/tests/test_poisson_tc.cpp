#include <gtest/gtest.h>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "subord/poisson_tc.hpp"

using namespace subord;

namespace {

const InverseSubordinatorLaw& law_of(double alpha) {
  static const InverseSubordinatorLaw l3(make_stable(0.3)), l5(make_stable(0.5)), l8(make_stable(0.8));
  return alpha == 0.3 ? l3 : alpha == 0.5 ? l5 : l8;
}

const InverseSubordinatorLaw& tempered() {
  static const InverseSubordinatorLaw l(make_tempered_stable(0.5, 1.0));
  return l;
}

TimeChangedPoissonLaw homogeneous(double lambda, const InverseSubordinatorLaw& law) {
  return TimeChangedPoissonLaw(IntensityFunction::homogeneous(lambda), law);
}

// Sum_{x >= n} p_x from a pmf vector that reaches the normalisation cutoff.
double upper_sum(const std::valarray<double>& p, int n) {
  double s = 0;
  for (std::size_t x = n; x < p.size(); ++x) s += p[x];
  return s;
}

}  // namespace

TEST(Intensity, HomogeneousIsExact) {
  const auto I = IntensityFunction::homogeneous(2.5);
  EXPECT_EQ(I.cumulative(0.3, 1.7), 2.5 * (1.7 - 0.3));
  EXPECT_EQ(I.cumulative(2.0), 5.0);
  EXPECT_TRUE(I.is_homogeneous());
  EXPECT_EQ(I.constant_rate(), 2.5);
}

TEST(Intensity, AdditivityAndNonnegativity) {
  const std::vector<IntensityFunction> all{
      IntensityFunction::one_plus_sin_squared(),
      IntensityFunction::tabulated({0.0, 1.0, 2.0, 5.0}, {1.0, 3.0, 0.5, 2.0}),
      IntensityFunction::from_functions("exp", [](double t) { return std::exp(-t) + 0.2; }, nullptr)};
  for (const auto& I : all) {
    for (double s : {0.0, 0.4, 1.3}) {
      for (double t : {1.5, 2.2}) {
        for (double w : {2.5, 4.0}) {
          EXPECT_GE(I.cumulative(s, t), 0.0);
          EXPECT_NEAR(I.cumulative(s, t) + I.cumulative(t, w), I.cumulative(s, w), 1e-10) << I.describe();
        }
      }
    }
  }
  // Lambda(t) = 1.5 t - sin(2t)/4.
  EXPECT_NEAR(all[0].cumulative(1.2), 1.8 - std::sin(2.4) / 4, 1e-15);
  // Quadrature fallback against the exact primitive 1 - e^{-t} + 0.2 t.
  EXPECT_NEAR(all[2].cumulative(3.0), 1 - std::exp(-3.0) + 0.6, 1e-11);
  EXPECT_THROW(all[0].constant_rate(), std::domain_error);
}

TEST(Intensity, ArrivalConditions) {
  EXPECT_NO_THROW(IntensityFunction::one_plus_sin_squared().check_arrival_conditions());
  const auto bounded = IntensityFunction::from_functions(
      "decaying", [](double t) { return std::exp(-t); }, [](double t) { return 1 - std::exp(-t); });
  EXPECT_THROW(bounded.check_arrival_conditions(), std::domain_error);
}

TEST(BasePmf, Examples) {
  const auto I = IntensityFunction::homogeneous(2.0);
  EXPECT_NEAR(base_pmf(I, 0, 1.3, 0.4), std::exp(-2.6), 1e-15);
  const double ref = std::exp(-2.0) * 8.0 / 6.0;
  EXPECT_NEAR(ref, 0.1804470443, 1e-10);
  EXPECT_NEAR(base_pmf(I, 3, 1.0, 0.0), ref, 1e-15);
  EXPECT_NEAR(base_pmf(I, 3, 1.0, 0.0), boost::math::pdf(boost::math::poisson_distribution<>(2.0), 3), 1e-15);
  const auto J = IntensityFunction::one_plus_sin_squared();
  const double m = J.cumulative(0.5, 2.5);
  const long X = poisson_cutoff(m, 1e-14);
  double s = 0;
  for (long x = 0; x <= X; ++x) s += base_pmf(J, x, 2.0, 0.5);
  EXPECT_NEAR(s, 1.0, 1e-12);
  // Log-space evaluation deep in the tail.
  EXPECT_NEAR(std::log(poisson_pmf(900, 400.0)), -400.0 + 900 * std::log(400.0) - boost::math::lgamma(901.0), 1e-9);
}

TEST(Pmf, ZeroCountIsMittagLeffler) {
  for (double a : {0.3, 0.5, 0.8}) {
    const auto P = homogeneous(1.5, law_of(a));
    for (double t : {0.3, 1.0, 2.0}) EXPECT_NEAR(pmf(P, 0, t), oracle::mittag_leffler(a, 1.5 * std::pow(t, a)), 1e-9);
  }
}

TEST(Pmf, OneCountFromLambdaDerivative) {
  // p_1 = lambda (-d/dlambda) E_{1/2}(-lambda) at lambda = 1, Richardson on central differences.
  auto E = [](double l) { return oracle::mittag_leffler(0.5, l); };
  auto d = [&](double h) { return (E(1 + h) - E(1 - h)) / (2 * h); };
  const double h = 1e-2;
  const double deriv = (4 * d(h / 2) - d(h)) / 3;
  EXPECT_NEAR(pmf(homogeneous(1.0, law_of(0.5)), 1, 1.0), -deriv, 1e-8);
}

TEST(Pmf, NormalizedWithCertificates) {
  for (const InverseSubordinatorLaw* law : {&law_of(0.3), &law_of(0.5), &law_of(0.8), &tempered()}) {
    for (double lambda : {0.5, 2.0}) {
      const auto P = homogeneous(lambda, *law);
      for (double t : {0.5, 1.0, 2.0}) {
        const auto a = normalization(P, t);
        EXPECT_NEAR(a.sum, 1.0, 1e-5);
        EXPECT_LE(a.count_tail, 1e-8);
        EXPECT_LE(a.truncation, 1e-8);
        EXPECT_GT(a.certificate.u_max, 0.0);
      }
    }
  }
  const TimeChangedPoissonLaw Q(IntensityFunction::one_plus_sin_squared(), law_of(0.5));
  EXPECT_NEAR(normalization(Q, 1.0, 0.7).sum, 1.0, 1e-5);
}

TEST(Pmf, IncrementWithZeroShiftIsTheCountPmf) {
  const TimeChangedPoissonLaw Q(IntensityFunction::one_plus_sin_squared(), law_of(0.5));
  const auto a = pmf_vector(Q, 8, 1.3, 0.0), b = pmf_vector(Q, 8, 1.3);
  for (int x = 0; x <= 8; ++x) EXPECT_EQ(a[x], b[x]);
  EXPECT_EQ(pmf(Q, 3, 1.3), pmf(Q, 3, 1.3, 0.0));
  const auto z = pmf_vector(Q, 3, 0.0);
  EXPECT_EQ(z[0], 1.0);
  EXPECT_EQ(z[2], 0.0);
  EXPECT_THROW(pmf(Q, -1, 1.0), std::domain_error);
}

TEST(Residual, TheoremThreeLattice) {
  const std::vector<double> tg{0.2, 0.5, 1.0, 2.0, 3.0};
  const std::vector<int> xs{0, 1, 2, 3, 4, 5};
  for (const InverseSubordinatorLaw* law : {&law_of(0.3), &law_of(0.5), &law_of(0.8), &tempered()}) {
    for (double lambda : {0.5, 2.0}) {
      const auto rep = residual_homogeneous(homogeneous(lambda, *law), xs, tg);
      EXPECT_TRUE(rep.passed()) << law->bernstein().describe() << " lambda=" << lambda << " " << rep.max_residual();
    }
  }
}

TEST(Residual, ZeroCountBothSidesAreMittagLeffler) {
  const auto P = homogeneous(1.0, law_of(0.5));
  const auto rep = residual_homogeneous(P, {0}, {0.5, 1.5});
  for (const auto& e : rep.entries) {
    EXPECT_NEAR(e.rhs, -oracle::mittag_leffler(0.5, std::sqrt(e.t)), 1e-9);
    EXPECT_LE(e.residual, 1e-4);
  }
}

TEST(Residual, TheoremOneReducesToHomogeneousForm) {
  const auto P = homogeneous(2.0, tempered());
  const auto a = residual_thm1(P, {0, 1, 2}, {0.5, 1.5});
  const auto b = residual_homogeneous(P, {0, 1, 2}, {0.5, 1.5});
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].lhs, b.entries[i].lhs);
    EXPECT_NEAR(a.entries[i].rhs, b.entries[i].rhs, 1e-12);
  }
  EXPECT_LE(a.max_residual(), 1e-4);
}

TEST(Residual, TheoremOneNonHomogeneous) {
  const TimeChangedPoissonLaw Q(IntensityFunction::one_plus_sin_squared(), law_of(0.5));
  ResidualOptions opt;
  opt.tolerance = 1e-3;
  EXPECT_TRUE(residual_thm1(Q, {0, 1, 2}, {0.2, 0.5, 1.0, 2.0, 3.0}, 0.0, opt).passed());
  EXPECT_TRUE(residual_thm1(Q, {0, 1, 2}, {0.5, 1.0, 2.0}, 0.7, opt).passed());
}

TEST(Moments, StableMean) {
  const auto P = homogeneous(1.0, law_of(0.5));
  EXPECT_NEAR(moment(P, 1, 1.0), 1.0 / boost::math::tgamma(1.5), 1e-6);
  EXPECT_NEAR(1.0 / boost::math::tgamma(1.5), 1.1283791671, 1e-10);
  const auto Q = homogeneous(2.0, law_of(0.8));
  EXPECT_NEAR(moment(Q, 1, 2.0), 2.0 * oracle::stable_inverse_moment(0.8, 2.0, 1), 1e-6);
}

TEST(Moments, AgainstBruteForceSums) {
  const TimeChangedPoissonLaw Q(IntensityFunction::one_plus_sin_squared(), tempered());
  for (const TimeChangedPoissonLaw* P : {&Q}) {
    for (double t : {0.5, 1.0}) {
      const auto a = normalization(*P, t);
      const auto p = pmf_vector(*P, a.cutoff, t);
      for (int k = 1; k <= 4; ++k) {
        double s = 0;
        for (std::size_t x = 0; x < p.size(); ++x) s += std::pow(static_cast<double>(x), k) * p[x];
        EXPECT_NEAR(moment(*P, k, t), s, 1e-5 * std::max(1.0, s)) << k;
      }
    }
  }
  const auto P = homogeneous(0.5, law_of(0.3));
  const auto a = normalization(P, 1.0);
  const auto p = pmf_vector(P, a.cutoff, 1.0);
  double s1 = 0, s2 = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    s1 += x * p[x];
    s2 += static_cast<double>(x * x) * p[x];
  }
  EXPECT_NEAR(moment(P, 1, 1.0), s1, 1e-5);
  EXPECT_NEAR(moment(P, 2, 1.0), s2, 1e-5);
  EXPECT_THROW(moment(P, 7, 1.0), std::domain_error);
}

TEST(Moments, SecondMomentIdentity) {
  // E N^2 = E Lambda(Y) + E Lambda(Y)^2.
  const TimeChangedPoissonLaw Q(IntensityFunction::one_plus_sin_squared(), law_of(0.5));
  const auto g = law_of(0.5).master_grid(1.5);
  const double m1 = g.integrate([&](double u) { return Q.intensity().cumulative(u); });
  const double m2 = g.integrate([&](double u) { return std::pow(Q.intensity().cumulative(u), 2); });
  EXPECT_NEAR(moment(Q, 1, 1.5), m1, 1e-12);
  EXPECT_NEAR(moment(Q, 2, 1.5), m1 + m2, 1e-12);
}

TEST(Moments, VarianceFromMittagLefflerDerivatives) {
  // lambda E Y + lambda^2 Var Y, E Y^k = k! t^{k a} / Gamma(1 + k a).
  const double a = 0.5, t = 1.0, l = 1.0;
  const double ey = oracle::stable_inverse_moment(a, t, 1), ey2 = oracle::stable_inverse_moment(a, t, 2);
  EXPECT_NEAR(variance(homogeneous(l, law_of(0.5)), t), l * ey + l * l * (ey2 - ey * ey), 1e-9);
}

TEST(Covariance, DiagonalIsVariance) {
  const auto P = homogeneous(1.0, law_of(0.5));
  CovarianceOptions opt;
  opt.n_paths = 20000;
  const auto c = covariance(P, 1.0, 1.0, opt);
  EXPECT_NEAR(c.value, variance(P, 1.0), 3 * c.standard_error + 1e-3);
}

TEST(Covariance, NonnegativeAndBounded) {
  const auto P = homogeneous(1.0, law_of(0.5));
  CovarianceOptions opt;
  opt.n_paths = 20000;
  for (auto [s, t] : {std::pair{0.5, 2.0}, std::pair{2.0, 0.5}, std::pair{1.0, 2.0}}) {
    const auto c = covariance(P, s, t, opt);
    EXPECT_GE(c.value - 3 * c.standard_error, 0.0) << s << " " << t;
    EXPECT_LE(c.lambda_covariance, c.cauchy_schwarz_bound + 3 * c.standard_error);
    EXPECT_LE(c.value, std::sqrt(variance(P, s) * variance(P, t)) + 3 * c.standard_error);
  }
  const auto a = covariance(P, 0.5, 2.0, opt), b = covariance(P, 2.0, 0.5, opt);
  EXPECT_EQ(a.value, b.value);
}

TEST(Mgf, Examples) {
  const auto P = homogeneous(1.0, law_of(0.5));
  EXPECT_EQ(mgf(P, 0.0, 1.0), 1.0);
  EXPECT_EQ(mgf(P, -0.7, 0.0), 1.0);
  for (double th : {-2.0, -1.0, -0.25}) {
    EXPECT_NEAR(mgf(P, th, 1.3), oracle::mittag_leffler(0.5, (1 - std::exp(th)) * std::sqrt(1.3)), 1e-9);
  }
  EXPECT_THROW(mgf(P, 0.3, 1.0), std::domain_error);
  // Best-effort positive theta: the pole moves right of the origin.
  const double pos = mgf(P, 0.2, 1.0, true);
  EXPECT_GT(pos, 1.0);
  const auto pmfs = pmf_vector(P, normalization(P, 1.0).cutoff, 1.0);
  double direct = 0;
  for (std::size_t x = 0; x < pmfs.size(); ++x) direct += std::exp(0.2 * x) * pmfs[x];
  EXPECT_NEAR(pos, direct, 1e-6);
}

TEST(Mgf, GeneralExponent) {
  const auto P = homogeneous(1.7, tempered());
  auto poisson_fx = [](double y) { return 1.7 * (1 - std::exp(-y)); };
  for (double th : {-1.5, -0.2}) EXPECT_NEAR(mgf_general(tempered(), poisson_fx, th, 0.9), mgf(P, th, 0.9), 1e-14);
  // Deterministic drift c: M = E e^{theta c Y}.
  const double c = 0.6;
  const auto g = tempered().master_grid(1.2);
  double prev = 0;
  for (double th : {-3.0, -1.0, -0.1}) {
    const double m = mgf_general(tempered(), [c](double y) { return c * y; }, th, 1.2);
    EXPECT_NEAR(m, g.integrate([&](double u) { return std::exp(th * c * u); }), 1e-8);
    EXPECT_GT(m, prev);
    prev = m;
  }
}

TEST(Mgf, EquationResidual) {
  for (const InverseSubordinatorLaw* law : {&law_of(0.5), &tempered()}) {
    const auto rep = residual_mgf(homogeneous(1.0, *law), {-2.0, -1.0, -0.5, -0.1}, {0.2, 0.5, 1.0, 2.0, 3.0});
    EXPECT_TRUE(rep.passed()) << rep.max_residual();
  }
}

TEST(Arrivals, FirstArrivalIsEmptyCount) {
  const auto P = homogeneous(1.0, law_of(0.5));
  EXPECT_NEAR(arrival_cdf(P, 1, 1.0), 1.0 - pmf(P, 0, 1.0), 1e-12);
  EXPECT_NEAR(arrival_cdf(P, 1, 1.0), 0.5724164238, 1e-9);
}

TEST(Arrivals, CountDuality) {
  for (const InverseSubordinatorLaw* law : {&law_of(0.3), &law_of(0.8), &tempered()}) {
    const auto P = homogeneous(2.0, *law);
    for (double t : {0.5, 1.0, 2.0}) {
      const auto p = pmf_vector(P, normalization(P, t).cutoff, t);
      for (int n = 1; n <= 3; ++n) {
        EXPECT_NEAR(arrival_cdf(P, n, t), upper_sum(p, n), 1e-5);
        EXPECT_NEAR(arrival_cdf_by_derivatives(P, n, t), upper_sum(p, n), 1e-5);
      }
    }
  }
  const TimeChangedPoissonLaw Q(IntensityFunction::one_plus_sin_squared(), law_of(0.5));
  const auto p = pmf_vector(Q, normalization(Q, 1.0).cutoff, 1.0);
  for (int n = 1; n <= 3; ++n) EXPECT_NEAR(arrival_cdf(Q, n, 1.0), upper_sum(p, n), 1e-5);
  EXPECT_THROW(arrival_cdf_by_derivatives(Q, 1, 1.0), std::domain_error);
}

TEST(Arrivals, DistributionFunctionShape) {
  const auto P = homogeneous(1.0, tempered());
  double prev = 0;
  for (double t : {1e-6, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0, 1e4}) {
    const double F = arrival_cdf(P, 2, t);
    EXPECT_GE(F, prev - 1e-14);
    prev = F;
  }
  EXPECT_LT(arrival_cdf(P, 2, 1e-6), 1e-3);
  EXPECT_GT(prev, 0.99);
}

TEST(Arrivals, LambdaDerivativesOfMittagLeffler) {
  // d^k/dlambda^k E_a(-lambda t^a) at lambda = 1 against differences of the oracle.
  const double a = 0.5, t = 1.0;
  auto E = [&](double l) { return oracle::mittag_leffler(a, l * std::pow(t, a)); };
  const double h = 1e-2;
  const double d1 = (E(1 - 2 * h) - 8 * E(1 - h) + 8 * E(1 + h) - E(1 + 2 * h)) / (12 * h);
  EXPECT_NEAR(laplace_lambda_derivative(law_of(0.5), t, 1.0, 1, 0.05), d1, 1e-7);
}
