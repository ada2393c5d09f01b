#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include "subord/gamma.hpp"
#include "subord/grid_function.hpp"
#include "subord/parallel.hpp"
#include "subord/quadrature.hpp"
#include "subord/random.hpp"
#include "subord/residual_report.hpp"

using namespace subord;

// Known-answer vectors from the Random123 distribution (kat_vectors, philox4x32_10).
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::counter_type;
  using K = Philox4x32::key_type;
  EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, K{0xffffffffu, 0xffffffffu}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamsAreDeterministicAndDistinct) {
  Philox4x32 a(11, 3), b(11, 3), c(11, 4), d(12, 3);
  std::set<std::uint32_t> firsts;
  for (int i = 0; i < 16; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    if (i == 0) {
      firsts.insert(x);
      firsts.insert(c());
      firsts.insert(d());
    }
  }
  EXPECT_EQ(firsts.size(), 3u);
}

TEST(Philox, UniformMoments) {
  Philox4x32 eng(5, 0);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = uniform_open(eng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 4.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST(Sampler, StableIncrementLaplaceTransform) {
  // E e^{-s S} = e^{-dt s^alpha}.
  Philox4x32 eng(9, 1);
  const int n = 200000;
  for (double alpha : {0.3, 0.7}) {
    double acc = 0, acc2 = 0;
    for (int i = 0; i < n; ++i) {
      const double v = std::exp(-stable_increment(alpha, 0.5, eng));
      acc += v;
      acc2 += v * v;
    }
    const double m = acc / n, se = std::sqrt((acc2 / n - m * m) / n);
    EXPECT_NEAR(m, std::exp(-0.5), 4.0 * se) << alpha;
  }
}

TEST(Sampler, TemperedIncrementLaplaceTransform) {
  Philox4x32 eng(9, 2);
  const int n = 200000;
  const double alpha = 0.5, beta = 1.0, dt = 0.7;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-tempered_stable_increment(alpha, beta, dt, eng));
    acc += v;
    acc2 += v * v;
  }
  const double m = acc / n, se = std::sqrt((acc2 / n - m * m) / n);
  EXPECT_NEAR(m, std::exp(-dt * (std::sqrt(2.0) - 1.0)), 4.0 * se);
}

TEST(Sampler, RejectionGuard) {
  Philox4x32 eng(1, 1);
  EXPECT_THROW(tempered_stable_increment(0.5, 1e6, 1.0, eng, 10), sampler_error);
}

TEST(Gamma, AgainstBoost) {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 7.3, 30.0, 170.5}) {
    EXPECT_NEAR(log_gamma(x), boost::math::lgamma(x), 1e-12 * std::max(1.0, std::fabs(boost::math::lgamma(x)))) << x;
  }
  for (double x : {0.3, 0.5, 1.5, 4.2, -0.5, -1.5}) {
    EXPECT_NEAR(gamma_fn(x) / boost::math::tgamma(x), 1.0, 1e-12) << x;
  }
  for (double a : {0.5, 1.0, 3.0, 12.0}) {
    for (double x : {0.01, 0.7, 3.0, 11.0, 40.0}) {
      EXPECT_NEAR(gamma_p(a, x), boost::math::gamma_p(a, x), 1e-12) << a << " " << x;
      EXPECT_NEAR(gamma_q(a, x), boost::math::gamma_q(a, x), 1e-12) << a << " " << x;
    }
  }
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  for (int n : {3, 10, 24}) {
    const auto& r = quad::gauss_legendre(n);
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
    EXPECT_NEAR(s, 2.0 / (2 * n - 1), 1e-14) << n;
  }
}

TEST(Quadrature, GaussJacobiWeight) {
  // int_{-1}^{1} (1-x)^{-0.4} x^2 dx.
  const auto r = quad::gauss_jacobi(12, -0.4, 0.0);
  double s = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * r.nodes[i] * r.nodes[i];
  // With y = 1 - x: int_0^2 y^{-0.4} (1-y)^2 dy in closed form.
  const double ref = std::pow(2.0, 0.6) / 0.6 - 2 * std::pow(2.0, 1.6) / 1.6 + std::pow(2.0, 2.6) / 2.6;
  EXPECT_NEAR(s, ref, 1e-9);
}

TEST(Quadrature, AdaptiveRules) {
  EXPECT_NEAR(quad::tanh_sinh([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, 1e-12).value, 10.0, 1e-8);
  EXPECT_NEAR(quad::exp_sinh([](double x) { return std::exp(-x) / std::sqrt(x); }, 0.0, 1e-12).value,
              std::sqrt(std::numbers::pi), 1e-10);
  EXPECT_NEAR(quad::gauss_kronrod([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13).value, 2.0,
              1e-12);
  const double c = quad::composite_gauss_legendre([](double x) { return std::exp(x); }, 0.0, 2.0, 8, 10);
  EXPECT_NEAR(c, std::exp(2.0) - 1.0, 1e-13);
}

TEST(GridFunction, InterpolatesAndStaysMonotone) {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(i * 0.25);
    y.push_back(1.0 - std::exp(-x.back()));
  }
  GridFunction g(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(g(x[i]), y[i]);
  double prev = -1.0;
  for (double s = 0.0; s <= 5.0; s += 0.01) {
    const double v = g(s);
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_NEAR(v, 1.0 - std::exp(-s), 1e-3);
    prev = v;
  }
  EXPECT_EQ(g(-1.0), 0.0);
  EXPECT_EQ(g(6.0), 0.0);
  // Trapezoid error is about h^2/12 |f'(5) - f'(0)| = 5.2e-3.
  EXPECT_NEAR(g.integral(), 5.0 - (1.0 - std::exp(-5.0)), 6e-3);
}

TEST(GridFunction, StepDataDoesNotOvershoot) {
  GridFunction g({0, 1, 2, 3, 4}, {0, 0, 1, 1, 1});
  for (double s = 0; s <= 4; s += 0.05) {
    EXPECT_GE(g(s), 0.0);
    EXPECT_LE(g(s), 1.0 + 1e-15);
  }
}

TEST(GridFunction, RejectsBadGrids) {
  EXPECT_THROW(GridFunction({0, 1}, {0}), std::invalid_argument);
  EXPECT_THROW(GridFunction({0, 0}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(GridFunction({}, {}), std::invalid_argument);
}

TEST(ResidualReport, ToleranceSemantics) {
  ResidualReport r;
  r.tolerance = 1e-3;
  EXPECT_FALSE(r.passed());
  r.add(1.0, "x=0", 1.0, 1.0005);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.max_residual(), 5e-4, 1e-15);
  r.add(2.0, "x=0", 0.0, std::nan(""));
  EXPECT_FALSE(r.passed());
}

TEST(Parallel, ResultIndependentOfWorkerCount) {
  auto run = [](int workers) {
    std::vector<double> part(38);  // ceil(1000 / 27) chunks
    parallel_chunks(1000, 27, workers, [&](std::size_t c, std::size_t b, std::size_t e) {
      double s = 0;
      for (std::size_t i = b; i < e; ++i) s += 1.0 / (1.0 + static_cast<double>(i));
      part[c] = s;
    });
    return std::accumulate(part.begin(), part.end(), 0.0);
  };
  const double one = run(1);
  EXPECT_EQ(one, run(3));
  EXPECT_EQ(one, run(8));
}

TEST(Parallel, MapAndExceptions) {
  const auto v = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_chunks(10, 1, 3,
                               [](std::size_t c, std::size_t, std::size_t) {
                                 if (c == 4) throw std::runtime_error("boom");
                               }),
               std::runtime_error);
}

TEST(Parallel, EnvironmentWorkerCount) {
  setenv("SUBORD_THREADS", "3", 1);
  EXPECT_EQ(default_worker_count(), 3);
  setenv("SUBORD_THREADS", "junk", 1);
  EXPECT_GE(default_worker_count(), 1);
  unsetenv("SUBORD_THREADS");
}
