#ifndef SUBORD_QUADRATURE_HPP
#define SUBORD_QUADRATURE_HPP

// Quadrature rules shared by the library: Gauss-Legendre tables, Gauss-Jacobi
// rules (Golub-Welsch), double-exponential rules for endpoint singularities and
// infinite ranges, and an adaptive Gauss-Kronrod integrator for peaked integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "subord/gamma.hpp"

namespace subord::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

template <class T>
struct Integral {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

inline Rule compute_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

inline constexpr int max_gl_order = 64;

// Implicit QL on a symmetric tridiagonal matrix; tracks the first row of the
// eigenvector matrix only (all Golub-Welsch needs).
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-17 * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("tridiagonal_ql: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Gauss-Legendre rule on [-1, 1] with n points (1 <= n <= 64); tables are built once.
inline const Rule& gauss_legendre(int n) {
  static const std::vector<Rule> table = [] {
    std::vector<Rule> t(detail::max_gl_order + 1);
    for (int k = 1; k <= detail::max_gl_order; ++k) t[k] = detail::compute_gauss_legendre(k);
    return t;
  }();
  if (n < 1 || n > detail::max_gl_order) throw std::invalid_argument("gauss_legendre: order out of range");
  return table[n];
}

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1.
inline Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n >= 1 required");
  if (a <= -1.0 || b <= -1.0) throw std::domain_error("gauss_jacobi: exponents must exceed -1");
  std::vector<double> d(n), e(n, 0.0), z(n, 0.0);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    d[k] = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / den;
  }
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    const double c = 2.0 * kk + ab;
    double beta;
    if (k == 1)
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (c * c * (c + 1.0) * (c - 1.0));
    e[k - 1] = std::sqrt(beta);
  }
  z[0] = 1.0;
  detail::tridiagonal_ql(d, e, z);
  const double mu0 = std::exp((ab + 1.0) * std::numbers::ln2 + log_gamma(a + 1.0) + log_gamma(b + 1.0) -
                              log_gamma(ab + 2.0));
  std::vector<std::size_t> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = d[idx[i]];
    r.weights[i] = mu0 * z[idx[i]] * z[idx[i]];
  }
  return r;
}

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels of `order` points.
template <class F>
auto composite_gauss_legendre(F&& f, double a, double b, int panels, int order) {
  using T = std::decay_t<decltype(f(a))>;
  const Rule& g = gauss_legendre(order);
  const double h = (b - a) / panels;
  T sum{};
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) sum += (0.5 * h * g.weights[i]) * f(lo + 0.5 * h * (g.nodes[i] + 1.0));
  }
  return sum;
}

/// Tanh-sinh rule on [a, b]; handles integrable algebraic singularities at either end.
/// Nodes near the endpoints are formed from their distance to the endpoint so that
/// an integrand like s^{-0.9} at a = 0 is sampled down to ~1e-300.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0, int max_level = 12) {
  using T = std::decay_t<decltype(f(a))>;
  Integral<T> out;
  if (a == b) return out;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  constexpr double tmax = 6.5;
  auto node = [&](double t, double& x, double& w) -> bool {
    const double y = 0.5 * std::numbers::pi * std::sinh(std::fabs(t));
    const double em = std::exp(-2.0 * y);
    if (em == 0.0) return false;
    const double delta = 2.0 * em / (1.0 + em);
    w = half * 2.0 * std::numbers::pi * std::cosh(t) * em / ((1.0 + em) * (1.0 + em));
    x = (t < 0.0) ? a + half * delta : (t > 0.0 ? b - half * delta : mid);
    if (t == 0.0) w = half * 0.5 * std::numbers::pi;
    return x != a && x != b && w > 0.0;
  };
  double h = 1.0;
  T sum{};
  {
    double x, w;
    for (int j = -static_cast<int>(tmax); j <= static_cast<int>(tmax); ++j)
      if (node(j, x, w)) {
        sum += w * f(x);
        ++out.evaluations;
      }
  }
  T prev = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    T add{};
    double x, w;
    for (double t = h; t <= tmax; t += 2.0 * h) {
      if (node(t, x, w)) {
        add += w * f(x);
        ++out.evaluations;
      }
      if (node(-t, x, w)) {
        add += w * f(x);
        ++out.evaluations;
      }
    }
    sum += add;
    const T cur = sum * h;
    out.error = std::abs(cur - prev);
    out.value = cur;
    if (level >= 3 && out.error <= std::max(abs_tol, rel_tol * std::abs(cur))) return out;
    prev = cur;
  }
  return out;
}

/// Exp-sinh rule on [a, inf); suited to integrands with an endpoint singularity at a
/// and algebraic or exponential decay at infinity.
template <class F>
auto exp_sinh(F&& f, double a, double rel_tol = 1e-12, double abs_tol = 0.0, int max_level = 12) {
  using T = std::decay_t<decltype(f(a))>;
  Integral<T> out;
  constexpr double tlo = -6.2, thi = 6.0;
  auto eval = [&](double t) -> T {
    const double e = std::exp(0.5 * std::numbers::pi * std::sinh(t));
    if (e == 0.0 || !std::isfinite(e)) return T{};
    const double x = a + e;
    if (x == a) return T{};
    const double w = 0.5 * std::numbers::pi * std::cosh(t) * e;
    ++out.evaluations;
    const T v = f(x);
    return w * v;
  };
  double h = 1.0;
  T sum{};
  for (int j = static_cast<int>(tlo); j <= static_cast<int>(thi); ++j) sum += eval(j);
  T prev = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    T add{};
    const double first = std::ceil(tlo / h);
    for (double k = first; k * h <= thi; k += 1.0) {
      if (std::fmod(std::fabs(k), 2.0) != 1.0) continue;
      add += eval(k * h);
    }
    sum += add;
    const T cur = sum * h;
    out.error = std::abs(cur - prev);
    out.value = cur;
    if (level >= 3 && out.error <= std::max(abs_tol, rel_tol * std::abs(cur))) return out;
    prev = cur;
  }
  return out;
}

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kronrod_w[7];
  double g = fc * gauss7_w[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kronrod_x[j];
    const double s = f(c - x) + f(c + x);
    k += kronrod_w[j] * s;
    if (j % 2 == 1) g += gauss7_w[j / 2] * s;
  }
  return {k * h, std::fabs((k - g) * h)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) with interval bisection, driven by a global error budget.
template <class F>
Integral<double> gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0,
                               int max_intervals = 2000) {
  struct Piece {
    double a, b, value, error;
  };
  std::vector<Piece> pieces;
  auto [v0, e0] = detail::gk15(f, a, b);
  pieces.push_back({a, b, v0, e0});
  Integral<double> out;
  out.evaluations = 15;
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      total += pieces[i].value;
      err += pieces[i].error;
      if (pieces[i].error > pieces[worst].error) worst = i;
    }
    out.value = total;
    out.error = err;
    if (err <= std::max(abs_tol, rel_tol * std::fabs(total)) || static_cast<int>(pieces.size()) >= max_intervals)
      return out;
    const Piece p = pieces[worst];
    const double m = 0.5 * (p.a + p.b);
    auto [vl, el] = detail::gk15(f, p.a, m);
    auto [vr, er] = detail::gk15(f, m, p.b);
    out.evaluations += 30;
    pieces[worst] = {p.a, m, vl, el};
    pieces.push_back({m, p.b, vr, er});
  }
}

}  // namespace subord::quad

#endif  // SUBORD_QUADRATURE_HPP
