#ifndef SUBORD_GRID_FUNCTION_HPP
#define SUBORD_GRID_FUNCTION_HPP

// A real function sampled on a strictly increasing, possibly non-uniform grid.
//
// Interpolation contract: inside [front, back] values come from the monotone
// piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes), so the
// interpolant reproduces the samples exactly, never overshoots between two
// samples, and is C^1. Outside the grid the function is `outside_value`
// (0 by default, which suits densities and truncated probability curves).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subord {

class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(std::vector<double> nodes, std::vector<double> values, std::vector<double> weights = {},
               double outside_value = 0.0)
      : nodes_(std::move(nodes)), values_(std::move(values)), weights_(std::move(weights)), outside_(outside_value) {
    if (nodes_.size() != values_.size()) throw std::invalid_argument("GridFunction: nodes and values differ in size");
    if (!weights_.empty() && weights_.size() != nodes_.size())
      throw std::invalid_argument("GridFunction: weights and nodes differ in size");
    if (nodes_.empty()) throw std::invalid_argument("GridFunction: empty grid");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("GridFunction: nodes must be strictly increasing");
    build_slopes();
  }

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

  double operator()(double x) const {
    if (x < nodes_.front() || x > nodes_.back() || std::isnan(x)) return outside_;
    if (nodes_.size() == 1) return values_.front();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t i = (it == nodes_.end()) ? nodes_.size() - 2 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double h = nodes_[i + 1] - nodes_[i];
    const double s = (x - nodes_[i]) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
  }

  /// Integral over the grid: the attached quadrature weights when present,
  /// otherwise the trapezoidal rule.
  double integral() const {
    double sum = 0.0;
    if (!weights_.empty()) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * values_[i];
      return sum;
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      sum += 0.5 * (nodes_[i] - nodes_[i - 1]) * (values_[i] + values_[i - 1]);
    return sum;
  }

 private:
  void build_slopes() {
    const std::size_t n = nodes_.size();
    slopes_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (values_[i + 1] - values_[i]) / (nodes_[i + 1] - nodes_[i]);
    if (n == 2) {
      slopes_[0] = slopes_[1] = delta[0];
      return;
    }
    slopes_[0] = end_slope(nodes_[1] - nodes_[0], nodes_[2] - nodes_[1], delta[0], delta[1]);
    slopes_[n - 1] =
        end_slope(nodes_[n - 1] - nodes_[n - 2], nodes_[n - 2] - nodes_[n - 3], delta[n - 2], delta[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slopes_[i] = 0.0;
        continue;
      }
      // Weighted harmonic mean (Fritsch-Butland) keeps the interpolant monotone.
      const double h0 = nodes_[i] - nodes_[i - 1], h1 = nodes_[i + 1] - nodes_[i];
      const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
      slopes_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
    }
  }

  // Three-point end slope, clipped so the end intervals stay monotone.
  static double end_slope(double h0, double h1, double d0, double d1) {
    const double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::fabs(d) > 3.0 * std::fabs(d0)) return 3.0 * d0;
    return d;
  }

  std::vector<double> nodes_, values_, weights_, slopes_;
  double outside_ = 0.0;
};

}  // namespace subord

#endif  // SUBORD_GRID_FUNCTION_HPP
