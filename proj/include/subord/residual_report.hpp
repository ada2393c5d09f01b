#ifndef SUBORD_RESIDUAL_REPORT_HPP
#define SUBORD_RESIDUAL_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace subord {

struct ResidualEntry {
  double t = 0.0;
  std::string label;  // lattice coordinate other than t, e.g. "x=2" or "theta=-0.5"
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Residual magnitudes |lhs - rhs| of one governing equation over a test lattice.
struct ResidualReport {
  std::string equation;
  double tolerance = 0.0;
  std::vector<ResidualEntry> entries;

  void add(double t, std::string label, double lhs, double rhs) {
    entries.push_back({t, std::move(label), lhs, rhs, std::fabs(lhs - rhs)});
  }

  double max_residual() const {
    double m = 0.0;
    for (const auto& e : entries) {
      if (std::isnan(e.residual)) return e.residual;
      m = std::max(m, e.residual);
    }
    return m;
  }

  bool passed() const {
    const double m = max_residual();
    return !entries.empty() && !std::isnan(m) && m <= tolerance;
  }

  void merge(const ResidualReport& other) { entries.insert(entries.end(), other.entries.begin(), other.entries.end()); }
};

}  // namespace subord

#endif  // SUBORD_RESIDUAL_REPORT_HPP
