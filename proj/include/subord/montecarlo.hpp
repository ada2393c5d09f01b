#ifndef SUBORD_MONTECARLO_HPP
#define SUBORD_MONTECARLO_HPP

// Path simulation of N(Y(t)) and S(Y(t)) and comparison with quadrature laws.
//
// Path i draws from Philox stream (master_seed, i): one subordinator path serves
// every checkpoint, and counts grow by conditionally Poisson increments between
// consecutive first-passage levels. Histograms are therefore identical for any
// worker count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "subord/errors.hpp"
#include "subord/gamma.hpp"
#include "subord/inverse_subordinator.hpp"
#include "subord/parallel.hpp"
#include "subord/poisson_tc.hpp"
#include "subord/random.hpp"
#include "subord/skellam_tc.hpp"

namespace subord {

struct SimulationPlan {
  std::uint64_t master_seed = 1;
  long n_paths = 100000;
  std::vector<double> t_checkpoints{1.0};
  double step = 0.0;  // 0: default_step at the last checkpoint
  int worker_count = 0;  // 0: default_worker_count()

  void validate() const {
    if (n_paths < 1) throw std::invalid_argument("SimulationPlan: n_paths must be >= 1");
    if (t_checkpoints.empty()) throw std::invalid_argument("SimulationPlan: no checkpoints");
    for (std::size_t i = 0; i < t_checkpoints.size(); ++i) {
      if (!(t_checkpoints[i] > 0.0) || !std::isfinite(t_checkpoints[i]))
        throw std::invalid_argument("SimulationPlan: checkpoints must be finite and > 0");
      if (i > 0 && !(t_checkpoints[i] > t_checkpoints[i - 1]))
        throw std::invalid_argument("SimulationPlan: checkpoints must be strictly increasing");
    }
    if (step < 0.0 || !std::isfinite(step)) throw std::invalid_argument("SimulationPlan: step must be >= 0");
    if (worker_count < 0) throw std::invalid_argument("SimulationPlan: worker_count must be >= 0");
  }
};

/// Counts of integer outcomes.
struct Histogram {
  std::map<long, long> counts;

  long total() const {
    long n = 0;
    for (const auto& [k, c] : counts) n += c;
    return n;
  }
  long count(long k) const {
    const auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  }
};

struct EmpiricalLaw {
  std::vector<double> checkpoints;
  std::vector<Histogram> histograms;  // one per checkpoint
  long n_paths = 0;
  double step = 0.0;

  double frequency(std::size_t c, long k) const {
    return static_cast<double>(histograms.at(c).count(k)) / static_cast<double>(n_paths);
  }
  /// CLT half-width z sqrt(p(1-p)/n) of a bin frequency.
  double half_width(std::size_t c, long k, double z = 3.0) const {
    const double p = frequency(c, k);
    return z * std::sqrt(p * (1.0 - p) / static_cast<double>(n_paths));
  }
  double mean(std::size_t c) const {
    double s = 0.0;
    for (const auto& [k, n] : histograms.at(c).counts) s += static_cast<double>(k) * n;
    return s / n_paths;
  }
  /// k-th central moment (k >= 2).
  double central_moment(std::size_t c, int k) const {
    const double m = mean(c);
    double s = 0.0;
    for (const auto& [x, n] : histograms.at(c).counts) s += std::pow(x - m, k) * n;
    return s / n_paths;
  }
  double variance(std::size_t c) const { return central_moment(c, 2); }
  /// Standard error of the sample mean.
  double mean_standard_error(std::size_t c) const { return std::sqrt(variance(c) / n_paths); }
  double skewness(std::size_t c) const {
    const double v = variance(c);
    return v > 0.0 ? central_moment(c, 3) / std::pow(v, 1.5) : 0.0;
  }
  /// Rough standard error of the sample skewness, sqrt(6/n).
  double skewness_standard_error() const { return std::sqrt(6.0 / n_paths); }
};

namespace detail {

// Runs n paths; `sample(eng, levels, out)` fills one value per checkpoint from the
// first-passage levels of that path.
template <class Sample>
EmpiricalLaw simulate_paths(const InverseSubordinatorLaw& law, const SimulationPlan& plan, Sample&& sample) {
  plan.validate();
  EmpiricalLaw emp;
  emp.checkpoints = plan.t_checkpoints;
  emp.n_paths = plan.n_paths;
  emp.step = plan.step > 0.0 ? plan.step : default_step(law, plan.t_checkpoints.back());
  const IncrementSampler inc(law.bernstein(), emp.step);
  const std::size_t n = static_cast<std::size_t>(plan.n_paths);
  const std::size_t nc = plan.t_checkpoints.size();
  constexpr std::size_t chunk = 8192;
  std::vector<std::vector<Histogram>> partial((n + chunk - 1) / chunk, std::vector<Histogram>(nc));
  const int workers = plan.worker_count > 0 ? plan.worker_count : default_worker_count();
  parallel_chunks(n, chunk, workers, [&](std::size_t c, std::size_t beg, std::size_t end) {
    std::vector<double> levels;
    std::vector<long> values(nc);
    for (std::size_t i = beg; i < end; ++i) {
      Philox4x32 eng(plan.master_seed, i);
      simulate_first_passages(inc, plan.t_checkpoints, eng, levels);
      sample(eng, levels, values);
      for (std::size_t j = 0; j < nc; ++j) ++partial[c][j].counts[values[j]];
    }
  });
  emp.histograms.assign(nc, Histogram{});
  for (const auto& part : partial)
    for (std::size_t j = 0; j < nc; ++j)
      for (const auto& [k, cnt] : part[j].counts) emp.histograms[j].counts[k] += cnt;
  return emp;
}

}  // namespace detail

/// Histograms of N(Y(t)) at the plan's checkpoints. A non-homogeneous intensity
/// is sampled as N1(Lambda(.)).
inline EmpiricalLaw simulate_poisson_tc(const TimeChangedPoissonLaw& P, const SimulationPlan& plan) {
  const IntensityFunction& I = P.intensity();
  return detail::simulate_paths(P.law(), plan, [&](Philox4x32& eng, const std::vector<double>& y, std::vector<long>& out) {
    long n = 0;
    double prev = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      n += poisson_count(I.cumulative(prev, y[j]), eng);
      prev = y[j];
      out[j] = n;
    }
  });
}

/// Histograms of S(Y(t)) = N1(Y(t)) - N2(Y(t)).
inline EmpiricalLaw simulate_skellam_tc(const SkellamParams& p, const InverseSubordinatorLaw& law,
                                        const SimulationPlan& plan) {
  p.validate();
  return detail::simulate_paths(law, plan, [&](Philox4x32& eng, const std::vector<double>& y, std::vector<long>& out) {
    long s = 0;
    double prev = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double dy = y[j] - prev;
      s += poisson_count(p.lambda1 * dy, eng) - poisson_count(p.lambda2 * dy, eng);
      prev = y[j];
      out[j] = s;
    }
  });
}

/// Probabilities p[i] of the outcomes offset + i.
struct PmfTable {
  long offset = 0;
  std::vector<double> p;

  double at(long k) const {
    const long i = k - offset;
    return (i < 0 || i >= static_cast<long>(p.size())) ? 0.0 : p[static_cast<std::size_t>(i)];
  }
  long last() const { return offset + static_cast<long>(p.size()) - 1; }
};

inline PmfTable pmf_table(const TimeChangedPoissonLaw& P, double t) {
  const NormalizationAudit a = normalization(P, t);
  const auto v = pmf_vector(P, a.cutoff, t);
  return {0, std::vector<double>(std::begin(v), std::end(v))};
}

inline PmfTable pmf_table(const SkellamParams& p, const InverseSubordinatorLaw& law, double t) {
  const SkellamNormalizationAudit a = normalization(p, law, t);
  const auto v = pmf_vector(p, law, a.cutoff, t);
  return {-a.cutoff, std::vector<double>(std::begin(v), std::end(v))};
}

struct GoodnessOfFit {
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 0.0;
  double tv_distance = 0.0;
  int bins = 0;
  long n = 0;
};

/// Pearson chi-square with adjacent bins merged until each expects >= min_expected
/// counts, plus the total-variation distance. Mass outside the table counts
/// towards the outer bins.
inline GoodnessOfFit goodness_of_fit(const Histogram& h, const PmfTable& table, double min_expected = 5.0,
                                     int fitted_parameters = 0) {
  const long n = h.total();
  if (n <= 0) throw std::domain_error("goodness_of_fit: empty sample");
  if (table.p.empty()) throw std::domain_error("goodness_of_fit: empty pmf table");
  GoodnessOfFit r;
  r.n = n;
  const double nn = static_cast<double>(n);

  // Total variation over the table, outcomes outside it lumped together.
  double inside_p = 0.0, tv = 0.0;
  long inside_n = 0;
  for (std::size_t i = 0; i < table.p.size(); ++i) {
    const long k = table.offset + static_cast<long>(i);
    const long c = h.count(k);
    inside_p += table.p[i];
    inside_n += c;
    tv += std::fabs(c / nn - table.p[i]);
  }
  tv += std::fabs((n - inside_n) / nn - std::max(0.0, 1.0 - inside_p));
  r.tv_distance = 0.5 * tv;

  // Cells of the table; the first takes everything below, the last everything above.
  std::vector<double> expected(table.p.size());
  std::vector<double> observed(table.p.size());
  for (std::size_t i = 0; i < table.p.size(); ++i) {
    expected[i] = nn * table.p[i];
    observed[i] = static_cast<double>(h.count(table.offset + static_cast<long>(i)));
  }
  for (const auto& [k, c] : h.counts) {
    if (k < table.offset) observed.front() += c;
    if (k > table.last()) observed.back() += c;
  }
  expected.back() += nn * std::max(0.0, 1.0 - inside_p);

  std::vector<double> be, bo;
  double e = 0.0, o = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    e += expected[i];
    o += observed[i];
    if (e >= min_expected) {
      be.push_back(e);
      bo.push_back(o);
      e = o = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (be.empty()) {
      be.push_back(e);
      bo.push_back(o);
    } else {
      be.back() += e;
      bo.back() += o;
    }
  }
  r.bins = static_cast<int>(be.size());
  r.dof = r.bins - 1 - fitted_parameters;
  if (r.dof < 1) throw std::domain_error("goodness_of_fit: fewer than two usable bins after merging");
  for (std::size_t i = 0; i < be.size(); ++i) {
    const double d = bo[i] - be[i];
    r.chi_square += d * d / be[i];
  }
  r.p_value = gamma_q(0.5 * r.dof, 0.5 * r.chi_square);
  return r;
}

/// Histogram of n draws from a pmf table (mass outside the table lands on its last cell).
template <class Engine>
Histogram sample_from_table(const PmfTable& table, long n, Engine& eng) {
  std::vector<double> cdf(table.p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < table.p.size(); ++i) cdf[i] = (acc += table.p[i]);
  Histogram h;
  for (long j = 0; j < n; ++j) {
    const double u = uniform_open(eng) * acc;
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++h.counts[table.offset + static_cast<long>(std::min(i, cdf.size() - 1))];
  }
  return h;
}

}  // namespace subord

#endif  // SUBORD_MONTECARLO_HPP
