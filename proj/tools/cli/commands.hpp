#ifndef SUBORD_TOOLS_COMMANDS_HPP
#define SUBORD_TOOLS_COMMANDS_HPP

// Subcommands of the subord tool. Each produces CSV tables plus a JSON sidecar; both
// carry the resolved config so a run can be repeated from either file.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "json.hpp"
#include "subord/subord.hpp"

namespace subord::cli {

enum exit_code : int { ok = 0, tolerance_failure = 1, config_failure = 2, numerical_failure = 3 };

inline constexpr double normalization_tolerance = 1e-5;
inline constexpr double duality_tolerance = 1e-5;
inline constexpr double moment_tolerance = 1e-5;

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

struct Table {
  std::string name;  // file name without extension
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> r) { rows.push_back(std::move(r)); }

  std::string render(const std::string& preamble) const {
    std::string out = preamble;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

struct CommandResult {
  int exit_code = ok;
  json results = json::object();
  std::vector<Table> tables;
};

inline json certificate_json(const TruncationCertificate& c) {
  return {{"t", c.t},
          {"u_max", c.u_max},
          {"tail_bound", c.bound},
          {"moment_order", c.moment_order},
          {"computed_tail", c.computed_tail}};
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes <dir>/<table>.csv for every table and <dir>/<command>.json. The sidecar's
/// content_hash covers the config, results and tables but not the timestamp.
inline std::vector<std::string> write_outputs(const ExperimentConfig& cfg, const std::string& command,
                                              const CommandResult& res) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw config_error("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  const json config = to_json(cfg);
  const std::string preamble =
      std::string("# subord ") + version + " command=" + command + "\n# config " + config.dump() + "\n";
  std::vector<std::string> written;
  std::uint64_t h = fnv1a(config.dump());
  h = fnv1a(res.results.dump(), h);
  json files = json::array();
  for (const auto& t : res.tables) {
    const std::string body = t.render(preamble);
    h = fnv1a(body, h);
    const fs::path p = dir / (t.name + ".csv");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw config_error("cannot write '" + p.string() + "'");
    out << body;
    written.push_back(p.string());
    files.push_back(t.name + ".csv");
  }
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  json side;
  side["tool"] = "subord";
  side["version"] = version;
  side["command"] = command;
  side["config"] = config;
  side["results"] = res.results;
  side["files"] = files;
  side["exit_code"] = res.exit_code;
  side["content_hash"] = hex;
  side["timestamp"] = utc_timestamp();
  const fs::path p = dir / (command + ".json");
  std::ofstream out(p, std::ios::binary);
  if (!out) throw config_error("cannot write '" + p.string() + "'");
  out << side.dump(2) << '\n';
  written.push_back(p.string());
  return written;
}

/// Objects shared by the commands.
struct Setup {
  ExperimentConfig cfg;
  InverseSubordinatorLaw law;
  SkellamParams skellam;
  ResidualOptions residual;

  explicit Setup(const ExperimentConfig& c)
      : cfg(c), law(make_bernstein(c), make_law_settings(c)), skellam{c.lambda1, c.lambda2} {
    residual.quadrature = make_quadrature(c);
    residual.tolerance = c.tolerance;
    residual.workers = c.threads;
  }

  TimeChangedPoissonLaw poisson() const { return TimeChangedPoissonLaw(make_intensity(cfg), law); }
  bool is_poisson() const { return cfg.process == "poisson"; }
};

// ---------------------------------------------------------------------------

inline CommandResult cmd_pmf(const ExperimentConfig& cfg) {
  const Setup s(cfg);
  CommandResult res;
  Table tab{"pmf", {"t"}, {}};
  const long xm = cfg.x_max;
  json audits = json::array();
  bool all_ok = true;
  if (s.is_poisson()) {
    const TimeChangedPoissonLaw P = s.poisson();
    for (long x = 0; x <= xm; ++x) tab.header.push_back("x=" + std::to_string(x));
    tab.header.push_back("tail_beyond_table");
    for (double t : cfg.t_grid) {
      const NormalizationAudit a = normalization(P, t);
      const long X = std::max(xm, a.cutoff);
      const auto p = pmf_vector(P, X, t);
      std::vector<std::string> row{fmt(t)};
      double table_sum = 0.0, beyond = 0.0, to_cutoff = 0.0;
      for (long x = 0; x <= X; ++x) {
        if (x <= xm) {
          row.push_back(fmt(p[x]));
          table_sum += p[x];
        } else {
          beyond += p[x];
        }
        if (x <= a.cutoff) to_cutoff += p[x];
      }
      row.push_back(fmt(beyond));
      tab.add(row);
      const double err = std::fabs(to_cutoff - 1.0);
      all_ok = all_ok && err <= normalization_tolerance;
      audits.push_back({{"t", t},
                        {"table_sum", table_sum},
                        {"tail_beyond_table", beyond},
                        {"cutoff", a.cutoff},
                        {"sum_to_cutoff", to_cutoff},
                        {"count_tail_bound", a.count_tail},
                        {"normalization_error", err},
                        {"passed", err <= normalization_tolerance},
                        {"truncation", certificate_json(a.certificate)}});
    }
  } else {
    for (long k = -xm; k <= xm; ++k) tab.header.push_back("k=" + std::to_string(k));
    tab.header.push_back("tail_beyond_table");
    for (double t : cfg.t_grid) {
      const SkellamNormalizationAudit a = normalization(s.skellam, s.law, t);
      const long K = std::max(xm, a.cutoff);
      const auto p = pmf_vector(s.skellam, s.law, K, t);
      std::vector<std::string> row{fmt(t)};
      double table_sum = 0.0, beyond = 0.0, to_cutoff = 0.0;
      for (long k = -K; k <= K; ++k) {
        const double v = p[static_cast<std::size_t>(k + K)];
        if (std::labs(k) <= xm) {
          row.push_back(fmt(v));
          table_sum += v;
        } else {
          beyond += v;
        }
        if (std::labs(k) <= a.cutoff) to_cutoff += v;
      }
      row.push_back(fmt(beyond));
      tab.add(row);
      const double err = std::fabs(to_cutoff - 1.0);
      all_ok = all_ok && err <= normalization_tolerance;
      audits.push_back({{"t", t},
                        {"table_sum", table_sum},
                        {"tail_beyond_table", beyond},
                        {"cutoff", a.cutoff},
                        {"sum_to_cutoff", to_cutoff},
                        {"state_tail_bound", a.state_tail},
                        {"normalization_error", err},
                        {"passed", err <= normalization_tolerance},
                        {"truncation", certificate_json(a.certificate)}});
    }
  }
  res.results["normalization"] = audits;
  res.results["normalization_tolerance"] = normalization_tolerance;
  res.exit_code = all_ok ? ok : tolerance_failure;
  res.tables.push_back(std::move(tab));
  return res;
}

inline CommandResult cmd_residual(const ExperimentConfig& cfg) {
  const Setup s(cfg);
  CommandResult res;
  Table tab{"residual", {"equation", "t", "label", "lhs", "rhs", "residual"}, {}};
  json summary = json::array();
  bool all_ok = true;
  for (const auto& eq : cfg.equations) {
    ResidualReport rep;
    if (eq == "thm1") {
      rep = residual_thm1(s.poisson(), cfg.x_values, cfg.t_grid, cfg.v, s.residual);
    } else if (eq == "thm3") {
      rep = residual_homogeneous(s.poisson(), cfg.x_values, cfg.t_grid, s.residual);
    } else if (eq == "mgf_poisson") {
      rep = residual_mgf(s.poisson(), cfg.theta_grid, cfg.t_grid, s.residual);
    } else if (eq == "lemma1") {
      rep.tolerance = cfg.tolerance;
      for (double l : cfg.lambda_grid)
        rep.merge(eigenfunction_residual(s.law, l, cfg.t_grid, s.residual.quadrature, cfg.tolerance));
    } else if (eq == "skellam_system") {
      rep = residual_governing(s.skellam, s.law, cfg.x_values, cfg.t_grid, s.residual);
    } else if (eq == "skellam_mgf") {
      rep = residual_mgf(s.skellam, s.law, cfg.theta_grid, cfg.t_grid, s.residual);
    } else if (eq == "density_eq") {
      rep.tolerance = cfg.tolerance;
      for (double t : cfg.t_grid)
        for (double u : cfg.u_grid) rep.entries.push_back(density_equation_residual(s.law, t, u, s.residual.quadrature));
    }
    rep.equation = eq;
    for (const auto& e : rep.entries) tab.add({eq, fmt(e.t), e.label, fmt(e.lhs), fmt(e.rhs), fmt(e.residual)});
    const bool pass = rep.passed();
    all_ok = all_ok && pass;
    summary.push_back({{"equation", eq},
                       {"max_residual", rep.max_residual()},
                       {"tolerance", rep.tolerance},
                       {"points", rep.entries.size()},
                       {"passed", pass}});
  }
  res.results["equations"] = summary;
  res.exit_code = all_ok ? ok : tolerance_failure;
  res.tables.push_back(std::move(tab));
  return res;
}

inline CommandResult cmd_simulate(const ExperimentConfig& cfg) {
  const Setup s(cfg);
  CommandResult res;
  SimulationPlan plan;
  plan.master_seed = cfg.seed;
  plan.n_paths = cfg.n_paths;
  plan.t_checkpoints = cfg.t_grid;
  plan.step = cfg.step;
  plan.worker_count = cfg.threads;
  const bool poisson = s.is_poisson();
  const EmpiricalLaw emp = poisson ? simulate_poisson_tc(s.poisson(), plan) : simulate_skellam_tc(s.skellam, s.law, plan);
  Table tab{"simulate", {"t", "value", "count", "frequency", "half_width_3sigma", "pmf"}, {}};
  json checks = json::array();
  for (std::size_t c = 0; c < emp.checkpoints.size(); ++c) {
    const double t = emp.checkpoints[c];
    const PmfTable table = poisson ? pmf_table(s.poisson(), t) : pmf_table(s.skellam, s.law, t);
    long lo = table.offset, hi = table.last();
    if (!emp.histograms[c].counts.empty()) {
      lo = std::min(lo, emp.histograms[c].counts.begin()->first);
      hi = std::max(hi, emp.histograms[c].counts.rbegin()->first);
    }
    for (long k = lo; k <= hi; ++k) {
      const long n = emp.histograms[c].count(k);
      const double p = table.at(k);
      if (n == 0 && p < 1e-12) continue;
      tab.add({fmt(t), std::to_string(k), std::to_string(n), fmt(emp.frequency(c, k)), fmt(emp.half_width(c, k)), fmt(p)});
    }
    const GoodnessOfFit g = goodness_of_fit(emp.histograms[c], table);
    const double exact_mean =
        poisson ? moment(s.poisson(), 1, t) : (cfg.lambda1 - cfg.lambda2) * s.law.mean(t);
    checks.push_back({{"t", t},
                      {"mean", emp.mean(c)},
                      {"mean_standard_error", emp.mean_standard_error(c)},
                      {"exact_mean", exact_mean},
                      {"skewness", emp.skewness(c)},
                      {"tv_distance", g.tv_distance},
                      {"chi_square", g.chi_square},
                      {"dof", g.dof},
                      {"p_value", g.p_value},
                      {"bins", g.bins}});
  }
  res.results["step"] = emp.step;
  res.results["n_paths"] = emp.n_paths;
  res.results["checkpoints"] = checks;
  res.tables.push_back(std::move(tab));
  return res;
}

inline CommandResult cmd_moments(const ExperimentConfig& cfg) {
  if (cfg.process != "poisson") throw config_error("moments: needs process 'poisson'");
  const Setup s(cfg);
  const TimeChangedPoissonLaw P = s.poisson();
  CommandResult res;
  Table mt{"moments", {"t", "quantity", "value", "brute_force", "difference"}, {}};
  bool all_ok = true;
  double worst = 0.0;
  for (double t : cfg.t_grid) {
    const NormalizationAudit a = normalization(P, t);
    const auto p = pmf_vector(P, a.cutoff, t);
    for (int k = 1; k <= cfg.k_max; ++k) {
      const double m = moment(P, k, t);
      double b = 0.0;
      for (long x = 0; x <= a.cutoff; ++x) b += std::pow(static_cast<double>(x), k) * p[x];
      const double d = std::fabs(m - b);
      worst = std::max(worst, d / std::max(1.0, std::fabs(m)));
      all_ok = all_ok && d <= moment_tolerance * std::max(1.0, std::fabs(m));
      mt.add({fmt(t), "moment" + std::to_string(k), fmt(m), fmt(b), fmt(d)});
    }
    double b1 = 0.0, b2 = 0.0;
    for (long x = 0; x <= a.cutoff; ++x) {
      b1 += x * p[x];
      b2 += static_cast<double>(x) * x * p[x];
    }
    const double var = variance(P, t), bv = b2 - b1 * b1;
    mt.add({fmt(t), "variance", fmt(var), fmt(bv), fmt(std::fabs(var - bv))});
  }
  Table ct{"covariance",
           {"s", "t", "covariance", "standard_error", "mean_part", "lambda_covariance", "cauchy_schwarz_bound"},
           {}};
  CovarianceOptions co;
  co.n_paths = cfg.covariance_paths;
  co.seed = cfg.seed;
  co.step = cfg.step;
  co.workers = cfg.threads;
  for (double a : cfg.t_grid) {
    for (double b : cfg.t_grid) {
      const CovarianceEstimate e = covariance(P, a, b, co);
      ct.add({fmt(a), fmt(b), fmt(e.value), fmt(e.standard_error), fmt(e.mean_part), fmt(e.lambda_covariance),
              fmt(e.cauchy_schwarz_bound)});
    }
  }
  res.results["moment_tolerance"] = moment_tolerance;
  res.results["worst_relative_moment_difference"] = worst;
  res.results["passed"] = all_ok;
  res.exit_code = all_ok ? ok : tolerance_failure;
  res.tables.push_back(std::move(mt));
  res.tables.push_back(std::move(ct));
  return res;
}

inline CommandResult cmd_arrivals(const ExperimentConfig& cfg) {
  if (cfg.process != "poisson") throw config_error("arrivals: needs process 'poisson'");
  const Setup s(cfg);
  const TimeChangedPoissonLaw P = s.poisson();
  try {
    P.intensity().check_arrival_conditions();
  } catch (const std::domain_error& e) {
    throw config_error(e.what());
  }
  CommandResult res;
  Table tab{"arrivals", {"t", "n", "arrival_cdf", "count_tail", "duality_error", "derivative_form"}, {}};
  const bool homogeneous = P.intensity().is_homogeneous();
  bool all_ok = true;
  double worst = 0.0;
  for (double t : cfg.t_grid) {
    const NormalizationAudit a = normalization(P, t);
    const auto p = pmf_vector(P, std::max<long>(a.cutoff, cfg.n_max), t);
    for (int n = 1; n <= cfg.n_max; ++n) {
      const double F = arrival_cdf(P, n, t);
      double tail = 0.0;
      for (std::size_t x = static_cast<std::size_t>(n); x < p.size(); ++x) tail += p[x];
      const double d = std::fabs(F - tail);
      worst = std::max(worst, d);
      all_ok = all_ok && d <= duality_tolerance;
      tab.add({fmt(t), std::to_string(n), fmt(F), fmt(tail), fmt(d),
               homogeneous ? fmt(arrival_cdf_by_derivatives(P, n, t)) : std::string()});
    }
  }
  res.results["duality_tolerance"] = duality_tolerance;
  res.results["worst_duality_error"] = worst;
  res.results["passed"] = all_ok;
  res.exit_code = all_ok ? ok : tolerance_failure;
  res.tables.push_back(std::move(tab));
  return res;
}

inline CommandResult run_command(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "pmf") return cmd_pmf(cfg);
  if (name == "residual") return cmd_residual(cfg);
  if (name == "simulate") return cmd_simulate(cfg);
  if (name == "moments") return cmd_moments(cfg);
  if (name == "arrivals") return cmd_arrivals(cfg);
  throw config_error("unknown command '" + name + "'");
}

}  // namespace subord::cli

#endif  // SUBORD_TOOLS_COMMANDS_HPP
