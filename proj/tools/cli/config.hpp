#ifndef SUBORD_TOOLS_CONFIG_HPP
#define SUBORD_TOOLS_CONFIG_HPP

// Experiment configuration: a nested JSON document, validated on load and echoed
// back in resolved form (every field present) into each output file.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "subord/subord.hpp"

namespace subord::cli {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

struct ExperimentConfig {
  std::string process = "poisson";  // poisson | skellam

  std::string family = "stable";  // stable | tempered_stable
  double alpha = 0.5;
  double beta = 1.0;

  std::string intensity = "constant";  // constant | one_plus_sin_squared | tabulated
  double lambda = 1.0;
  std::vector<double> intensity_times, intensity_rates;

  double lambda1 = 1.0, lambda2 = 1.0;

  std::vector<double> t_grid{0.5, 1.0, 2.0};
  int x_max = 10;
  std::vector<double> theta_grid;  // empty: process default
  std::vector<double> lambda_grid{0.5, 1.0, 2.0};
  std::vector<double> u_grid{0.5, 1.0, 2.0};

  std::vector<std::string> equations;  // empty: process default
  double tolerance = 1e-4;
  std::vector<int> x_values;  // empty: process default
  double v = 0.0;

  long n_paths = 100000;
  double step = 0.0;

  int k_max = 4;
  long covariance_paths = 20000;

  int n_max = 3;

  double contour_accuracy = 1e-14;
  int real_order = 36;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double truncation_mass = 1e-12;
  int cells = 32;
  int cell_order = 8;

  std::uint64_t seed = 12345;
  int threads = 0;
  std::string out_dir = "subord_out";
};

inline const std::vector<std::string>& known_equations() {
  static const std::vector<std::string> e{"thm1",         "thm3",        "lemma1",    "mgf_poisson",
                                          "skellam_system", "skellam_mgf", "density_eq"};
  return e;
}

namespace detail {

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw config_error(where + ": expected an object");
  std::set<std::string> ok;
  for (const char* a : allowed) ok.insert(a);
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) throw config_error(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(where + "." + key + ": wrong type");
  }
}

inline json section(const json& root, const char* key) {
  if (!root.contains(key)) return json::object();
  return root.at(key);
}

}  // namespace detail

/// Fills process-dependent defaults and checks every numeric constraint.
inline void resolve(ExperimentConfig& c) {
  auto fail = [](const std::string& m) { throw config_error(m); };
  if (c.process != "poisson" && c.process != "skellam") fail("process must be 'poisson' or 'skellam'");
  if (c.family != "stable" && c.family != "tempered_stable")
    fail("bernstein.family must be 'stable' or 'tempered_stable'");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("bernstein.alpha must lie in (0, 1)");
  if (c.family == "tempered_stable" && !(c.beta > 0.0)) fail("bernstein.beta must be > 0");
  if (c.intensity != "constant" && c.intensity != "one_plus_sin_squared" && c.intensity != "tabulated")
    fail("intensity.kind must be 'constant', 'one_plus_sin_squared' or 'tabulated'");
  if (c.intensity == "constant" && !(c.lambda > 0.0)) fail("intensity.lambda must be > 0");
  if (c.intensity == "tabulated") {
    if (c.intensity_times.empty() || c.intensity_times.size() != c.intensity_rates.size())
      fail("intensity.times and intensity.rates must be non-empty and of equal length");
  }
  if (!(c.lambda1 > 0.0) || !(c.lambda2 > 0.0)) fail("skellam.lambda1 and skellam.lambda2 must be > 0");
  if (c.t_grid.empty()) fail("grid.t must not be empty");
  for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
    if (!(c.t_grid[i] > 0.0) || !std::isfinite(c.t_grid[i])) fail("grid.t entries must be finite and > 0");
    if (i > 0 && !(c.t_grid[i] > c.t_grid[i - 1])) fail("grid.t must be strictly increasing");
  }
  if (c.x_max < 0 || c.x_max > 10000) fail("grid.x_max must lie in [0, 10000]");
  for (double l : c.lambda_grid)
    if (!(l >= 0.0)) fail("grid.lambda entries must be >= 0");
  for (double u : c.u_grid)
    if (!(u > 0.0)) fail("grid.u entries must be > 0");
  const bool homogeneous = c.intensity == "constant";
  if (c.theta_grid.empty()) {
    if (c.process == "poisson") {
      c.theta_grid = {-2.0, -1.0, -0.5, -0.1};
    } else {
      c.theta_grid = default_theta_grid(SkellamParams{c.lambda1, c.lambda2});
    }
  }
  if (c.process == "poisson") {
    for (double th : c.theta_grid)
      if (th > 0.0) fail("grid.theta entries must be <= 0 for the Poisson process");
  } else {
    const auto [a, b] = admissible_theta_interval(SkellamParams{c.lambda1, c.lambda2});
    for (double th : c.theta_grid)
      if (th < a || th > b) fail("grid.theta entries must lie in the admissible interval for the Skellam rates");
  }
  if (c.equations.empty()) {
    if (c.process == "poisson") {
      c.equations = homogeneous ? std::vector<std::string>{"thm3", "lemma1", "mgf_poisson"}
                                : std::vector<std::string>{"thm1", "lemma1"};
    } else {
      c.equations = {"skellam_system", "skellam_mgf"};
    }
  }
  for (const auto& e : c.equations) {
    bool found = false;
    for (const auto& k : known_equations()) found = found || k == e;
    if (!found) fail("residual.equations: unknown equation '" + e + "'");
    const bool poisson_only = e == "thm1" || e == "thm3" || e == "mgf_poisson";
    const bool skellam_only = e == "skellam_system" || e == "skellam_mgf";
    if (poisson_only && c.process != "poisson") fail("residual equation '" + e + "' needs process 'poisson'");
    if (skellam_only && c.process != "skellam") fail("residual equation '" + e + "' needs process 'skellam'");
    if ((e == "thm3" || e == "mgf_poisson") && !homogeneous)
      fail("residual equation '" + e + "' needs a constant intensity");
  }
  if (c.x_values.empty())
    c.x_values = c.process == "poisson" ? std::vector<int>{0, 1, 2, 3, 4, 5} : std::vector<int>{-2, -1, 0, 1, 2};
  for (int x : c.x_values)
    if (c.process == "poisson" && x < 0) fail("residual.x entries must be >= 0 for the Poisson process");
  if (!(c.tolerance > 0.0)) fail("residual.tolerance must be > 0");
  if (!(c.v >= 0.0)) fail("residual.v must be >= 0");
  if (c.n_paths < 1) fail("simulation.n_paths must be >= 1");
  if (!(c.step >= 0.0)) fail("simulation.step must be >= 0");
  if (c.k_max < 1 || c.k_max > 6) fail("moments.k_max must lie in [1, 6]");
  if (c.covariance_paths < 2) fail("moments.covariance_paths must be >= 2");
  if (c.n_max < 1 || c.n_max > 5) fail("arrivals.n_max must lie in [1, 5]");
  if (!(c.contour_accuracy > 0.0 && c.contour_accuracy < 1e-2)) fail("numerics.contour_accuracy must lie in (0, 1e-2)");
  if (c.real_order < 2 || c.real_order > 40 || c.real_order % 2) fail("numerics.real_order must be even in [2, 40]");
  if (!(c.rel_tol > 0.0) || !(c.abs_tol >= 0.0)) fail("numerics.rel_tol must be > 0 and abs_tol >= 0");
  if (!(c.truncation_mass > 0.0 && c.truncation_mass < 1e-3)) fail("numerics.truncation_mass must lie in (0, 1e-3)");
  if (c.cells < 1 || c.cells > 200) fail("numerics.cells must lie in [1, 200]");
  if (c.cell_order < 1 || c.cell_order > 64) fail("numerics.cell_order must lie in [1, 64]");
  if (c.threads < 0) fail("threads must be >= 0");
  if (c.out_dir.empty()) fail("output.dir must not be empty");
}

/// Parses a config document. A sidecar written by the tool is accepted too: its
/// embedded "config" is used.
inline ExperimentConfig parse_config(const json& doc) {
  const json root = (doc.is_object() && doc.contains("config") && doc.contains("tool")) ? doc.at("config") : doc;
  detail::check_keys(root, "config",
                     {"process", "bernstein", "intensity", "skellam", "grid", "residual", "simulation", "moments",
                      "arrivals", "numerics", "seed", "threads", "output"});
  ExperimentConfig c;
  detail::read(root, "process", c.process, "config");
  detail::read(root, "seed", c.seed, "config");
  detail::read(root, "threads", c.threads, "config");

  const json b = detail::section(root, "bernstein");
  detail::check_keys(b, "bernstein", {"family", "alpha", "beta"});
  detail::read(b, "family", c.family, "bernstein");
  detail::read(b, "alpha", c.alpha, "bernstein");
  detail::read(b, "beta", c.beta, "bernstein");

  const json in = detail::section(root, "intensity");
  detail::check_keys(in, "intensity", {"kind", "lambda", "times", "rates"});
  detail::read(in, "kind", c.intensity, "intensity");
  detail::read(in, "lambda", c.lambda, "intensity");
  detail::read(in, "times", c.intensity_times, "intensity");
  detail::read(in, "rates", c.intensity_rates, "intensity");

  const json sk = detail::section(root, "skellam");
  detail::check_keys(sk, "skellam", {"lambda1", "lambda2"});
  detail::read(sk, "lambda1", c.lambda1, "skellam");
  detail::read(sk, "lambda2", c.lambda2, "skellam");

  const json g = detail::section(root, "grid");
  detail::check_keys(g, "grid", {"t", "x_max", "theta", "lambda", "u"});
  detail::read(g, "t", c.t_grid, "grid");
  detail::read(g, "x_max", c.x_max, "grid");
  detail::read(g, "theta", c.theta_grid, "grid");
  detail::read(g, "lambda", c.lambda_grid, "grid");
  detail::read(g, "u", c.u_grid, "grid");

  const json r = detail::section(root, "residual");
  detail::check_keys(r, "residual", {"equations", "tolerance", "x", "v"});
  detail::read(r, "equations", c.equations, "residual");
  detail::read(r, "tolerance", c.tolerance, "residual");
  detail::read(r, "x", c.x_values, "residual");
  detail::read(r, "v", c.v, "residual");

  const json s = detail::section(root, "simulation");
  detail::check_keys(s, "simulation", {"n_paths", "step"});
  detail::read(s, "n_paths", c.n_paths, "simulation");
  detail::read(s, "step", c.step, "simulation");

  const json m = detail::section(root, "moments");
  detail::check_keys(m, "moments", {"k_max", "covariance_paths"});
  detail::read(m, "k_max", c.k_max, "moments");
  detail::read(m, "covariance_paths", c.covariance_paths, "moments");

  const json a = detail::section(root, "arrivals");
  detail::check_keys(a, "arrivals", {"n_max"});
  detail::read(a, "n_max", c.n_max, "arrivals");

  const json nu = detail::section(root, "numerics");
  detail::check_keys(nu, "numerics",
                     {"contour_accuracy", "real_order", "rel_tol", "abs_tol", "truncation_mass", "cells", "cell_order"});
  detail::read(nu, "contour_accuracy", c.contour_accuracy, "numerics");
  detail::read(nu, "real_order", c.real_order, "numerics");
  detail::read(nu, "rel_tol", c.rel_tol, "numerics");
  detail::read(nu, "abs_tol", c.abs_tol, "numerics");
  detail::read(nu, "truncation_mass", c.truncation_mass, "numerics");
  detail::read(nu, "cells", c.cells, "numerics");
  detail::read(nu, "cell_order", c.cell_order, "numerics");

  const json o = detail::section(root, "output");
  detail::check_keys(o, "output", {"dir"});
  detail::read(o, "dir", c.out_dir, "output");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

/// The resolved config with every field spelled out.
inline json to_json(const ExperimentConfig& c) {
  json j;
  j["process"] = c.process;
  j["bernstein"] = {{"family", c.family}, {"alpha", c.alpha}, {"beta", c.beta}};
  j["intensity"] = {{"kind", c.intensity}, {"lambda", c.lambda}, {"times", c.intensity_times}, {"rates", c.intensity_rates}};
  j["skellam"] = {{"lambda1", c.lambda1}, {"lambda2", c.lambda2}};
  j["grid"] = {{"t", c.t_grid}, {"x_max", c.x_max}, {"theta", c.theta_grid}, {"lambda", c.lambda_grid}, {"u", c.u_grid}};
  j["residual"] = {{"equations", c.equations}, {"tolerance", c.tolerance}, {"x", c.x_values}, {"v", c.v}};
  j["simulation"] = {{"n_paths", c.n_paths}, {"step", c.step}};
  j["moments"] = {{"k_max", c.k_max}, {"covariance_paths", c.covariance_paths}};
  j["arrivals"] = {{"n_max", c.n_max}};
  j["numerics"] = {{"contour_accuracy", c.contour_accuracy}, {"real_order", c.real_order}, {"rel_tol", c.rel_tol},
                   {"abs_tol", c.abs_tol},   {"truncation_mass", c.truncation_mass}, {"cells", c.cells},
                   {"cell_order", c.cell_order}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

// Library objects described by a resolved config.

inline BernsteinFunction make_bernstein(const ExperimentConfig& c) {
  return c.family == "stable" ? make_stable(c.alpha) : make_tempered_stable(c.alpha, c.beta);
}

inline LawSettings make_law_settings(const ExperimentConfig& c) {
  LawSettings s;
  s.inversion.contour_accuracy = c.contour_accuracy;
  s.inversion.real_order = c.real_order;
  s.inversion.rel_tol = c.rel_tol;
  s.inversion.abs_tol = c.abs_tol;
  s.truncation_mass = c.truncation_mass;
  return s;
}

inline IntensityFunction make_intensity(const ExperimentConfig& c) {
  if (c.intensity == "constant") return IntensityFunction::homogeneous(c.lambda);
  if (c.intensity == "one_plus_sin_squared") return IntensityFunction::one_plus_sin_squared();
  try {
    return IntensityFunction::tabulated(c.intensity_times, c.intensity_rates);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("intensity: ") + e.what());
  }
}

inline QuadratureSpec make_quadrature(const ExperimentConfig& c) {
  QuadratureSpec q;
  q.n_cells = c.cells;
  q.order = c.cell_order;
  return q;
}

}  // namespace subord::cli

#endif  // SUBORD_TOOLS_CONFIG_HPP
