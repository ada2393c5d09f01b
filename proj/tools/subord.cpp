// subord: experiments on time-changed Poisson and Skellam processes.
//
//   subord <pmf|residual|simulate|moments|arrivals> [--config PATH] [--out DIR]
//          [--seed N] [--threads N] [--tolerance X]
//
// Exit codes: 0 success, 1 tolerance failure, 2 config error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv) {
  using namespace subord;
  using namespace subord::cli;

  CLI::App app{"subord: time-changed counting processes driven by inverse subordinators"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  long long seed = -1;
  int threads = -1;
  double tolerance = -1.0;
  app.add_option("--config", config_path, "JSON config file, or a sidecar written by a previous run");
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "master seed (overrides seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "worker threads (overrides threads and SUBORD_THREADS)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tolerance", tolerance, "residual tolerance (overrides residual.tolerance)")
      ->check(CLI::PositiveNumber);

  for (const char* name : {"pmf", "residual", "simulate", "moments", "arrivals"}) app.add_subcommand(name);
  app.get_subcommand("pmf")->description("pmf lattice over counts and times");
  app.get_subcommand("residual")->description("governing-equation residuals");
  app.get_subcommand("simulate")->description("Monte Carlo histograms and goodness of fit");
  app.get_subcommand("moments")->description("moments, variances and covariances");
  app.get_subcommand("arrivals")->description("arrival-time distribution functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : config_failure;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) cfg.threads = threads;
    if (tolerance > 0.0) cfg.tolerance = tolerance;
    resolve(cfg);

    const CommandResult res = run_command(command, cfg);
    for (const auto& f : write_outputs(cfg, command, res)) std::cout << "wrote " << f << '\n';
    if (res.results.contains("equations")) {
      for (const auto& e : res.results["equations"]) {
        std::printf("%-15s max residual %.3e (tolerance %.1e) %s\n", e["equation"].get<std::string>().c_str(),
                    e["max_residual"].get<double>(), e["tolerance"].get<double>(),
                    e["passed"].get<bool>() ? "pass" : "FAIL");
      }
    }
    return res.exit_code;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_failure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_failure;
  } catch (const inversion_disagreement& e) {
    std::cerr << "numerical failure: " << e.what() << " (contour " << e.contour_value() << ", real axis "
              << e.real_value() << ")\n";
    return numerical_failure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  }
}
