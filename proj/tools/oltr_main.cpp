#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oltr/harness.hpp"
#include "oltr/polytope.hpp"
#include "oltr/sampler.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& seed_override,
            const std::string& out_override, const std::string& route_override, int threads) {
  oltr::ExperimentConfig cfg = oltr::load_config_file(config_path);
  if (!seed_override.empty()) cfg.base_seed = std::stoull(seed_override);
  if (!out_override.empty()) cfg.output_path = out_override;
  if (!route_override.empty()) {
    if (route_override == "cbp") {
      cfg.solver.route = oltr::SolverRoute::kCbp;
    } else if (route_override == "fw") {
      cfg.solver.route = oltr::SolverRoute::kFw;
    } else {
      throw oltr::ConfigError("--route", "must be 'cbp' or 'fw'");
    }
  }
  if (threads >= 0) cfg.num_threads = threads;
  oltr::validate_config(cfg);
  const oltr::ExperimentResult result = oltr::run_experiment(cfg);
  int flagged = 0;
  for (const auto& trace : result.traces) {
    for (const auto& row : trace.rows) flagged += row.solver_converged == 0 ? 1 : 0;
  }
  std::cout << "wrote " << result.traces.size() << " replicate trace(s) + summary to "
            << cfg.output_path << "\n";
  if (flagged > 0) {
    std::cout << "note: " << flagged << " record window(s) contained unconverged solves\n";
  }
  return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed) {
  const oltr::SuiteResult result = oltr::check_invariants(suite, seed);
  std::cout << (result.pass ? "PASS" : "FAIL") << " " << result.suite << ": " << result.detail
            << "\n";
  return result.pass ? 0 : 1;
}

int cmd_presets() {
  for (const std::string& name : oltr::preset_names()) {
    const oltr::StochasticParams p = oltr::preset(name);
    std::cout << name << "\n  alpha =";
    for (double a : p.alpha) std::cout << ' ' << a;
    std::cout << "\n  beta  =";
    for (double b : p.beta) std::cout << ' ' << b;
    std::cout << "\n";
  }
  return 0;
}

int cmd_decompose(const std::string& matrix_path) {
  const oltr::Matrix x = oltr::read_matrix_file(matrix_path);
  const oltr::Dims dims{x.rows(), x.cols()};
  const oltr::FeasibilityReport feas = oltr::allocation_feasible(x, dims, oltr::kFeasTolSolver);
  if (!feas.feasible) {
    std::cerr << "matrix is not a feasible allocation (col dev " << feas.worst_col_dev
              << ", row excess " << feas.worst_row_excess << ", min entry " << feas.most_negative
              << ")\n";
    return 1;
  }
  const oltr::Matrix w = oltr::complete_to_doubly_stochastic(x, dims);
  const oltr::Decomposition d = oltr::decompose(w);
  const double err = oltr::max_abs_diff(w, oltr::reconstruct(d, dims.n));
  std::cout << d.terms.size() << " term(s), reconstruction error " << err << "\n";
  for (const auto& term : d.terms) {
    std::cout << term.gamma << " :";
    for (int i = 0; i < dims.n; ++i) std::cout << ' ' << term.perm[i] + 1;
    std::cout << "\n";
  }
  return err <= 1e-8 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FTRL ranking bandit under the position-based click model"};
  app.require_subcommand(1);

  std::string config_path, seed_override, out_override, route_override;
  int threads = -1;
  CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "path to JSON config")->required();
  run->add_option("--seed", seed_override, "override base_seed");
  run->add_option("--out", out_override, "override output_path");
  run->add_option("--route", route_override, "override solver route (cbp|fw)");
  run->add_option("--threads", threads, "override num_threads");

  std::string suite;
  std::uint64_t check_seed = 20240501;
  CLI::App* check = app.add_subcommand("check", "run a named invariant suite");
  check->add_option("suite", suite, "gap | sampler | solver-agree | decompose | estimator")
      ->required();
  check->add_option("--seed", check_seed, "suite RNG seed");

  CLI::App* presets = app.add_subcommand("presets", "list named parameter sets");

  std::string matrix_path;
  CLI::App* decompose = app.add_subcommand("decompose", "decompose an allocation matrix file");
  decompose->add_option("matrix", matrix_path, "file: first line 'n m', then rows")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed_override, out_override, route_override, threads);
    if (check->parsed()) return cmd_check(suite, check_seed);
    if (presets->parsed()) return cmd_presets();
    if (decompose->parsed()) return cmd_decompose(matrix_path);
  } catch (const oltr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
