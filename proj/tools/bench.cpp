// Timing comparison: CBP vs FW solves, and threaded vs single-thread
// replicate batches. Not a correctness test.

#include <chrono>
#include <cstdio>

#include "oltr/harness.hpp"
#include "oltr/learner.hpp"
#include "oltr/solver.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void bench_solvers() {
  const oltr::Dims dims{10, 5};
  oltr::SolverConfig cbp_cfg;
  oltr::SolverConfig fw_cfg;
  fw_cfg.route = oltr::SolverRoute::kFw;
  fw_cfg.convergence_tol = 1e-4;
  const oltr::Matrix uniform(dims.n, dims.m, 1.0 / dims.n);

  oltr::Rng rng(7);
  const int solves = 200;
  double cbp_ms = 0.0, fw_ms = 0.0, worst_gap = 0.0;
  for (int k = 0; k < solves; ++k) {
    oltr::Matrix cum_loss(dims.n, dims.m);
    for (double& v : cum_loss.raw()) v = 20.0 * rng.uniform01();
    const double eta = oltr::learning_rate(1 + 50 * k);

    auto t0 = Clock::now();
    const oltr::SolveResult a = oltr::solve_cbp(cum_loss, eta, cbp_cfg);
    cbp_ms += ms_since(t0);

    t0 = Clock::now();
    const oltr::SolveResult b = oltr::solve_fw(cum_loss, eta, fw_cfg, uniform);
    fw_ms += ms_since(t0);

    worst_gap = std::max(worst_gap, std::abs(a.objective - b.objective));
  }
  std::printf("solver (n=10, m=5, %d solves)\n", solves);
  std::printf("  cbp: %8.2f ms total  %6.3f ms/solve\n", cbp_ms, cbp_ms / solves);
  std::printf("  fw : %8.2f ms total  %6.3f ms/solve (K=%d)\n", fw_ms, fw_ms / solves,
              fw_cfg.fw_max_iters);
  std::printf("  max |obj_cbp - obj_fw| = %.3g\n", worst_gap);
}

void bench_replicates() {
  oltr::ExperimentConfig cfg;
  cfg.dims = {10, 5};
  cfg.env.kind = oltr::EnvKind::kStochastic;
  cfg.env.params = oltr::preset("synthetic_003");
  cfg.horizon = 3000;
  cfg.replicates = 8;
  cfg.base_seed = 99;
  cfg.record_every = 500;
  cfg.output_path = "/tmp/oltr_bench_out";

  std::printf("replicates (stochastic synthetic_003, T=%ld, %d replicates)\n", cfg.horizon,
              cfg.replicates);
  for (int threads : {1, 0}) {
    cfg.num_threads = threads;
    const auto t0 = Clock::now();
    oltr::run_experiment(cfg);
    std::printf("  threads=%s: %8.2f ms\n", threads == 1 ? "1   " : "auto", ms_since(t0));
  }
}

}  // namespace

int main() {
  bench_solvers();
  bench_replicates();
  return 0;
}
