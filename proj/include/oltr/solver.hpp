#pragma once

#include <span>
#include <vector>

#include "oltr/core.hpp"

namespace oltr {

// Iterates are floored at this value before evaluating the entropy gradient,
// which diverges at zero. The learner's importance-weight clamp shares it.
inline constexpr double kEntryFloor = 1e-8;

// Any final clamp/renormalize repair larger than this flags the result.
inline constexpr double kRepairTol = 1e-6;

enum class SolverRoute { kCbp, kFw };

struct SolverConfig {
  SolverRoute route = SolverRoute::kCbp;
  int fw_max_iters = 500;
  int cbp_max_cycles = 200;
  int newton_max_iters = 50;
  double newton_tol = 1e-12;
  // CBP: max-norm change of one full cycle. FW: duality gap threshold.
  double convergence_tol = 1e-9;
};

void validate_solver_config(const SolverConfig& cfg);

struct SolveResult {
  Matrix x;
  double objective = 0.0;
  int iterations_used = 0;
  bool converged = false;
  // Duality gap <x - s, grad> at the returned iterate, s the best vertex.
  double worst_kkt_residual = 0.0;
  double repair_magnitude = 0.0;
  bool repair_exceeded = false;
};

// <x, L> - (1/eta) sum_ij sqrt(x_ij). Throws on negative x entries.
double objective(const Matrix& x, const Matrix& cum_loss, double eta);

// Entrywise minimizer of <x, L> + (1/eta) (<x,1> - sum sqrt(x)):
// x_ij = 1 / (4 (1 + eta L_ij)^2). Requires L >= 0.
Matrix unconstrained_leader(const Matrix& cum_loss, double eta);

struct SumProjection {
  std::vector<double> x;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // |sum(x) - 1| at exit
};

// Bregman projection onto {sum = 1} of the point whose f-gradient is grad:
// entries take the form 0.25 (grad_i - lambda - 1)^{-2} with lambda chosen
// by Newton so the entries sum to one (bisection fallback if a step leaves
// the branch grad_i - lambda - 1 < 0).
SumProjection project_to_sum_one(std::span<const double> grad, int newton_max_iters,
                                 double newton_tol);

// Column projection onto the column-simplex set X1; grad_col is the column
// of grad f at the point being projected.
SumProjection project_column_x1(std::span<const double> grad_col, const SolverConfig& cfg);

// Row projections onto X2: rows with sum <= 1 pass through, violating rows
// are projected onto {row sum = 1} with the same machinery transposed.
// x must be entrywise positive.
Matrix project_rows_x2(const Matrix& x, const SolverConfig& cfg, bool* all_converged = nullptr);

// Cyclic Bregman projection route: start from the unconstrained leader and
// alternate X1 / X2 projections until the iterate settles.
SolveResult solve_cbp(const Matrix& cum_loss, double eta, const SolverConfig& cfg);

// Frank-Wolfe route with the open-loop step schedule gamma_k = 2 / (1 + k);
// after K steps with K = 1 the output is exactly the first linmin vertex.
// gap_history, when given, receives the per-iteration duality gaps.
SolveResult solve_fw(const Matrix& cum_loss, double eta, const SolverConfig& cfg,
                     const Matrix& warm_start, std::vector<double>* gap_history = nullptr);

// Dispatch on cfg.route.
SolveResult solve(const Matrix& cum_loss, double eta, const SolverConfig& cfg,
                  const Matrix& warm_start);

}  // namespace oltr
