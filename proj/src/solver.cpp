#include "oltr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oltr/polytope.hpp"

namespace oltr {

namespace {

double floored(double v) { return std::max(v, kEntryFloor); }

// d/dx of -sqrt(x), evaluated at the floored iterate.
double grad_psi(double x) { return -0.5 / std::sqrt(floored(x)); }

// Gradient of the full objective <x, L> + (1/eta) Psi(x).
Matrix objective_gradient(const Matrix& x, const Matrix& cum_loss, double eta) {
  Matrix g(x.rows(), x.cols());
  const double inv_eta = 1.0 / eta;
  for (std::size_t k = 0; k < x.raw().size(); ++k) {
    g.raw()[k] = cum_loss.raw()[k] + inv_eta * grad_psi(x.raw()[k]);
  }
  return g;
}

// Duality gap <x - s, grad> with s the best vertex; nonnegative up to
// assignment rounding, zero exactly at the constrained optimum.
double duality_gap(const Matrix& x, const Matrix& grad, const Dims& dims) {
  return dot(x, grad) - linmin_value(grad, dims);
}

double sum_for_lambda(std::span<const double> grad, double lambda) {
  double s = 0.0;
  for (double g : grad) {
    const double d = g - lambda - 1.0;
    s += 0.25 / (d * d);
  }
  return s;
}

// Clamp tiny negatives and renormalize every column sum to one; returns the
// largest entry change.
double repair_allocation(Matrix& x) {
  double moved = 0.0;
  for (int j = 0; j < x.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      if (x(i, j) < 0.0) {
        moved = std::max(moved, -x(i, j));
        x(i, j) = 0.0;
      }
      s += x(i, j);
    }
    if (s <= 0.0) throw std::runtime_error("repair: column collapsed to zero mass");
    for (int i = 0; i < x.rows(); ++i) {
      const double fixed = x(i, j) / s;
      moved = std::max(moved, std::abs(fixed - x(i, j)));
      x(i, j) = fixed;
    }
  }
  return moved;
}

SolveResult finalize(Matrix x, const Matrix& cum_loss, double eta, const Dims& dims,
                     int iterations, bool converged) {
  SolveResult result;
  result.repair_magnitude = repair_allocation(x);
  result.repair_exceeded = result.repair_magnitude > kRepairTol;
  result.objective = objective(x, cum_loss, eta);
  result.worst_kkt_residual = duality_gap(x, objective_gradient(x, cum_loss, eta), dims);
  result.iterations_used = iterations;
  result.converged = converged && !result.repair_exceeded;
  result.x = std::move(x);
  return result;
}

}  // namespace

void validate_solver_config(const SolverConfig& cfg) {
  if (cfg.fw_max_iters < 1) throw std::invalid_argument("solver config: fw_max_iters must be >= 1");
  if (cfg.cbp_max_cycles < 1) {
    throw std::invalid_argument("solver config: cbp_max_cycles must be >= 1");
  }
  if (cfg.newton_max_iters < 1) {
    throw std::invalid_argument("solver config: newton_max_iters must be >= 1");
  }
  if (!(cfg.newton_tol > 0.0)) throw std::invalid_argument("solver config: newton_tol must be > 0");
  if (!(cfg.convergence_tol > 0.0)) {
    throw std::invalid_argument("solver config: convergence_tol must be > 0");
  }
}

double objective(const Matrix& x, const Matrix& cum_loss, double eta) {
  if (!x.same_shape(cum_loss)) throw std::invalid_argument("objective: shape mismatch");
  if (!(eta > 0.0)) throw std::invalid_argument("objective: eta must be positive");
  double linear = 0.0, entropy = 0.0;
  for (std::size_t k = 0; k < x.raw().size(); ++k) {
    const double v = x.raw()[k];
    if (v < 0.0) throw std::domain_error("objective: negative entry in x");
    linear += v * cum_loss.raw()[k];
    entropy += std::sqrt(v);
  }
  return linear - entropy / eta;
}

Matrix unconstrained_leader(const Matrix& cum_loss, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("unconstrained_leader: eta must be positive");
  Matrix x(cum_loss.rows(), cum_loss.cols());
  for (std::size_t k = 0; k < cum_loss.raw().size(); ++k) {
    const double l = cum_loss.raw()[k];
    if (l < 0.0) throw std::domain_error("unconstrained_leader: negative cumulative loss");
    const double denom = 1.0 + eta * l;
    x.raw()[k] = 0.25 / (denom * denom);
  }
  return x;
}

SumProjection project_to_sum_one(std::span<const double> grad, int newton_max_iters,
                                 double newton_tol) {
  SumProjection out;
  const int k = static_cast<int>(grad.size());
  if (k == 0) throw std::invalid_argument("project_to_sum_one: empty gradient");
  double g_max = -std::numeric_limits<double>::infinity();
  for (double g : grad) g_max = std::max(g_max, g);
  const double pole = g_max - 1.0;  // entries stay positive iff lambda > pole

  double lambda = 0.0;
  if (lambda <= pole) lambda = pole + 0.5;

  bool bisect = false;
  double residual = sum_for_lambda(grad, lambda) - 1.0;
  int used = 0;
  for (; used < newton_max_iters && std::abs(residual) >= newton_tol; ++used) {
    double slope = 0.0;
    for (double g : grad) {
      const double d = g - lambda - 1.0;
      slope += 0.5 / (d * d * d);
    }
    const double next = lambda - residual / slope;
    if (!(next > pole) || !std::isfinite(next)) {
      bisect = true;
      break;
    }
    lambda = next;
    residual = sum_for_lambda(grad, lambda) - 1.0;
  }

  if (bisect || std::abs(residual) >= newton_tol) {
    // The sum is strictly decreasing in lambda on (pole, inf): bracket and
    // bisect from just right of the pole.
    double lo = pole + 1e-14 * (1.0 + std::abs(pole));
    double hi = std::max(lambda, lo + 1.0);
    double step = 1.0;
    while (sum_for_lambda(grad, hi) > 1.0 && step < 1e300) {
      step *= 2.0;
      hi += step;
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sum_for_lambda(grad, mid) > 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lambda = 0.5 * (lo + hi);
    residual = sum_for_lambda(grad, lambda) - 1.0;
  }

  out.lambda = lambda;
  out.iterations = used;
  out.residual = std::abs(residual);
  out.converged = out.residual < newton_tol;
  out.x.resize(k);
  for (int i = 0; i < k; ++i) {
    const double d = grad[i] - lambda - 1.0;
    out.x[i] = 0.25 / (d * d);
  }
  return out;
}

SumProjection project_column_x1(std::span<const double> grad_col, const SolverConfig& cfg) {
  return project_to_sum_one(grad_col, cfg.newton_max_iters, cfg.newton_tol);
}

Matrix project_rows_x2(const Matrix& x, const SolverConfig& cfg, bool* all_converged) {
  Matrix out = x;
  bool ok = true;
  std::vector<double> grad_row(x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
      if (!(x(i, j) > 0.0)) throw std::domain_error("project_rows_x2: nonpositive entry");
      s += x(i, j);
    }
    if (s <= 1.0) continue;
    for (int j = 0; j < x.cols(); ++j) grad_row[j] = 1.0 + grad_psi(x(i, j));
    const SumProjection proj = project_to_sum_one(grad_row, cfg.newton_max_iters, cfg.newton_tol);
    ok = ok && proj.converged;
    for (int j = 0; j < x.cols(); ++j) out(i, j) = proj.x[j];
  }
  if (all_converged != nullptr) *all_converged = ok;
  return out;
}

SolveResult solve_cbp(const Matrix& cum_loss, double eta, const SolverConfig& cfg) {
  validate_solver_config(cfg);
  const Dims dims{cum_loss.rows(), cum_loss.cols()};
  validate_dims(dims);

  Matrix x = unconstrained_leader(cum_loss, eta);
  std::vector<double> grad_col(dims.n);
  bool converged = false;
  bool newton_ok = true;
  int cycles = 0;
  Matrix prev = x;
  while (cycles < cfg.cbp_max_cycles) {
    ++cycles;
    for (int j = 0; j < dims.m; ++j) {
      for (int i = 0; i < dims.n; ++i) grad_col[i] = 1.0 + grad_psi(x(i, j));
      const SumProjection proj = project_column_x1(grad_col, cfg);
      newton_ok = newton_ok && proj.converged;
      for (int i = 0; i < dims.n; ++i) x(i, j) = proj.x[i];
    }
    bool rows_ok = true;
    x = project_rows_x2(x, cfg, &rows_ok);
    newton_ok = newton_ok && rows_ok;
    if (max_abs_diff(x, prev) < cfg.convergence_tol) {
      converged = true;
      break;
    }
    prev = x;
  }
  return finalize(std::move(x), cum_loss, eta, dims, cycles, converged && newton_ok);
}

SolveResult solve_fw(const Matrix& cum_loss, double eta, const SolverConfig& cfg,
                     const Matrix& warm_start, std::vector<double>* gap_history) {
  validate_solver_config(cfg);
  const Dims dims{cum_loss.rows(), cum_loss.cols()};
  validate_dims(dims);
  if (!warm_start.same_shape(cum_loss)) {
    throw std::invalid_argument("solve_fw: warm start shape mismatch");
  }
  if (gap_history != nullptr) gap_history->clear();

  Matrix x = warm_start;
  int used = 0;
  for (int k = 1; k <= cfg.fw_max_iters; ++k) {
    const Matrix grad = objective_gradient(x, cum_loss, eta);
    const Matrix vertex = action_to_matrix(linmin(grad, dims), dims);
    const double gap = dot(x, grad) - dot(vertex, grad);
    if (gap_history != nullptr) gap_history->push_back(gap);
    if (gap < cfg.convergence_tol) break;  // already converged, keep the iterate
    const double gamma = 2.0 / (1.0 + k);
    for (std::size_t idx = 0; idx < x.raw().size(); ++idx) {
      x.raw()[idx] = (1.0 - gamma) * x.raw()[idx] + gamma * vertex.raw()[idx];
    }
    used = k;
  }
  SolveResult result = finalize(std::move(x), cum_loss, eta, dims, used, true);
  result.converged = result.worst_kkt_residual < cfg.convergence_tol && !result.repair_exceeded;
  return result;
}

SolveResult solve(const Matrix& cum_loss, double eta, const SolverConfig& cfg,
                  const Matrix& warm_start) {
  if (cfg.route == SolverRoute::kCbp) return solve_cbp(cum_loss, eta, cfg);
  return solve_fw(cum_loss, eta, cfg, warm_start);
}

}  // namespace oltr
