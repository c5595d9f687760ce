#include "oltr/learner.hpp"

#include <cmath>
#include <stdexcept>

namespace oltr {

double learning_rate(long t) {
  if (t < 1) throw std::invalid_argument("learning_rate: round must be >= 1");
  return 0.5 / std::sqrt(static_cast<double>(t));
}

Learner::Learner(const Dims& dims, const SolverConfig& cfg) : dims_(dims), cfg_(cfg) {
  validate_dims(dims);
  validate_solver_config(cfg);
  l_hat_ = Matrix(dims.n, dims.m, 0.0);
  // Round-1 warm start for the FW route.
  x_prev_ = Matrix(dims.n, dims.m, 1.0 / static_cast<double>(dims.n));
}

RoundSelection Learner::select(Rng& sampler_rng) {
  RoundSelection sel;
  sel.solve = solve(l_hat_, learning_rate(t_), cfg_, x_prev_);
  sel.x = sel.solve.x;
  x_prev_ = sel.x;
  sel.action = sample_action(sel.x, dims_, sampler_rng);
  return sel;
}

Matrix Learner::estimate_loss(const Matrix& x, const Action& a,
                              std::span<const double> observed, const Dims& dims, bool* clamped) {
  validate_action(a, dims);
  if (static_cast<int>(observed.size()) != dims.m) {
    throw std::invalid_argument("estimate_loss: one observation per position required");
  }
  bool hit_floor = false;
  Matrix ell_hat(dims.n, dims.m, 0.0);
  for (int j = 0; j < dims.m; ++j) {
    const int i = a.items[j];
    double denom = x(i, j);
    if (denom < kEntryFloor) {
      denom = kEntryFloor;
      hit_floor = true;
    }
    ell_hat(i, j) = observed[j] / denom;
  }
  if (clamped != nullptr) *clamped = hit_floor;
  return ell_hat;
}

void Learner::update(const Matrix& ell_hat) {
  if (!ell_hat.same_shape(l_hat_)) throw std::invalid_argument("update: shape mismatch");
  for (double v : ell_hat.raw()) {
    if (v < 0.0) throw std::domain_error("update: negative loss estimate");
  }
  for (std::size_t k = 0; k < l_hat_.raw().size(); ++k) l_hat_.raw()[k] += ell_hat.raw()[k];
  ++t_;
}

}  // namespace oltr
