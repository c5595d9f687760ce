#pragma once

#include <span>

#include "oltr/core.hpp"
#include "oltr/rng.hpp"
#include "oltr/sampler.hpp"
#include "oltr/solver.hpp"

namespace oltr {

// eta_t = 1 / (2 sqrt(t)); throws for t < 1.
double learning_rate(long t);

struct RoundSelection {
  Matrix x;           // regularized leader for the round
  Action action;      // ranking sampled with mean x
  SolveResult solve;  // solver diagnostics
};

// The round loop: solve the regularized-leader problem on the cumulative
// estimated losses, sample a ranking, importance-weight the observed losses,
// accumulate. One instance is strictly sequential across rounds.
class Learner {
 public:
  Learner(const Dims& dims, const SolverConfig& cfg);

  // Solves at eta_t, samples, and advances the warm start. Solver
  // non-convergence is carried in the returned diagnostics, never thrown;
  // the learner proceeds with the flagged iterate.
  RoundSelection select(Rng& sampler_rng);

  // Importance-weighted estimator: zero except at the m played entries,
  // where it is observed / max(x, kEntryFloor). observed[j] is the loss of
  // the item played at position j. clamped, when given, reports whether the
  // denominator floor fired.
  static Matrix estimate_loss(const Matrix& x, const Action& a,
                              std::span<const double> observed, const Dims& dims,
                              bool* clamped = nullptr);

  // Accumulates the estimate and advances the round counter. Throws on
  // negative entries.
  void update(const Matrix& ell_hat);

  long round() const { return t_; }
  const Dims& dims() const { return dims_; }
  const Matrix& cumulative_loss() const { return l_hat_; }
  const Matrix& previous_allocation() const { return x_prev_; }

 private:
  Dims dims_;
  SolverConfig cfg_;
  long t_ = 1;
  Matrix l_hat_;
  Matrix x_prev_;
};

}  // namespace oltr
