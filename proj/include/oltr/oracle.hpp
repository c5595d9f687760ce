#pragma once

#include <vector>

#include "oltr/core.hpp"
#include "oltr/environments.hpp"

namespace oltr {

// Enumeration is refused beyond this many ranked lists.
inline constexpr long long kEnumerationGuard = 1000000;

// n! / (n-m)!; throws std::overflow_error past the guard.
long long count_actions(const Dims& dims);

// All ordered m-selections from [0, n), lexicographic order.
std::vector<Action> enumerate_actions(const Dims& dims);

struct LeaderSearch {
  double value = 0.0;
  Matrix x;
};

// Grid + local-refinement search of the regularized-leader objective over
// low-dimensional parameterizations of Conv(X). Supports m = 1 with n <= 3
// and n = m = 2; throws std::invalid_argument otherwise. Independent of the
// solver module by construction.
LeaderSearch brute_force_leader(const Matrix& cum_loss, double eta, const Dims& dims,
                                long grid_density = 1000000);

struct GapSlack {
  double min_slack = 0.0;
  std::vector<int> worst_sequence;
};

// min over all m-sequences without repetition of
//   sum_j (alpha_j beta_j - alpha_{i_j} beta_j) - 0.5 sum_j Delta_{i_j, j};
// nonnegative (within rounding) for valid parameters.
GapSlack verify_gap_inequality(const StochasticParams& p, const Dims& dims);

// Cumulative pseudo-regret of an action trace against the identity ranking,
// using exact expected per-round gaps sum_j beta_j (alpha_j - alpha_{i_j});
// deterministic given the trace.
std::vector<double> empirical_regret_stochastic(const std::vector<Action>& trace,
                                                const StochasticParams& p, const Dims& dims);

// Cumulative realized regret against the best single action in hindsight
// (exhaustive over the enumerable action set) at every prefix.
std::vector<double> empirical_regret_hindsight(const std::vector<Action>& trace,
                                               const std::vector<Matrix>& losses,
                                               const Dims& dims);

}  // namespace oltr
