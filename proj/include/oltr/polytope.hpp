#pragma once

#include <vector>

#include "oltr/core.hpp"

namespace oltr {

// Smallest admissible edge weight when searching for a positive-support
// permutation: below accumulated subtraction error, above denormal noise.
inline constexpr double kSupportTol = 1e-12;

// Bregman divergence D_f(x, y) for f(x) = <x, 1> + sum_i -sqrt(x_i).
// Requires x >= 0 and y > 0 entrywise; throws std::domain_error otherwise.
double bregman_divergence(const Matrix& x, const Matrix& y);

// Completes a feasible n x m allocation into an n x n doubly stochastic
// matrix: columns [0, m) copy x, the remaining row mass is spread uniformly
// over columns [m, n). For m == n, x is returned unchanged.
Matrix complete_to_doubly_stochastic(const Matrix& x, const Dims& dims);

// Permutation pi (row -> column) with w(i, pi[i]) > support_tol for all i;
// w must be a nonnegative multiple of a doubly stochastic matrix. Free
// columns are preferred over augmenting, and columns are tried in increasing
// index order, which pins the tie-break (identity wins where it can).
// Throws std::runtime_error("no perfect matching") when the threshold
// disconnects the support graph.
std::vector<int> positive_support_matching(const Matrix& w, double support_tol = kSupportTol);

// argmin over ranked lists of <X_a, r>, a min-cost assignment of the m
// positions to distinct items (dummy zero-cost columns square the problem).
// Ties resolve to the lexicographically smallest item sequence.
Action linmin(const Matrix& r, const Dims& dims);

// Optimal assignment value only; skips the lexicographic refinement.
double linmin_value(const Matrix& r, const Dims& dims);

}  // namespace oltr
