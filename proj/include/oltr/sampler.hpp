#pragma once

#include <vector>

#include "oltr/core.hpp"
#include "oltr/rng.hpp"

namespace oltr {

// Greedy peel-off stops once the residual L1 mass drops below this.
inline constexpr double kResidualTol = 1e-9;

// Convex combination of permutation matrices: sum_k gamma_k Pi^k
// reconstructs the decomposed doubly stochastic matrix.
struct Decomposition {
  struct Term {
    double gamma = 0.0;
    std::vector<int> perm;  // row -> column
  };
  std::vector<Term> terms;
};

// Birkhoff-von Neumann decomposition by repeated positive-support matchings:
// at most n^2 - 2n + 2 terms, gammas renormalized to sum exactly one.
// w must be doubly stochastic.
Decomposition decompose(const Matrix& w);

// sum_k gamma_k Pi^k as an n x n matrix.
Matrix reconstruct(const Decomposition& d, int n);

// Picks one term with probability gamma_k using the supplied generator.
const Decomposition::Term& pick_term(const Decomposition& d, Rng& rng);

// First m columns of the sampled permutation as a ranked list, so the
// sampled action matrix has mean x.
Action action_from_permutation(const std::vector<int>& perm, const Dims& dims);

// Complete -> decompose -> sample -> truncate. x must be feasible.
Action sample_action(const Matrix& x, const Dims& dims, Rng& rng);

}  // namespace oltr
