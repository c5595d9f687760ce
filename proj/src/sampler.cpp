#include "oltr/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oltr/polytope.hpp"

namespace oltr {

Decomposition decompose(const Matrix& w) {
  if (w.rows() != w.cols()) throw std::invalid_argument("decompose: matrix must be square");
  const int n = w.rows();
  const int max_terms = n * n - 2 * n + 2;

  // Inputs coming out of the solver carry feasibility error up to ~1e-7,
  // which peeling can smear across up to n^2 entries; dust below this is
  // folded into the found terms instead of failing.
  constexpr double kDustTol = 1e-4;

  Decomposition d;
  Matrix residual = w;
  while (l1_norm(residual) > kResidualTol &&
         static_cast<int>(d.terms.size()) < std::max(max_terms, 1)) {
    std::vector<int> perm;
    try {
      perm = positive_support_matching(residual);
    } catch (const std::runtime_error&) {
      if (d.terms.empty() || l1_norm(residual) > kDustTol) throw;
      break;
    }
    double gamma = residual(0, perm[0]);
    for (int i = 1; i < n; ++i) gamma = std::min(gamma, residual(i, perm[i]));
    for (int i = 0; i < n; ++i) residual(i, perm[i]) -= gamma;
    d.terms.push_back({gamma, std::move(perm)});
  }
  if (d.terms.empty()) throw std::invalid_argument("decompose: matrix has no mass");

  // Subtraction never reaches exactly zero in floating point; fold the
  // leftover mass proportionally, i.e. renormalize the gammas.
  double total = 0.0;
  for (const auto& term : d.terms) total += term.gamma;
  for (auto& term : d.terms) term.gamma /= total;
  return d;
}

Matrix reconstruct(const Decomposition& d, int n) {
  Matrix w(n, n, 0.0);
  for (const auto& term : d.terms) {
    for (int i = 0; i < n; ++i) w(i, term.perm[i]) += term.gamma;
  }
  return w;
}

const Decomposition::Term& pick_term(const Decomposition& d, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(d.terms.size());
  for (const auto& term : d.terms) weights.push_back(term.gamma);
  return d.terms[rng.discrete(weights)];
}

Action action_from_permutation(const std::vector<int>& perm, const Dims& dims) {
  Action a;
  a.items.assign(dims.m, -1);
  for (int i = 0; i < static_cast<int>(perm.size()); ++i) {
    if (perm[i] < dims.m) a.items[perm[i]] = i;
  }
  validate_action(a, dims);
  return a;
}

Action sample_action(const Matrix& x, const Dims& dims, Rng& rng) {
  const Matrix w = complete_to_doubly_stochastic(x, dims);
  const Decomposition d = decompose(w);
  return action_from_permutation(pick_term(d, rng).perm, dims);
}

}  // namespace oltr
