#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oltr/core.hpp"
#include "oltr/rng.hpp"

namespace oltr {

// Item attractiveness and position examination probabilities of the
// position-based click model. alpha must be strictly decreasing among the
// top m+1 entries (non-increasing below), beta strictly decreasing in (0,1].
struct StochasticParams {
  std::vector<double> alpha;
  std::vector<double> beta;
};

void validate_params(const StochasticParams& p, const Dims& dims);

// Suboptimality gaps of placing item i at position j:
//   j < i : (beta_j - beta_{j+1}) (alpha_j - alpha_i)
//   j = i : 0
//   j > i : (beta_{j-1} - beta_j) (alpha_i - alpha_j)
// with the convention beta_{m+1} = 0 (1-based indexing in the formulas).
struct GapMatrix {
  Matrix delta;       // n x m
  double delta_min;   // min_{i in [m]} alpha_i - alpha_{i+1}
  double delta_beta;  // min_{j in [m]} beta_j - beta_{j+1}
};

GapMatrix gap_matrix(const StochasticParams& p, const Dims& dims);

enum class EnvKind { kStochastic, kPeriodicSwap, kPeriodicReverse, kHardInstance };

struct EnvironmentSpec {
  EnvKind kind = EnvKind::kStochastic;
  StochasticParams params;       // stochastic kinds
  long phase_length = 100000;    // rounds per phase; phase 1 = base params
  std::vector<int> hard_u;       // m-permutation targeted by the hard instance (0-based)
  double hard_delta = 0.0;       // in (0, 1/2)
  bool hard_deterministic = false;  // emit mean losses instead of Bernoulli draws
};

void validate_environment(const EnvironmentSpec& spec, const Dims& dims);

// Parameters in force at round t: odd phases use the base parameters, even
// phases apply the kind's transformation (first-m/last-m attractiveness
// blocks exchanged, or both orderings reversed).
StochasticParams active_params(const EnvironmentSpec& spec, long t);

// Mean loss matrix at round t: 1 - alpha_i beta_j for the stochastic kinds,
// or 1/2 minus hard_delta on the targeted entries for the hard instance.
Matrix mean_loss(const EnvironmentSpec& spec, long t, const Dims& dims);

// One round of losses; stochastic kinds draw entrywise Bernoulli(mean).
Matrix draw_loss(const EnvironmentSpec& spec, long t, const Dims& dims, Rng& rng);

// The identity ranking (item j at position j) and its expected reward
// sum_j alpha_j beta_j, the unique optimum for valid parameters.
std::pair<Action, double> best_allocation(const StochasticParams& p, const Dims& dims);

// Expected reward of an arbitrary ranking under p.
double expected_reward(const Action& a, const StochasticParams& p, const Dims& dims);

// Named parameter sets (n = 10 items, m = 5 positions).
StochasticParams preset(const std::string& name);
std::vector<std::string> preset_names();

// (1/8) sqrt((n - m + 1) / T), capped below 1/2. Requires
// n >= max(m + 3, 2m) and T >= n.
double hard_instance_delta(int n, int m, long T);

}  // namespace oltr
