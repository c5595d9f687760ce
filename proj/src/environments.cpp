#include "oltr/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oltr {

void validate_params(const StochasticParams& p, const Dims& dims) {
  validate_dims(dims);
  if (static_cast<int>(p.alpha.size()) != dims.n) {
    throw std::invalid_argument("params: alpha must have n entries");
  }
  if (static_cast<int>(p.beta.size()) != dims.m) {
    throw std::invalid_argument("params: beta must have m entries");
  }
  for (double a : p.alpha) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("params: alpha entries must be in [0,1]");
  }
  // Strict ordering among the top m+1 attractiveness values, non-increasing
  // below.
  const int strict_until = std::min(dims.m + 1, dims.n);
  for (int i = 0; i + 1 < dims.n; ++i) {
    if (i + 1 < strict_until) {
      if (!(p.alpha[i] > p.alpha[i + 1])) {
        throw std::invalid_argument("params: alpha must strictly decrease among the top m+1");
      }
    } else if (p.alpha[i] < p.alpha[i + 1]) {
      throw std::invalid_argument("params: alpha must be non-increasing");
    }
  }
  for (int j = 0; j < dims.m; ++j) {
    if (!(p.beta[j] > 0.0) || p.beta[j] > 1.0) {
      throw std::invalid_argument("params: beta entries must be in (0,1]");
    }
    if (j + 1 < dims.m && !(p.beta[j] > p.beta[j + 1])) {
      throw std::invalid_argument("params: beta must strictly decrease");
    }
  }
}

GapMatrix gap_matrix(const StochasticParams& p, const Dims& dims) {
  validate_params(p, dims);
  GapMatrix g;
  g.delta = Matrix(dims.n, dims.m, 0.0);
  // beta extended with beta_{m+1} = 0.
  auto beta_at = [&](int j) { return j < dims.m ? p.beta[j] : 0.0; };
  for (int i = 0; i < dims.n; ++i) {
    for (int j = 0; j < dims.m; ++j) {
      if (j < i) {
        g.delta(i, j) = (beta_at(j) - beta_at(j + 1)) * (p.alpha[j] - p.alpha[i]);
      } else if (j > i) {
        g.delta(i, j) = (beta_at(j - 1) - beta_at(j)) * (p.alpha[i] - p.alpha[j]);
      }
    }
  }
  g.delta_min = std::numeric_limits<double>::infinity();
  const int pairs = std::min(dims.m, dims.n - 1);
  for (int i = 0; i < pairs; ++i) g.delta_min = std::min(g.delta_min, p.alpha[i] - p.alpha[i + 1]);
  g.delta_beta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < dims.m; ++j) g.delta_beta = std::min(g.delta_beta, beta_at(j) - beta_at(j + 1));
  return g;
}

void validate_environment(const EnvironmentSpec& spec, const Dims& dims) {
  switch (spec.kind) {
    case EnvKind::kStochastic:
      validate_params(spec.params, dims);
      break;
    case EnvKind::kPeriodicSwap:
      validate_params(spec.params, dims);
      if (spec.phase_length < 1) throw std::invalid_argument("environment: phase_length must be >= 1");
      if (dims.n < 2 * dims.m) {
        throw std::invalid_argument("environment: periodic swap needs n >= 2m");
      }
      break;
    case EnvKind::kPeriodicReverse:
      validate_params(spec.params, dims);
      if (spec.phase_length < 1) throw std::invalid_argument("environment: phase_length must be >= 1");
      break;
    case EnvKind::kHardInstance: {
      if (!(spec.hard_delta > 0.0 && spec.hard_delta < 0.5)) {
        throw std::invalid_argument("environment: hard_delta must lie in (0, 1/2)");
      }
      Action u{spec.hard_u};
      validate_action(u, dims);
      break;
    }
  }
}

StochasticParams active_params(const EnvironmentSpec& spec, long t) {
  const long phase = (t - 1) / std::max<long>(spec.phase_length, 1) + 1;
  const bool even_phase = phase % 2 == 0;
  StochasticParams p = spec.params;
  if (!even_phase) return p;
  const int n = static_cast<int>(p.alpha.size());
  const int m = static_cast<int>(p.beta.size());
  switch (spec.kind) {
    case EnvKind::kPeriodicSwap:
      // Exchange the first m and last m attractiveness values.
      for (int i = 0; i < m; ++i) std::swap(p.alpha[i], p.alpha[n - m + i]);
      break;
    case EnvKind::kPeriodicReverse:
      std::reverse(p.alpha.begin(), p.alpha.end());
      std::reverse(p.beta.begin(), p.beta.end());
      break;
    default:
      break;
  }
  return p;
}

Matrix mean_loss(const EnvironmentSpec& spec, long t, const Dims& dims) {
  Matrix mean(dims.n, dims.m, 0.5);
  if (spec.kind == EnvKind::kHardInstance) {
    for (int j = 0; j < dims.m; ++j) mean(spec.hard_u[j], j) = 0.5 - spec.hard_delta;
    return mean;
  }
  const StochasticParams p = active_params(spec, t);
  for (int i = 0; i < dims.n; ++i) {
    for (int j = 0; j < dims.m; ++j) mean(i, j) = 1.0 - p.alpha[i] * p.beta[j];
  }
  return mean;
}

Matrix draw_loss(const EnvironmentSpec& spec, long t, const Dims& dims, Rng& rng) {
  if (t < 1) throw std::invalid_argument("draw_loss: round must be >= 1");
  Matrix mean = mean_loss(spec, t, dims);
  if (spec.kind == EnvKind::kHardInstance && spec.hard_deterministic) return mean;
  Matrix loss(dims.n, dims.m, 0.0);
  for (int i = 0; i < dims.n; ++i) {
    for (int j = 0; j < dims.m; ++j) loss(i, j) = rng.bernoulli(mean(i, j)) ? 1.0 : 0.0;
  }
  return loss;
}

std::pair<Action, double> best_allocation(const StochasticParams& p, const Dims& dims) {
  validate_params(p, dims);
  Action identity;
  identity.items.resize(dims.m);
  double reward = 0.0;
  for (int j = 0; j < dims.m; ++j) {
    identity.items[j] = j;
    reward += p.alpha[j] * p.beta[j];
  }
  return {identity, reward};
}

double expected_reward(const Action& a, const StochasticParams& p, const Dims& dims) {
  validate_action(a, dims);
  double reward = 0.0;
  for (int j = 0; j < dims.m; ++j) reward += p.alpha[a.items[j]] * p.beta[j];
  return reward;
}

StochasticParams preset(const std::string& name) {
  StochasticParams p;
  p.beta = {1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0};
  if (name == "synthetic_003") {
    for (int i = 0; i < 10; ++i) p.alpha.push_back(0.95 - 0.03 * i);
    return p;
  }
  if (name == "synthetic_001") {
    for (int i = 0; i < 10; ++i) p.alpha.push_back(0.95 - 0.01 * i);
    return p;
  }
  if (name == "yandex") {
    p.alpha = {0.894, 0.231, 0.139, 0.0745, 0.0585, 0.0424, 0.0237, 0.0234, 0.0231, 0.0178};
    p.beta = {0.891, 0.227, 0.0778, 0.0412, 0.0378};
    return p;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"synthetic_003", "synthetic_001", "yandex"}; }

double hard_instance_delta(int n, int m, long T) {
  if (n < std::max(m + 3, 2 * m)) {
    throw std::invalid_argument("hard_instance_delta: need n >= max(m+3, 2m)");
  }
  if (T < n) throw std::invalid_argument("hard_instance_delta: need T >= n");
  const double delta = 0.125 * std::sqrt(static_cast<double>(n - m + 1) / static_cast<double>(T));
  return std::min(delta, 0.5 - 1e-9);
}

}  // namespace oltr
