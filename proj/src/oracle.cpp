#include "oltr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oltr {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section search for a strictly convex h on [lo, hi].
double golden_minimize(double lo, double hi, const auto& h) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = h(x2);
    }
  }
  return 0.5 * (a + b);
}

double reduced_objective_2x1(double a, const Matrix& L, double eta) {
  return L(0, 0) * a + L(1, 0) * (1.0 - a) - (std::sqrt(a) + std::sqrt(1.0 - a)) / eta;
}

double reduced_objective_2x2(double a, const Matrix& L, double eta) {
  const double b = 1.0 - a;
  return L(0, 0) * a + L(0, 1) * b + L(1, 0) * b + L(1, 1) * a -
         2.0 * (std::sqrt(a) + std::sqrt(b)) / eta;
}

double reduced_objective_3x1(double a, double b, const Matrix& L, double eta) {
  const double c = 1.0 - a - b;
  return L(0, 0) * a + L(1, 0) * b + L(2, 0) * c -
         (std::sqrt(a) + std::sqrt(b) + std::sqrt(c)) / eta;
}

void enumerate_recursive(const Dims& dims, std::vector<int>& prefix, std::vector<char>& used,
                         std::vector<Action>& out) {
  if (static_cast<int>(prefix.size()) == dims.m) {
    out.push_back(Action{prefix});
    return;
  }
  for (int i = 0; i < dims.n; ++i) {
    if (used[i]) continue;
    used[i] = 1;
    prefix.push_back(i);
    enumerate_recursive(dims, prefix, used, out);
    prefix.pop_back();
    used[i] = 0;
  }
}

}  // namespace

long long count_actions(const Dims& dims) {
  validate_dims(dims);
  long long count = 1;
  for (int k = 0; k < dims.m; ++k) {
    count *= dims.n - k;
    if (count > kEnumerationGuard) {
      throw std::overflow_error("count_actions: more than 1e6 ranked lists");
    }
  }
  return count;
}

std::vector<Action> enumerate_actions(const Dims& dims) {
  const long long count = count_actions(dims);
  std::vector<Action> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> prefix;
  std::vector<char> used(dims.n, 0);
  enumerate_recursive(dims, prefix, used, out);
  return out;
}

LeaderSearch brute_force_leader(const Matrix& cum_loss, double eta, const Dims& dims,
                                long grid_density) {
  validate_dims(dims);
  if (!(eta > 0.0)) throw std::invalid_argument("brute_force_leader: eta must be positive");

  if (dims.m == 1 && dims.n == 2) {
    auto h = [&](double a) { return reduced_objective_2x1(a, cum_loss, eta); };
    double best_a = 0.5, best_v = h(0.5);
    const long g = std::max<long>(grid_density, 3);
    for (long k = 0; k <= g; ++k) {
      const double a = static_cast<double>(k) / static_cast<double>(g);
      const double v = h(a);
      if (v < best_v) {
        best_v = v;
        best_a = a;
      }
    }
    const double step = 1.0 / static_cast<double>(g);
    const double a = golden_minimize(std::max(0.0, best_a - step), std::min(1.0, best_a + step), h);
    LeaderSearch out;
    out.value = h(a);
    out.x = Matrix(2, 1);
    out.x(0, 0) = a;
    out.x(1, 0) = 1.0 - a;
    return out;
  }

  if (dims.m == 2 && dims.n == 2) {
    auto h = [&](double a) { return reduced_objective_2x2(a, cum_loss, eta); };
    const double a = golden_minimize(0.0, 1.0, h);
    LeaderSearch out;
    out.value = h(a);
    out.x = Matrix(2, 2);
    out.x(0, 0) = out.x(1, 1) = a;
    out.x(0, 1) = out.x(1, 0) = 1.0 - a;
    return out;
  }

  if (dims.m == 1 && dims.n == 3) {
    // Grid over the simplex, then repeated local zoom.
    auto h = [&](double a, double b) { return reduced_objective_3x1(a, b, cum_loss, eta); };
    const long per_axis = std::max<long>(static_cast<long>(std::sqrt(static_cast<double>(grid_density))), 50);
    double lo_a = 0.0, hi_a = 1.0, lo_b = 0.0, hi_b = 1.0;
    double best_a = 1.0 / 3.0, best_b = 1.0 / 3.0;
    double best_v = h(best_a, best_b);
    for (int zoom = 0; zoom < 6; ++zoom) {
      for (long ka = 0; ka <= per_axis; ++ka) {
        const double a = lo_a + (hi_a - lo_a) * static_cast<double>(ka) / static_cast<double>(per_axis);
        for (long kb = 0; kb <= per_axis; ++kb) {
          const double b = lo_b + (hi_b - lo_b) * static_cast<double>(kb) / static_cast<double>(per_axis);
          if (a + b > 1.0) break;
          const double v = h(a, b);
          if (v < best_v) {
            best_v = v;
            best_a = a;
            best_b = b;
          }
        }
      }
      const double span_a = (hi_a - lo_a) / static_cast<double>(per_axis) * 2.0;
      const double span_b = (hi_b - lo_b) / static_cast<double>(per_axis) * 2.0;
      lo_a = std::max(0.0, best_a - span_a);
      hi_a = std::min(1.0, best_a + span_a);
      lo_b = std::max(0.0, best_b - span_b);
      hi_b = std::min(1.0, best_b + span_b);
    }
    LeaderSearch out;
    out.value = best_v;
    out.x = Matrix(3, 1);
    out.x(0, 0) = best_a;
    out.x(1, 0) = best_b;
    out.x(2, 0) = 1.0 - best_a - best_b;
    return out;
  }

  throw std::invalid_argument("brute_force_leader: only m=1 with n<=3 and n=m=2 are supported");
}

GapSlack verify_gap_inequality(const StochasticParams& p, const Dims& dims) {
  const GapMatrix gaps = gap_matrix(p, dims);
  const std::vector<Action> sequences = enumerate_actions(dims);
  GapSlack report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (const Action& seq : sequences) {
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j < dims.m; ++j) {
      lhs += p.beta[j] * (p.alpha[j] - p.alpha[seq.items[j]]);
      rhs += gaps.delta(seq.items[j], j);
    }
    const double slack = lhs - 0.5 * rhs;
    if (slack < report.min_slack) {
      report.min_slack = slack;
      report.worst_sequence = seq.items;
    }
  }
  return report;
}

std::vector<double> empirical_regret_stochastic(const std::vector<Action>& trace,
                                                const StochasticParams& p, const Dims& dims) {
  if (trace.empty()) throw std::invalid_argument("empirical_regret_stochastic: empty trace");
  validate_params(p, dims);
  std::vector<double> regret;
  regret.reserve(trace.size());
  double cum = 0.0;
  for (const Action& a : trace) {
    for (int j = 0; j < dims.m; ++j) cum += p.beta[j] * (p.alpha[j] - p.alpha[a.items[j]]);
    regret.push_back(cum);
  }
  return regret;
}

std::vector<double> empirical_regret_hindsight(const std::vector<Action>& trace,
                                               const std::vector<Matrix>& losses,
                                               const Dims& dims) {
  if (trace.empty()) throw std::invalid_argument("empirical_regret_hindsight: empty trace");
  if (trace.size() != losses.size()) {
    throw std::invalid_argument("empirical_regret_hindsight: one loss matrix per action required");
  }
  const std::vector<Action> all_actions = enumerate_actions(dims);
  std::vector<double> regret;
  regret.reserve(trace.size());
  Matrix cum_loss(dims.n, dims.m, 0.0);
  double player = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    for (std::size_t k = 0; k < cum_loss.raw().size(); ++k) {
      cum_loss.raw()[k] += losses[t].raw()[k];
    }
    for (int j = 0; j < dims.m; ++j) player += losses[t](trace[t].items[j], j);
    double best = std::numeric_limits<double>::infinity();
    for (const Action& a : all_actions) {
      double v = 0.0;
      for (int j = 0; j < dims.m; ++j) v += cum_loss(a.items[j], j);
      best = std::min(best, v);
    }
    regret.push_back(player - best);
  }
  return regret;
}

}  // namespace oltr
