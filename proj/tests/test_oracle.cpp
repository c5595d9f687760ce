#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>
#include <vector>

#include "oltr/core.hpp"
#include "oltr/environments.hpp"
#include "oltr/oracle.hpp"
#include "oltr/rng.hpp"
#include "oltr/solver.hpp"

using namespace oltr;

TEST_SUITE("oracle") {

TEST_CASE("enumeration counts and uniqueness") {
  CHECK(count_actions(Dims{3, 2}) == 6);
  CHECK(count_actions(Dims{2, 2}) == 2);
  CHECK(count_actions(Dims{10, 5}) == 30240);
  CHECK(enumerate_actions(Dims{3, 2}).size() == 6);

  const std::vector<Action> all = enumerate_actions(Dims{5, 3});
  std::set<std::vector<int>> unique;
  for (const Action& a : all) unique.insert(a.items);
  CHECK(unique.size() == all.size());

  CHECK_THROWS_AS(count_actions(Dims{12, 8}), std::overflow_error);
}

TEST_CASE("brute-force leader recovers symmetry") {
  const LeaderSearch result = brute_force_leader(Matrix(2, 1, 0.0), 0.5, Dims{2, 1});
  CHECK(result.x(0, 0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(result.x(1, 0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("brute-force leader agrees with the solver") {
  Matrix cum_loss(2, 1);
  cum_loss(0, 0) = 0.0;
  cum_loss(1, 0) = 10.0;
  SolverConfig cfg;
  const SolveResult solved = solve_cbp(cum_loss, 0.5, cfg);
  const LeaderSearch searched = brute_force_leader(cum_loss, 0.5, Dims{2, 1});
  CHECK(solved.objective == doctest::Approx(searched.value).epsilon(1e-5));

  // three items, one position
  Matrix three(3, 1);
  three(0, 0) = 0.3;
  three(1, 0) = 1.1;
  three(2, 0) = 2.6;
  const SolveResult s3 = solve_cbp(three, 0.4, cfg);
  const LeaderSearch b3 = brute_force_leader(three, 0.4, Dims{3, 1});
  CHECK(s3.objective == doctest::Approx(b3.value).epsilon(1e-5));

  // two-by-two doubly stochastic case
  Matrix square(2, 2);
  square(0, 0) = 0.2;
  square(0, 1) = 1.4;
  square(1, 0) = 0.9;
  square(1, 1) = 0.1;
  const SolveResult s4 = solve_cbp(square, 0.6, cfg);
  const LeaderSearch b4 = brute_force_leader(square, 0.6, Dims{2, 2});
  CHECK(s4.objective == doctest::Approx(b4.value).epsilon(1e-5));

  CHECK_THROWS_AS(brute_force_leader(Matrix(4, 2, 0.0), 0.5, Dims{4, 2}), std::invalid_argument);
}

TEST_CASE("tiny regularization pushes the leader to the linmin vertex") {
  Matrix cum_loss(2, 1);
  cum_loss(0, 0) = 5.0;
  cum_loss(1, 0) = 1.0;
  const LeaderSearch searched = brute_force_leader(cum_loss, 200.0, Dims{2, 1});
  CHECK(searched.x(1, 0) > 0.99);  // eta huge: regularizer negligible
}

TEST_CASE("gap inequality slack is tight at the identity and nonnegative") {
  const Dims dims{10, 5};
  const StochasticParams p = preset("synthetic_003");
  CHECK(verify_gap_inequality(p, dims).min_slack >= -1e-12);

  // m = 1: slack is beta1(a1-ai) - 0.5(beta1-beta2)(a1-ai) >= 0
  const GapSlack base = verify_gap_inequality(StochasticParams{{0.9, 0.4}, {0.7}}, Dims{2, 1});
  CHECK(base.min_slack >= -1e-15);

  // the identity sequence contributes exactly zero slack
  const GapMatrix gaps = gap_matrix(p, dims);
  double lhs = 0.0, rhs = 0.0;
  for (int j = 0; j < dims.m; ++j) {
    lhs += p.beta[j] * (p.alpha[j] - p.alpha[j]);
    rhs += gaps.delta(j, j);
  }
  CHECK(lhs == 0.0);
  CHECK(rhs == 0.0);
}

TEST_CASE("gap inequality sweep on random parameters") {
  Rng rng(51);
  double min_slack = 1e300;
  for (int draw = 0; draw < 30; ++draw) {
    const int n = rng.uniform_int(2, 7);
    const int m = rng.uniform_int(1, std::min(4, n) + 1);
    const Dims dims{n, m};
    StochasticParams p;
    p.alpha.resize(n);
    p.beta.resize(m);
    for (int attempt = 0;; ++attempt) {
      REQUIRE(attempt < 500);
      for (double& a : p.alpha) a = rng.uniform01();
      std::sort(p.alpha.rbegin(), p.alpha.rend());
      bool ok = true;
      for (int i = 0; i + 1 < std::min(m + 1, n); ++i) ok = ok && p.alpha[i] - p.alpha[i + 1] > 1e-3;
      if (!ok) continue;
      for (double& b : p.beta) b = 0.05 + 0.95 * rng.uniform01();
      std::sort(p.beta.rbegin(), p.beta.rend());
      for (int j = 0; j + 1 < m; ++j) ok = ok && p.beta[j] - p.beta[j + 1] > 1e-3;
      if (ok) break;
    }
    min_slack = std::min(min_slack, verify_gap_inequality(p, dims).min_slack);
  }
  CHECK(min_slack >= -1e-12);
}

TEST_CASE("stochastic regret of the best action is zero") {
  const Dims dims{4, 2};
  StochasticParams p{{0.9, 0.7, 0.5, 0.3}, {0.8, 0.4}};
  const std::vector<Action> trace(10, Action{{0, 1}});
  const std::vector<double> regret = empirical_regret_stochastic(trace, p, dims);
  for (double r : regret) CHECK(r == 0.0);
}

TEST_CASE("single-round regret formula") {
  const Dims dims{3, 1};
  StochasticParams p{{0.9, 0.6, 0.2}, {0.8}};
  const std::vector<double> regret = empirical_regret_stochastic({Action{{2}}}, p, dims);
  REQUIRE(regret.size() == 1);
  CHECK(regret[0] == doctest::Approx(0.8 * (0.9 - 0.2)));
}

TEST_CASE("stochastic regret ignores realized randomness") {
  // identical traces must give identical regret regardless of loss draws
  const Dims dims{3, 2};
  StochasticParams p{{0.9, 0.6, 0.2}, {0.8, 0.3}};
  std::vector<Action> trace{{Action{{1, 0}}, Action{{2, 1}}, Action{{0, 1}}}};
  CHECK(empirical_regret_stochastic(trace, p, dims) ==
        empirical_regret_stochastic(trace, p, dims));
}

TEST_CASE("hindsight regret uses the enumerated best action") {
  const Dims dims{3, 1};
  std::vector<Matrix> losses;
  std::vector<Action> trace;
  Rng rng(52);
  for (int t = 0; t < 8; ++t) {
    Matrix loss(3, 1);
    for (double& v : loss.raw()) v = rng.uniform01();
    losses.push_back(loss);
    trace.push_back(Action{{rng.uniform_int(0, 3)}});
  }
  const std::vector<double> regret = empirical_regret_hindsight(trace, losses, dims);
  // recompute the final value directly
  double player = 0.0;
  std::vector<double> column(3, 0.0);
  for (int t = 0; t < 8; ++t) {
    player += losses[t](trace[t].items[0], 0);
    for (int i = 0; i < 3; ++i) column[i] += losses[t](i, 0);
  }
  const double best = std::min({column[0], column[1], column[2]});
  CHECK(regret.back() == doctest::Approx(player - best));
  CHECK_THROWS_AS(empirical_regret_hindsight({}, {}, dims), std::invalid_argument);
}

}  // TEST_SUITE
