#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oltr/core.hpp"
#include "oltr/oracle.hpp"
#include "oltr/polytope.hpp"
#include "oltr/rng.hpp"
#include "oltr/sampler.hpp"

using namespace oltr;

namespace {

double action_cost(const Action& a, const Matrix& r) {
  double v = 0.0;
  for (int j = 0; j < static_cast<int>(a.items.size()); ++j) v += r(a.items[j], j);
  return v;
}

Matrix random_birkhoff(Rng& rng, int n, int mixtures) {
  Matrix w(n, n, 0.0);
  std::vector<double> weights(mixtures);
  double total = 0.0;
  for (double& v : weights) {
    v = -std::log(1.0 - rng.uniform01());
    total += v;
  }
  for (int c = 0; c < mixtures; ++c) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i + 1)]);
    for (int i = 0; i < n; ++i) w(i, perm[i]) += weights[c] / total;
  }
  return w;
}

}  // namespace

TEST_SUITE("polytope") {

TEST_CASE("linmin single column picks the cheapest item") {
  Matrix r(2, 1);
  r(0, 0) = 3.0;
  r(1, 0) = 1.0;
  const Action a = linmin(r, Dims{2, 1});
  CHECK(a.items == std::vector<int>{1});
  CHECK(linmin_value(r, Dims{2, 1}) == doctest::Approx(1.0));
}

TEST_CASE("linmin matches exhaustive search") {
  const Dims dims{3, 2};
  Rng rng(5);
  const std::vector<Action> all = enumerate_actions(dims);
  for (int rep = 0; rep < 50; ++rep) {
    Matrix r(dims.n, dims.m);
    for (double& v : r.raw()) v = rng.uniform01() * 4.0 - 2.0;
    const Action got = linmin(r, dims);
    double best = action_cost(all[0], r);
    for (const Action& a : all) best = std::min(best, action_cost(a, r));
    CHECK(action_cost(got, r) == doctest::Approx(best).epsilon(1e-12));
    CHECK(linmin_value(r, dims) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("linmin value lower-bounds every ranked list") {
  const Dims dims{5, 3};
  Rng rng(6);
  const std::vector<Action> all = enumerate_actions(dims);
  Matrix r(dims.n, dims.m);
  for (double& v : r.raw()) v = rng.uniform01();
  const double value = linmin_value(r, dims);
  for (const Action& a : all) CHECK(value <= action_cost(a, r) + 1e-12);
}

TEST_CASE("linmin breaks ties lexicographically") {
  const Dims dims{4, 3};
  const Matrix zero(dims.n, dims.m, 0.0);
  CHECK(linmin(zero, dims).items == std::vector<int>{0, 1, 2});

  // two optimal assignments; the smaller first item must win
  Matrix r(2, 2);
  r(0, 0) = 0.5;
  r(1, 0) = 0.5;
  r(0, 1) = 0.3;
  r(1, 1) = 0.3;  // (0,1) and (1,0) both cost 0.8
  CHECK(linmin(r, Dims{2, 2}).items == std::vector<int>{0, 1});
}

TEST_CASE("positive_support_matching on identity and ties") {
  Matrix eye(3, 3, 0.0);
  for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
  CHECK(positive_support_matching(eye) == std::vector<int>{0, 1, 2});

  Matrix half(2, 2, 0.5);
  CHECK(positive_support_matching(half) == std::vector<int>{0, 1});
}

TEST_CASE("positive_support_matching satisfies its postcondition on random matrices") {
  Rng rng(7);
  for (int rep = 0; rep < 30; ++rep) {
    const Matrix w = random_birkhoff(rng, 5, 8);
    const std::vector<int> pi = positive_support_matching(w);
    std::vector<char> seen(5, 0);
    for (int i = 0; i < 5; ++i) {
      CHECK(w(i, pi[i]) > kSupportTol);
      CHECK_FALSE(seen[pi[i]]);
      seen[pi[i]] = 1;
    }
  }
}

TEST_CASE("positive_support_matching reports a disconnected support") {
  Matrix w(2, 2, 0.0);
  w(0, 0) = 1.0;
  w(1, 0) = 1.0;  // column 1 empty
  CHECK_THROWS_AS(positive_support_matching(w), std::runtime_error);
}

TEST_CASE("complete_to_doubly_stochastic n=2 m=1") {
  Matrix x(2, 1);
  x(0, 0) = 0.7;
  x(1, 0) = 0.3;
  const Matrix w = complete_to_doubly_stochastic(x, Dims{2, 1});
  CHECK(w(0, 0) == doctest::Approx(0.7));
  CHECK(w(0, 1) == doctest::Approx(0.3));
  CHECK(w(1, 0) == doctest::Approx(0.3));
  CHECK(w(1, 1) == doctest::Approx(0.7));
}

TEST_CASE("completion of the uniform allocation is uniform") {
  const Dims dims{4, 2};
  const Matrix w = complete_to_doubly_stochastic(Matrix(4, 2, 0.25), dims);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(w(i, j) == doctest::Approx(0.25));
  }
}

TEST_CASE("completion is the identity for m == n") {
  Matrix x(2, 2, 0.5);
  const Matrix w = complete_to_doubly_stochastic(x, Dims{2, 2});
  CHECK(max_abs_diff(w, x) == 0.0);
}

TEST_CASE("completion yields unit row and column sums") {
  const Dims dims{6, 3};
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x(dims.n, dims.m, 0.0);
    // random mixture of ranked lists keeps x exactly feasible
    for (int c = 0; c < 4; ++c) {
      std::vector<int> perm(dims.n);
      for (int i = 0; i < dims.n; ++i) perm[i] = i;
      for (int i = dims.n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i + 1)]);
      for (int i = 0; i < dims.n; ++i) {
        if (perm[i] < dims.m) x(i, perm[i]) += 0.25;
      }
    }
    const Matrix w = complete_to_doubly_stochastic(x, dims);
    for (int i = 0; i < dims.n; ++i) {
      CHECK(row_sum(w, i) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(column_sum(w, i) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("bregman divergence is zero at equal arguments") {
  Matrix x(2, 2);
  x(0, 0) = 0.3;
  x(0, 1) = 1.2;
  x(1, 0) = 0.04;
  x(1, 1) = 2.0;
  CHECK(bregman_divergence(x, x) == doctest::Approx(0.0));
}

TEST_CASE("bregman divergence hand-computed scalar case") {
  Matrix x(1, 1, 1.0), y(1, 1, 0.25);
  CHECK(bregman_divergence(x, y) == doctest::Approx(0.25));
}

TEST_CASE("bregman divergence nonnegativity sweep") {
  Rng rng(9);
  for (int rep = 0; rep < 1000; ++rep) {
    Matrix x(2, 3), y(2, 3);
    for (double& v : x.raw()) v = 0.001 + 3.0 * rng.uniform01();
    for (double& v : y.raw()) v = 0.001 + 3.0 * rng.uniform01();
    CHECK(bregman_divergence(x, y) >= 0.0);
  }
}

TEST_CASE("bregman divergence is strictly convex in the first argument") {
  Rng rng(10);
  for (int rep = 0; rep < 200; ++rep) {
    Matrix x1(1, 3), x2(1, 3), y(1, 3), mid(1, 3);
    for (int j = 0; j < 3; ++j) {
      x1(0, j) = 0.01 + rng.uniform01();
      x2(0, j) = 0.01 + rng.uniform01();
      y(0, j) = 0.01 + rng.uniform01();
      mid(0, j) = 0.5 * (x1(0, j) + x2(0, j));
    }
    if (max_abs_diff(x1, x2) < 1e-3) continue;
    CHECK(bregman_divergence(mid, y) <
          0.5 * (bregman_divergence(x1, y) + bregman_divergence(x2, y)));
  }
}

TEST_CASE("bregman divergence rejects domain violations") {
  Matrix ok(1, 1, 0.5), neg(1, 1, -0.1), zero(1, 1, 0.0);
  CHECK_THROWS_AS(bregman_divergence(neg, ok), std::domain_error);
  CHECK_THROWS_AS(bregman_divergence(ok, zero), std::domain_error);
  CHECK(bregman_divergence(zero, ok) >= 0.0);  // x may touch the boundary
}

}  // TEST_SUITE
