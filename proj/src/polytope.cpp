#include "oltr/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oltr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Square min-cost assignment via shortest augmenting paths with potentials
// (O(k^3)). Returns row_of_col (1-based internals trimmed away).
struct AssignmentResult {
  std::vector<int> row_of_col;
  double value = 0.0;
};

AssignmentResult solve_assignment(const Matrix& cost) {
  const int k = cost.rows();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  AssignmentResult result;
  result.row_of_col.assign(k, -1);
  for (int j = 1; j <= k; ++j) {
    result.row_of_col[j - 1] = p[j] - 1;
    result.value += cost(p[j] - 1, j - 1);
  }
  return result;
}

// Pads the m real position columns with zero-cost dummies so the assignment
// is square over all n items.
Matrix padded_cost(const Matrix& r, const Dims& dims) {
  Matrix cost(dims.n, dims.n, 0.0);
  for (int i = 0; i < dims.n; ++i) {
    for (int j = 0; j < dims.m; ++j) cost(i, j) = r(i, j);
  }
  return cost;
}

double assignment_value_with_fixed(const Matrix& r, const Dims& dims,
                                   const std::vector<int>& fixed_items, int next_position) {
  // Value of the best completion once positions [0, next_position) are
  // pinned to fixed_items.
  std::vector<char> taken(dims.n, 0);
  double fixed_cost = 0.0;
  for (int j = 0; j < next_position; ++j) {
    taken[fixed_items[j]] = 1;
    fixed_cost += r(fixed_items[j], j);
  }
  const int k = dims.n - next_position;
  if (k == 0) return fixed_cost;
  std::vector<int> rows;
  rows.reserve(k);
  for (int i = 0; i < dims.n; ++i) {
    if (!taken[i]) rows.push_back(i);
  }
  Matrix sub(k, k, 0.0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < dims.m - next_position; ++b) {
      sub(a, b) = r(rows[a], next_position + b);
    }
  }
  return fixed_cost + solve_assignment(sub).value;
}

// Augmenting-path search over edges above the support threshold. Free
// columns first, then steals, both in increasing column order.
bool augment(const Matrix& w, double tol, int row, std::vector<int>& col_of_row,
             std::vector<int>& row_of_col, std::vector<char>& visited) {
  const int k = w.rows();
  for (int j = 0; j < k; ++j) {
    if (w(row, j) > tol && row_of_col[j] < 0) {
      col_of_row[row] = j;
      row_of_col[j] = row;
      return true;
    }
  }
  for (int j = 0; j < k; ++j) {
    if (w(row, j) > tol && !visited[j]) {
      visited[j] = 1;
      if (augment(w, tol, row_of_col[j], col_of_row, row_of_col, visited)) {
        col_of_row[row] = j;
        row_of_col[j] = row;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

double bregman_divergence(const Matrix& x, const Matrix& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("bregman_divergence: shape mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < x.raw().size(); ++k) {
    const double xv = x.raw()[k];
    const double yv = y.raw()[k];
    if (xv < 0.0) throw std::domain_error("bregman_divergence: negative entry in x");
    if (yv <= 0.0) throw std::domain_error("bregman_divergence: nonpositive entry in y");
    const double fx = xv - std::sqrt(xv);
    const double fy = yv - std::sqrt(yv);
    const double grad_y = 1.0 - 0.5 / std::sqrt(yv);
    d += fx - fy - grad_y * (xv - yv);
  }
  return d;
}

Matrix complete_to_doubly_stochastic(const Matrix& x, const Dims& dims) {
  validate_dims(dims);
  if (x.rows() != dims.n || x.cols() != dims.m) {
    throw std::invalid_argument("complete_to_doubly_stochastic: shape mismatch");
  }
  if (dims.m == dims.n) return x;
  Matrix w(dims.n, dims.n, 0.0);
  const double spread = 1.0 / static_cast<double>(dims.n - dims.m);
  for (int i = 0; i < dims.n; ++i) {
    double placed = 0.0;
    for (int j = 0; j < dims.m; ++j) {
      w(i, j) = x(i, j);
      placed += x(i, j);
    }
    // solver-grade row sums can overshoot 1 by rounding; clamp the spread
    const double rest = std::max(1.0 - placed, 0.0) * spread;
    for (int j = dims.m; j < dims.n; ++j) w(i, j) = rest;
  }
  return w;
}

std::vector<int> positive_support_matching(const Matrix& w, double support_tol) {
  if (w.rows() != w.cols()) {
    throw std::invalid_argument("positive_support_matching: matrix must be square");
  }
  const int k = w.rows();
  std::vector<int> col_of_row(k, -1), row_of_col(k, -1);
  for (int i = 0; i < k; ++i) {
    std::vector<char> visited(k, 0);
    if (!augment(w, support_tol, i, col_of_row, row_of_col, visited)) {
      throw std::runtime_error("no perfect matching above the support threshold");
    }
  }
  return col_of_row;
}

Action linmin(const Matrix& r, const Dims& dims) {
  validate_dims(dims);
  if (r.rows() != dims.n || r.cols() != dims.m) {
    throw std::invalid_argument("linmin: shape mismatch");
  }
  for (double v : r.raw()) {
    if (!std::isfinite(v)) throw std::invalid_argument("linmin: non-finite cost");
  }
  const double best = solve_assignment(padded_cost(r, dims)).value;
  const double tie_tol = 1e-9 * (1.0 + std::abs(best));

  // Fix positions left to right, taking the smallest item that still
  // completes to an optimal assignment.
  Action action;
  action.items.reserve(dims.m);
  std::vector<char> taken(dims.n, 0);
  for (int j = 0; j < dims.m; ++j) {
    bool fixed = false;
    for (int i = 0; i < dims.n && !fixed; ++i) {
      if (taken[i]) continue;
      action.items.push_back(i);
      const double total = assignment_value_with_fixed(r, dims, action.items, j + 1);
      if (total <= best + tie_tol) {
        taken[i] = 1;
        fixed = true;
      } else {
        action.items.pop_back();
      }
    }
    if (!fixed) throw std::logic_error("linmin: refinement failed to fix a position");
  }
  return action;
}

double linmin_value(const Matrix& r, const Dims& dims) {
  validate_dims(dims);
  if (r.rows() != dims.n || r.cols() != dims.m) {
    throw std::invalid_argument("linmin_value: shape mismatch");
  }
  return solve_assignment(padded_cost(r, dims)).value;
}

}  // namespace oltr
