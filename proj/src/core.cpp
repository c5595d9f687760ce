#include "oltr/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oltr {

void validate_dims(const Dims& dims) {
  if (dims.m < 1 || dims.n < dims.m) {
    throw std::invalid_argument("dims: need 1 <= m <= n, got n=" + std::to_string(dims.n) +
                                " m=" + std::to_string(dims.m));
  }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) {
    worst = std::max(worst, std::abs(a.raw()[k] - b.raw()[k]));
  }
  return worst;
}

double entry_sum(const Matrix& a) {
  double s = 0.0;
  for (double v : a.raw()) s += v;
  return s;
}

double l1_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.raw()) s += std::abs(v);
  return s;
}

double dot(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) s += a.raw()[k] * b.raw()[k];
  return s;
}

double column_sum(const Matrix& a, int j) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) s += a(i, j);
  return s;
}

double row_sum(const Matrix& a, int i) {
  double s = 0.0;
  for (int j = 0; j < a.cols(); ++j) s += a(i, j);
  return s;
}

void validate_action(const Action& a, const Dims& dims) {
  validate_dims(dims);
  if (static_cast<int>(a.items.size()) != dims.m) {
    throw std::invalid_argument("action: expected " + std::to_string(dims.m) + " items, got " +
                                std::to_string(a.items.size()));
  }
  std::vector<char> seen(dims.n, 0);
  for (int item : a.items) {
    if (item < 0 || item >= dims.n) {
      throw std::invalid_argument("action: item " + std::to_string(item) + " out of range [0, " +
                                  std::to_string(dims.n) + ")");
    }
    if (seen[item]) throw std::invalid_argument("action: duplicate item " + std::to_string(item));
    seen[item] = 1;
  }
}

Matrix action_to_matrix(const Action& a, const Dims& dims) {
  validate_action(a, dims);
  Matrix x(dims.n, dims.m, 0.0);
  for (int j = 0; j < dims.m; ++j) x(a.items[j], j) = 1.0;
  return x;
}

FeasibilityReport allocation_feasible(const Matrix& x, const Dims& dims, double tol) {
  FeasibilityReport report;
  if (x.rows() != dims.n || x.cols() != dims.m) {
    report.feasible = false;
    return report;
  }
  for (int i = 0; i < dims.n; ++i) {
    for (int j = 0; j < dims.m; ++j) {
      report.most_negative = std::min(report.most_negative, x(i, j));
    }
    report.worst_row_excess = std::max(report.worst_row_excess, row_sum(x, i) - 1.0);
  }
  report.worst_row_excess = std::max(report.worst_row_excess, 0.0);
  report.most_negative = std::min(report.most_negative, 0.0);
  for (int j = 0; j < dims.m; ++j) {
    report.worst_col_dev = std::max(report.worst_col_dev, std::abs(column_sum(x, j) - 1.0));
  }
  bool entries_ok = true;
  for (double v : x.raw()) {
    if (v < -tol || v > 1.0 + tol) entries_ok = false;
  }
  report.feasible = entries_ok && report.worst_col_dev <= tol && report.worst_row_excess <= tol &&
                    report.most_negative >= -tol;
  return report;
}

}  // namespace oltr
