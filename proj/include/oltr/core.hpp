#pragma once

#include <cstddef>
#include <vector>

namespace oltr {

// Feasibility tolerance for exact-arithmetic constructions (action matrices,
// convex combinations) vs. iterates produced by the iterative solvers.
inline constexpr double kFeasTolExact = 1e-9;
inline constexpr double kFeasTolSolver = 1e-7;

struct Dims {
  int n = 0;  // items
  int m = 0;  // positions
};

// Throws std::invalid_argument unless 1 <= m <= n.
void validate_dims(const Dims& dims);

// Dense row-major matrix. Problem sizes stay around n, m <= 100, so a flat
// vector<double> without sparsity or views is the right tool.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

double max_abs_diff(const Matrix& a, const Matrix& b);
double entry_sum(const Matrix& a);
double l1_norm(const Matrix& a);
double dot(const Matrix& a, const Matrix& b);
double column_sum(const Matrix& a, int j);
double row_sum(const Matrix& a, int i);

// Ranked list of m distinct items; indices are 0-based into [0, n).
struct Action {
  std::vector<int> items;
};

// Throws std::invalid_argument on out-of-range or duplicate items.
void validate_action(const Action& a, const Dims& dims);

// 0/1 matrix with X(i, j) = 1 iff a.items[j] == i.
Matrix action_to_matrix(const Action& a, const Dims& dims);

struct FeasibilityReport {
  bool feasible = false;
  double worst_col_dev = 0.0;    // max_j |sum_i x(i,j) - 1|
  double worst_row_excess = 0.0; // max_i max(sum_j x(i,j) - 1, 0)
  double most_negative = 0.0;    // min(min entry, 0)
};

// Reports whether x lies in Conv(X) within tol: entries in [0,1], unit
// column sums, row sums at most 1. Never throws on infeasibility.
FeasibilityReport allocation_feasible(const Matrix& x, const Dims& dims, double tol);

}  // namespace oltr
