#pragma once

#include <vector>

#include <Eigen/Dense>

namespace bathdisc {

struct IdOptions {
  enum class Mode { Rank, Tolerance };
  Mode mode = Mode::Rank;
  int rank = 0;           // Mode::Rank
  double tolerance = 0.0; // Mode::Tolerance: smallest rank with ||E||_2 <= tol * ||A||_2
};

// A ~= A(:, selected_columns) * interpolation, with the identity submatrix on
// the selected columns.
struct IdFactorization {
  std::vector<int> selected_columns;   // in pivot order
  Eigen::MatrixXd interpolation;       // r x n, original column order
  double residual_norm = 0.0;          // 2-norm estimate of the error matrix
  double matrix_norm = 0.0;            // 2-norm estimate of A
  bool tolerance_unreachable = false;  // hit full rank before meeting the tolerance
};

// Column-pivoted Householder QR truncated at the requested rank or tolerance.
// Pivot ties break toward the lowest column index; fully deterministic.
IdFactorization id_decompose(const Eigen::MatrixXd& A, const IdOptions& options);

// Deterministic 20-iteration power-method estimate of ||A||_2 (fixed seed).
double operator_norm_estimate(const Eigen::MatrixXd& A);

} // namespace bathdisc
