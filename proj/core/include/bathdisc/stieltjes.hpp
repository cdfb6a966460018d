#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bathdisc/qnsd.hpp"

namespace bathdisc {

// Three-term recurrence coefficients of the polynomials orthogonal under a
// nonnegative weight: p_{k+1} = (x - alpha_k) p_k - eta_k p_{k-1}. The
// symmetric tridiagonal form uses sqrt(eta) off the diagonal.
struct JacobiMatrix {
  Eigen::VectorXd alpha;      // length M
  Eigen::VectorXd eta;        // length M-1, all positive
  double total_weight = 0.0;  // integral of the weight over the interval
  bool stabilized = true;     // grid doubling reached the stabilization tolerance
};

struct GaussRule {
  Eigen::VectorXd nodes;    // ascending
  Eigen::VectorXd weights;  // positive, summing to total_weight
};

struct StieltjesOptions {
  int oversample = 10;        // initial grid points ~ oversample * M
  int points_per_panel = 10;  // composite Gauss-Legendre panel order
  int max_doublings = 5;
  double stabilization_tol = 1e-12;
  // Doubling stops once grid_points * M would exceed this (the Lanczos basis
  // is kept in memory for reorthogonalization).
  long long max_basis_entries = 40000000;
  std::vector<double> interior_breaks; // forced panel edges (e.g. w = 0)
};

// Recurrence coefficients for an arbitrary weight on [a, b] via discretized
// Stieltjes: the weight is sampled on a composite Gauss-Legendre grid and the
// discrete measure is tridiagonalized by Lanczos with full
// reorthogonalization. The grid is doubled until the coefficients stabilize.
JacobiMatrix stieltjes_jacobi(const std::function<double(double)>& weight, double a, double b,
                              int M, const StieltjesOptions& options = {});

// Same with the QNSD as weight; splits the sampling grid at w = 0.
JacobiMatrix stieltjes_jacobi(const Qnsd& q, double omega_min_cm1, double omega_max_cm1, int M,
                              const StieltjesOptions& options = {});

// Nodes and Christoffel weights from the symmetric tridiagonal eigenproblem.
GaussRule golub_welsch(const JacobiMatrix& jacobi);

// n-point Gauss-Legendre rule on [-1, 1] (generated, not tabulated).
GaussRule legendre_rule(int n);

} // namespace bathdisc
