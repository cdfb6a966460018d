#pragma once

#include "bathdisc/bath.hpp"
#include "bathdisc/id.hpp"
#include "bathdisc/qnsd.hpp"
#include "bathdisc/stieltjes.hpp"

namespace bathdisc {

enum class QuadratureRule { Trapezoid };

struct IdDiscretizeOptions {
  IdOptions mode;
  QuadratureRule initial_weights = QuadratureRule::Trapezoid;
  double oracle_rel_tol = 1e-10;
  int threads = 1;
};

// The low-rank pipeline: sample f(t_i, w_j) = S_beta(w_j) e^{-i kappa w_j t_i}
// on the grid, stack Re over Im into a real 2m x n matrix, select a frequency
// subset by interpolative decomposition, then fit nonnegative weights z_k to
// the reference BCF; g_k^2 = z_k S_beta(w_k).
DiscreteBath discretize_id(const Qnsd& q, const DiscretizationGrid& grid,
                           const IdDiscretizeOptions& options);

// Logarithmic discretization: per-bin mass and centroid over log-spaced bins
// [±Lambda^{-k} Omega, ±Lambda^{-(k-1)} Omega], innermost bins extended to 0
// so the bins partition [-Omega, Omega] \ {0}. M must be even.
DiscreteBath discretize_ld(const Qnsd& q, double omega_max_cm1, int M, double lambda_ratio);

// Mode-density method: positive nodes split [0, inf) into equal-mass domains
// of rho(w) = J(w)/(Gamma w); negative nodes mirror them. M must be even.
DiscreteBath discretize_mdm(const Qnsd& q, int M);

// Gauss rule with the QNSD as weight (orthogonal-polynomial quadrature).
// Refuses a singular origin placed at an interval endpoint.
DiscreteBath discretize_bsdo(const Qnsd& q, double omega_min_cm1, double omega_max_cm1, int M);

// Chain (nearest-neighbor) coefficients from the same Jacobi matrix.
ChainCoefficients chain_map(const Qnsd& q, double omega_min_cm1, double omega_max_cm1, int M);

// Log-spaced bin edges used by discretize_ld, as (lo, hi) pairs; exposed for
// verification. Ordered negative bins first, then positive.
std::vector<std::pair<double, double>> ld_bins(double omega_max_cm1, int M, double lambda_ratio);

} // namespace bathdisc
