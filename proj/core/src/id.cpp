#include "bathdisc/id.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bathdisc {

namespace {

Eigen::VectorXd seeded_unit_vector(Eigen::Index n) {
  std::mt19937 rng(0x1d5eedu);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

double power_norm(const Eigen::Ref<const Eigen::MatrixXd>& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  Eigen::VectorXd v = seeded_unit_vector(A.cols());
  double sigma = 0.0;
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd u = A * v;
    sigma = u.norm();
    if (sigma == 0.0) return 0.0;
    v = A.transpose() * u;
    const double vn = v.norm();
    if (vn == 0.0) return sigma;
    v /= vn;
  }
  return sigma;
}

} // namespace

double operator_norm_estimate(const Eigen::MatrixXd& A) { return power_norm(A); }

IdFactorization id_decompose(const Eigen::MatrixXd& A, const IdOptions& options) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("id_decompose: empty matrix");
  const Eigen::Index max_rank = std::min(m, n);
  if (options.mode == IdOptions::Mode::Rank && (options.rank < 1 || options.rank > max_rank))
    throw std::invalid_argument("id_decompose: rank out of range");
  if (options.mode == IdOptions::Mode::Tolerance && !(options.tolerance > 0.0))
    throw std::invalid_argument("id_decompose: tolerance must be positive");

  Eigen::MatrixXd W = A;
  const double a_norm = power_norm(W);
  if (a_norm == 0.0) throw std::invalid_argument("id_decompose: zero matrix");
  const double target = options.mode == IdOptions::Mode::Tolerance
                            ? options.tolerance * a_norm
                            : -1.0;

  std::vector<Eigen::Index> perm(n);
  for (Eigen::Index j = 0; j < n; ++j) perm[j] = j;
  Eigen::VectorXd col_norm2(n), col_norm2_orig(n);
  for (Eigen::Index j = 0; j < n; ++j) col_norm2[j] = W.col(j).squaredNorm();
  col_norm2_orig = col_norm2;

  Eigen::RowVectorXd workspace(n);
  Eigen::Index rank = 0;
  double residual = a_norm;
  bool unreachable = false;

  for (Eigen::Index k = 0; k < max_rank; ++k) {
    // Pivot: largest remaining column norm, lowest index on ties.
    Eigen::Index pivot = k;
    double best = -1.0;
    for (Eigen::Index j = k; j < n; ++j) {
      if (col_norm2[j] > best) {
        best = col_norm2[j];
        pivot = j;
      }
    }
    if (pivot != k) {
      W.col(pivot).swap(W.col(k));
      std::swap(col_norm2[pivot], col_norm2[k]);
      std::swap(col_norm2_orig[pivot], col_norm2_orig[k]);
      std::swap(perm[pivot], perm[k]);
    }

    double tau = 0.0, beta = 0.0;
    W.col(k).tail(m - k).makeHouseholderInPlace(tau, beta);
    if (k + 1 < n)
      W.bottomRightCorner(m - k, n - k - 1)
          .applyHouseholderOnTheLeft(W.col(k).tail(m - k - 1), tau,
                                     workspace.data());
    W(k, k) = beta;
    rank = k + 1;

    // Downdate remaining column norms; recompute when cancellation bites.
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const double r = W(k, j);
      col_norm2[j] -= r * r;
      if (col_norm2[j] < 1e-8 * col_norm2_orig[j]) {
        col_norm2[j] = W.col(j).tail(m - k - 1).squaredNorm();
        col_norm2_orig[j] = col_norm2[j];
      }
    }

    if (options.mode == IdOptions::Mode::Rank) {
      if (rank == options.rank) {
        residual = power_norm(W.bottomRightCorner(m - rank, n - rank));
        break;
      }
    } else {
      if (rank == max_rank) {
        residual = 0.0;
        unreachable = true;
        break;
      }
      // Cheap necessary condition first: the largest trailing column norm is
      // a lower bound on ||E||_2.
      double max_col = 0.0;
      for (Eigen::Index j = k + 1; j < n; ++j) max_col = std::max(max_col, col_norm2[j]);
      if (std::sqrt(std::max(max_col, 0.0)) <= target) {
        residual = power_norm(W.bottomRightCorner(m - rank, n - rank));
        if (residual <= target) break;
      }
    }
  }

  IdFactorization out;
  out.matrix_norm = a_norm;
  out.residual_norm = residual;
  out.tolerance_unreachable = unreachable;
  out.selected_columns.reserve(rank);
  for (Eigen::Index k = 0; k < rank; ++k)
    out.selected_columns.push_back(static_cast<int>(perm[k]));

  // P = [I | R11^{-1} R12] mapped back to the original column order.
  Eigen::MatrixXd T;
  if (n > rank) {
    T = W.topLeftCorner(rank, rank)
            .triangularView<Eigen::Upper>()
            .solve(W.topRightCorner(rank, n - rank));
  }
  out.interpolation = Eigen::MatrixXd::Zero(rank, n);
  for (Eigen::Index k = 0; k < rank; ++k) out.interpolation(k, perm[k]) = 1.0;
  for (Eigen::Index j = rank; j < n; ++j) out.interpolation.col(perm[j]) = T.col(j - rank);
  return out;
}

} // namespace bathdisc
