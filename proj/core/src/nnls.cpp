#include "bathdisc/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace bathdisc {

namespace {

// Least-squares solve restricted to the passive columns.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& B, const Eigen::VectorXd& c,
                              const std::vector<int>& passive) {
  Eigen::MatrixXd sub(B.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(k) = B.col(passive[k]);
  return sub.colPivHouseholderQr().solve(c);
}

double kkt_residual(const Eigen::MatrixXd& B, const Eigen::VectorXd& c,
                    const Eigen::VectorXd& z) {
  const Eigen::VectorXd w = B.transpose() * (c - B * z);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    worst = std::max(worst, z[j] > 0.0 ? std::abs(w[j]) : w[j]);
  return worst;
}

} // namespace

NnlsResult nnls(const Eigen::MatrixXd& B, const Eigen::VectorXd& c) {
  if (B.rows() != c.size()) throw std::invalid_argument("nnls: B rows must match length of c");
  const Eigen::Index n = B.cols();
  const double tau = 1e-10 * (B.transpose() * c).cwiseAbs().maxCoeff();

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<int> passive_idx;
  const int max_outer = std::max<int>(3 * static_cast<int>(n), 30);
  int iterations = 0;

  auto result = [&] {
    NnlsResult r;
    r.solution = z;
    r.dual_tolerance = tau;
    r.kkt_residual = kkt_residual(B, c, z);
    r.iterations = iterations;
    return r;
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    ++iterations;
    const Eigen::VectorXd w = B.transpose() * (c - B * z);
    int enter = -1;
    double best = tau;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        enter = static_cast<int>(j);
      }
    }
    if (enter < 0) return result();

    passive[enter] = true;
    passive_idx.push_back(enter);
    std::sort(passive_idx.begin(), passive_idx.end());

    for (int inner = 0; inner < max_outer; ++inner) {
      const Eigen::VectorXd x = solve_passive(B, c, passive_idx);
      bool feasible = true;
      for (std::size_t k = 0; k < passive_idx.size(); ++k)
        if (x[k] <= 0.0) feasible = false;
      if (feasible) {
        z.setZero();
        for (std::size_t k = 0; k < passive_idx.size(); ++k) z[passive_idx[k]] = x[k];
        break;
      }
      // Step toward x until the first passive component hits zero.
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < passive_idx.size(); ++k) {
        if (x[k] <= 0.0) {
          const double zk = z[passive_idx[k]];
          alpha = std::min(alpha, zk / (zk - x[k]));
        }
      }
      for (std::size_t k = 0; k < passive_idx.size(); ++k) {
        const int j = passive_idx[k];
        z[j] += alpha * (x[k] - z[j]);
      }
      std::vector<int> still;
      const double drop_tol = 0.0;
      for (std::size_t k = 0; k < passive_idx.size(); ++k) {
        const int j = passive_idx[k];
        // Components driven to (or past) zero leave the passive set.
        if (x[k] <= 0.0 && z[j] <= drop_tol + 1e-14 * std::abs(alpha)) {
          z[j] = 0.0;
          passive[j] = false;
        } else {
          still.push_back(j);
        }
      }
      if (still.size() == passive_idx.size()) {
        // Numerical stall: force out the smallest component.
        int drop = still.front();
        for (int j : still)
          if (z[j] < z[drop]) drop = j;
        z[drop] = 0.0;
        passive[drop] = false;
        still.erase(std::find(still.begin(), still.end(), drop));
      }
      passive_idx = std::move(still);
      if (passive_idx.empty()) break;
    }
  }
  NnlsResult best = result();
  throw NnlsNotConverged("nnls: iteration cap exceeded (kkt residual " +
                             std::to_string(best.kkt_residual) + ")",
                         best);
}

} // namespace bathdisc
