#include "bathdisc/sd_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bathdisc {

void SdTable::validate() const {
  if (omega_cm1.size() != j_cm1.size()) throw std::invalid_argument("sd table: column length mismatch");
  if (omega_cm1.size() < 8) throw std::invalid_argument("sd table: at least 8 points required");
  if (omega_cm1.front() < 0.0) throw std::invalid_argument("sd table: frequencies must be >= 0");
  for (std::size_t i = 0; i + 1 < omega_cm1.size(); ++i)
    if (!(omega_cm1[i] < omega_cm1[i + 1]))
      throw std::invalid_argument("sd table: frequencies must be strictly increasing");
  for (std::size_t i = 0; i < omega_cm1.size(); ++i)
    if (!std::isfinite(omega_cm1[i]) || !std::isfinite(j_cm1[i]))
      throw std::invalid_argument("sd table: non-finite entry");
}

SdTable load_sd_table(std::istream& in) {
  SdTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double w, j;
    if (!(ss >> w)) continue; // blank or comment-only line
    if (!(ss >> j))
      throw std::runtime_error("sd table: line " + std::to_string(lineno) + ": expected two columns");
    table.omega_cm1.push_back(w);
    table.j_cm1.push_back(j);
  }
  table.validate();
  return table;
}

SdTable load_sd_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sd table: " + path);
  return load_sd_table(in);
}

namespace {

struct SplineSystem {
  Eigen::SparseMatrix<double> Q;  // n x (n-2), second differences
  Eigen::SparseMatrix<double> R;  // (n-2) x (n-2), curvature overlaps
  Eigen::SparseMatrix<double> B;  // Q^T Q
};

SplineSystem spline_system(const std::vector<double>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  std::vector<Eigen::Triplet<double>> tq, tr;
  for (Eigen::Index j = 0; j + 2 < n; ++j) {
    const double h0 = x[j + 1] - x[j];
    const double h1 = x[j + 2] - x[j + 1];
    tq.emplace_back(j, j, 1.0 / h0);
    tq.emplace_back(j + 1, j, -1.0 / h0 - 1.0 / h1);
    tq.emplace_back(j + 2, j, 1.0 / h1);
    tr.emplace_back(j, j, (h0 + h1) / 3.0);
    if (j + 3 < n) {
      tr.emplace_back(j, j + 1, h1 / 6.0);
      tr.emplace_back(j + 1, j, h1 / 6.0);
    }
  }
  SplineSystem s;
  s.Q.resize(n, n - 2);
  s.Q.setFromTriplets(tq.begin(), tq.end());
  s.R.resize(n - 2, n - 2);
  s.R.setFromTriplets(tr.begin(), tr.end());
  s.B = Eigen::SparseMatrix<double>(s.Q.transpose() * s.Q);
  return s;
}

struct SplineFit {
  Eigen::VectorXd fitted;
  double rss = 0.0;
  double trace_term = 0.0; // tr((R + lambda B)^{-1} B)
};

SplineFit solve_spline(const SplineSystem& s, const Eigen::VectorXd& y, double lambda,
                       bool want_trace) {
  Eigen::SparseMatrix<double> M = s.R + lambda * s.B;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("smoothing spline: factorization failed");
  const Eigen::VectorXd rhs = s.Q.transpose() * y;
  const Eigen::VectorXd gamma = solver.solve(rhs);
  SplineFit fit;
  fit.fitted = y - lambda * (s.Q * gamma);
  fit.rss = (y - fit.fitted).squaredNorm();
  if (want_trace) {
    const Eigen::Index m = s.B.rows();
    Eigen::VectorXd col(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      col = s.B.col(k);
      fit.trace_term += solver.solve(col)[k];
    }
  }
  return fit;
}

} // namespace

SdTable smooth_table(const SdTable& table, double lambda) {
  table.validate();
  if (lambda < 0.0) throw std::invalid_argument("smoothing lambda must be >= 0");
  if (lambda == 0.0) return table;
  const SplineSystem s = spline_system(table.omega_cm1);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(table.j_cm1.data(), static_cast<Eigen::Index>(table.size()));
  const SplineFit fit = solve_spline(s, y, lambda, false);
  SdTable out;
  out.omega_cm1 = table.omega_cm1;
  out.j_cm1.assign(fit.fitted.data(), fit.fitted.data() + fit.fitted.size());
  return out;
}

SdTable smooth_table_gcv(const SdTable& table, double* chosen_lambda) {
  table.validate();
  const SplineSystem s = spline_system(table.omega_cm1);
  const auto n = static_cast<Eigen::Index>(table.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(table.j_cm1.data(), n);

  // GCV(lambda) = n * RSS / (n - tr A)^2 with n - tr A = lambda * trace_term.
  const double span = table.omega_cm1.back() - table.omega_cm1.front();
  const double scale = std::pow(span / static_cast<double>(n), 3);
  double best_lambda = scale;
  double best_gcv = std::numeric_limits<double>::infinity();
  for (int t = -12; t <= 16; ++t) {
    const double lambda = scale * std::pow(10.0, 0.5 * t);
    const SplineFit fit = solve_spline(s, y, lambda, true);
    const double denom = lambda * fit.trace_term;
    if (!(denom > 0.0)) continue;
    const double gcv = static_cast<double>(n) * fit.rss / (denom * denom);
    if (gcv < best_gcv) {
      best_gcv = gcv;
      best_lambda = lambda;
    }
  }
  if (chosen_lambda) *chosen_lambda = best_lambda;
  return smooth_table(table, best_lambda);
}

RationalInterpolant fit_sd_table(const SdTable& table, double tol, std::size_t max_degree) {
  table.validate();
  return aaa_fit(table.omega_cm1, table.j_cm1, tol, max_degree);
}

} // namespace bathdisc
