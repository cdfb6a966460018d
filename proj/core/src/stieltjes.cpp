#include "bathdisc/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bathdisc {

namespace {

struct DiscreteMeasure {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};

// Composite Gauss-Legendre sampling of the weight with `panels` panels on
// each contiguous piece of [a, b] delimited by the interior breaks.
DiscreteMeasure sample_weight(const std::function<double(double)>& weight, double a, double b,
                              int panels, int points_per_panel,
                              const std::vector<double>& interior_breaks) {
  std::vector<double> edges{a, b};
  for (double x : interior_breaks)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const GaussRule base = legendre_rule(points_per_panel);
  std::vector<double> xs, ws;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const int local = std::max(1, static_cast<int>(std::round(panels * (hi - lo) / (b - a))));
    for (int p = 0; p < local; ++p) {
      const double pa = lo + (hi - lo) * p / local;
      const double pb = lo + (hi - lo) * (p + 1) / local;
      const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
      for (int i = 0; i < base.nodes.size(); ++i) {
        const double x = mid + half * base.nodes[i];
        const double w = half * base.weights[i] * weight(x);
        xs.push_back(x);
        ws.push_back(w);
      }
    }
  }
  DiscreteMeasure m;
  m.points = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  m.weights = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return m;
}

// Lanczos tridiagonalization of diag(points) started from sqrt(weights);
// yields the Jacobi coefficients of the discrete measure (full
// reorthogonalization for stability).
JacobiMatrix lanczos_jacobi(const DiscreteMeasure& m, int M) {
  const Eigen::Index n = m.points.size();
  if (M > n) throw std::invalid_argument("stieltjes: discretization finer than requested order");
  JacobiMatrix jm;
  jm.total_weight = m.weights.sum();
  if (!(jm.total_weight > 0.0))
    throw std::runtime_error("stieltjes: weight has nonpositive total mass");
  jm.alpha.resize(M);
  jm.eta.resize(std::max(0, M - 1));

  Eigen::MatrixXd basis(n, M);
  Eigen::VectorXd v = (m.weights.cwiseMax(0.0)).cwiseSqrt();
  v /= v.norm();
  basis.col(0) = v;
  for (int k = 0; k < M; ++k) {
    Eigen::VectorXd xv = m.points.cwiseProduct(basis.col(k));
    jm.alpha[k] = basis.col(k).dot(xv);
    if (k + 1 == M) break;
    Eigen::VectorXd r = xv - jm.alpha[k] * basis.col(k);
    if (k > 0) r -= std::sqrt(jm.eta[k - 1]) * basis.col(k - 1);
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass)
      r -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * r);
    const double rnorm = r.norm();
    const double scale = std::abs(m.points.cwiseAbs().maxCoeff());
    if (!(rnorm > 1e-14 * std::max(scale, 1.0)))
      throw std::runtime_error("stieltjes: nonpositive recurrence coefficient eta at index " +
                               std::to_string(k + 1) + " (weight is effectively rank-deficient)");
    jm.eta[k] = rnorm * rnorm;
    basis.col(k + 1) = r / rnorm;
  }
  return jm;
}

double coefficient_distance(const JacobiMatrix& x, const JacobiMatrix& y, double span) {
  double d = (x.alpha - y.alpha).cwiseAbs().maxCoeff() / span;
  if (x.eta.size() > 0)
    d = std::max(d, (x.eta - y.eta).cwiseAbs().maxCoeff() / (span * span));
  d = std::max(d, std::abs(x.total_weight - y.total_weight) /
                      std::max(std::abs(x.total_weight), std::abs(y.total_weight)));
  return d;
}

} // namespace

JacobiMatrix stieltjes_jacobi(const std::function<double(double)>& weight, double a, double b,
                              int M, const StieltjesOptions& options) {
  if (!(a < b)) throw std::invalid_argument("stieltjes: interval must satisfy a < b");
  if (M < 1) throw std::invalid_argument("stieltjes: order must be >= 1");

  int panels = std::max(2, options.oversample * M / options.points_per_panel);
  JacobiMatrix prev = lanczos_jacobi(
      sample_weight(weight, a, b, panels, options.points_per_panel, options.interior_breaks), M);
  const double span = b - a;
  for (int d = 0; d < options.max_doublings; ++d) {
    const long long next_points = 2LL * panels * options.points_per_panel;
    if (next_points * M > options.max_basis_entries) break;
    panels *= 2;
    JacobiMatrix next = lanczos_jacobi(
        sample_weight(weight, a, b, panels, options.points_per_panel, options.interior_breaks), M);
    const double dist = coefficient_distance(prev, next, span);
    prev = std::move(next);
    if (dist <= options.stabilization_tol) {
      prev.stabilized = true;
      return prev;
    }
  }
  prev.stabilized = false;
  return prev;
}

JacobiMatrix stieltjes_jacobi(const Qnsd& q, double omega_min_cm1, double omega_max_cm1, int M,
                              const StieltjesOptions& options) {
  StieltjesOptions opts = options;
  if (omega_min_cm1 < 0.0 && omega_max_cm1 > 0.0) opts.interior_breaks.push_back(0.0);
  auto weight = [&q](double w) { return q.value(w); };
  return stieltjes_jacobi(weight, omega_min_cm1, omega_max_cm1, M, opts);
}

GaussRule golub_welsch(const JacobiMatrix& jacobi) {
  const Eigen::Index M = jacobi.alpha.size();
  Eigen::VectorXd sub = jacobi.eta.cwiseMax(0.0).cwiseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(jacobi.alpha, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("golub_welsch: tridiagonal eigensolver failed");
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(M);
  for (Eigen::Index k = 0; k < M; ++k) {
    const double first = solver.eigenvectors()(0, k);
    rule.weights[k] = jacobi.total_weight * first * first;
  }
  return rule;
}

GaussRule legendre_rule(int n) {
  if (n < 1) throw std::invalid_argument("legendre_rule: order must be >= 1");
  JacobiMatrix jm;
  jm.alpha = Eigen::VectorXd::Zero(n);
  jm.eta.resize(std::max(0, n - 1));
  for (int k = 1; k < n; ++k)
    jm.eta[k - 1] = static_cast<double>(k * k) / (4.0 * k * k - 1.0);
  jm.total_weight = 2.0;
  return golub_welsch(jm);
}

} // namespace bathdisc
