#include "bathdisc/rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <set>

#include <Eigen/Dense>

namespace bathdisc {

RationalInterpolant::RationalInterpolant(std::vector<double> support_points,
                                         std::vector<double> support_values,
                                         std::vector<double> weights)
    : support_points_(std::move(support_points)),
      support_values_(std::move(support_values)),
      weights_(std::move(weights)) {
  if (support_points_.size() != support_values_.size() ||
      support_points_.size() != weights_.size())
    throw std::invalid_argument("rational interpolant: mismatched array lengths");
  if (support_points_.empty()) throw std::invalid_argument("rational interpolant: empty support");
  std::set<double> unique(support_points_.begin(), support_points_.end());
  if (unique.size() != support_points_.size())
    throw std::invalid_argument("rational interpolant: duplicate support points");
}

double RationalInterpolant::operator()(double x) const {
  for (std::size_t j = 0; j < support_points_.size(); ++j)
    if (x == support_points_[j]) return support_values_[j];
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < support_points_.size(); ++j) {
    const double t = weights_[j] / (x - support_points_[j]);
    num += t * support_values_[j];
    den += t;
  }
  return num / den;
}

std::vector<double> RationalInterpolant::real_poles_in(double lo, double hi) const {
  const auto m = static_cast<Eigen::Index>(support_points_.size());
  if (m < 2) return {};
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    A(0, j + 1) = weights_[j];
    A(j + 1, 0) = 1.0;
    A(j + 1, j + 1) = support_points_[j];
    B(j + 1, j + 1) = 1.0;
  }
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> solver(A, B, true);
  std::vector<double> poles;
  const double span = hi - lo;
  for (Eigen::Index k = 0; k < solver.alphas().size(); ++k) {
    const std::complex<double> a = solver.alphas()[k];
    const double b = solver.betas()[k];
    if (std::abs(b) < 1e-13 * std::abs(a)) continue; // spurious infinite eigenvalue
    const std::complex<double> pole = a / b;
    if (std::abs(pole.imag()) > 1e-9 * std::max(span, std::abs(pole.real()))) continue;
    if (pole.real() >= lo && pole.real() <= hi) poles.push_back(pole.real());
  }
  std::sort(poles.begin(), poles.end());
  return poles;
}

namespace {

Eigen::VectorXd loewner_weights(const std::vector<double>& x, const std::vector<double>& f,
                                const std::vector<int>& support,
                                const std::vector<char>& is_support) {
  const auto m = static_cast<Eigen::Index>(support.size());
  Eigen::Index rows = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!is_support[i]) ++rows;
  if (rows == 0) return Eigen::VectorXd::Ones(m) / std::sqrt(static_cast<double>(m));
  Eigen::MatrixXd L(rows, m);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_support[i]) continue;
    for (Eigen::Index j = 0; j < m; ++j)
      L(r, j) = (f[i] - f[support[j]]) / (x[i] - x[support[j]]);
    ++r;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  return svd.matrixV().col(m - 1);
}

RationalInterpolant assemble(const std::vector<double>& x, const std::vector<double>& f,
                             const std::vector<int>& support, const Eigen::VectorXd& w) {
  std::vector<double> zs, fs, ws;
  zs.reserve(support.size());
  for (std::size_t j = 0; j < support.size(); ++j) {
    zs.push_back(x[support[j]]);
    fs.push_back(f[support[j]]);
    ws.push_back(w[static_cast<Eigen::Index>(j)]);
  }
  return RationalInterpolant(std::move(zs), std::move(fs), std::move(ws));
}

double table_error(const RationalInterpolant& r, const std::vector<double>& x,
                   const std::vector<double>& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(r(x[i]) - f[i]));
  return worst;
}

} // namespace

RationalInterpolant aaa_fit(const std::vector<double>& points, const std::vector<double>& values,
                            double tol, std::size_t max_degree) {
  const std::size_t n = points.size();
  if (n != values.size() || n < 2) throw std::invalid_argument("aaa_fit: bad table");
  if (!(tol > 0.0)) throw std::invalid_argument("aaa_fit: tolerance must be positive");
  double fmax = 0.0;
  for (double v : values) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0)
    return RationalInterpolant({points.front()}, {0.0}, {1.0});

  const double lo = *std::min_element(points.begin(), points.end());
  const double hi = *std::max_element(points.begin(), points.end());
  std::vector<int> support;
  std::vector<char> is_support(n, 0), banned(n, 0);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> approx(n, mean);

  std::optional<RationalInterpolant> best;
  double best_err = std::numeric_limits<double>::infinity();

  auto cleanup_poles = [&](RationalInterpolant r) {
    for (std::size_t round = 0; round < support.size() && support.size() > 1; ++round) {
      auto poles = r.real_poles_in(lo, hi);
      if (poles.empty()) break;
      // Drop the support point nearest the first offending pole and re-solve.
      const double p = poles.front();
      std::size_t drop = 0;
      double dist = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < support.size(); ++j) {
        const double d = std::abs(points[support[j]] - p);
        if (d < dist) {
          dist = d;
          drop = j;
        }
      }
      is_support[support[drop]] = 0;
      banned[support[drop]] = 1;
      support.erase(support.begin() + static_cast<std::ptrdiff_t>(drop));
      if (support.empty()) break;
      r = assemble(points, values, support, loewner_weights(points, values, support, is_support));
    }
    return r;
  };

  while (support.size() < max_degree + 1) {
    // Greedy: promote the worst remaining point to the support set.
    int pick = -1;
    double worst = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i] || banned[i]) continue;
      const double e = std::abs(values[i] - approx[i]);
      if (e > worst) {
        worst = e;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;
    std::size_t remaining = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_support[i] && static_cast<int>(i) != pick) ++remaining;
    if (remaining == 0) break; // nothing left to fit against
    is_support[pick] = 1;
    support.push_back(pick);

    RationalInterpolant r =
        assemble(points, values, support, loewner_weights(points, values, support, is_support));
    double err = table_error(r, points, values);
    if (err <= tol * fmax) {
      r = cleanup_poles(std::move(r));
      err = table_error(r, points, values);
      if (err <= tol * fmax) return r;
    }
    if (err < best_err) {
      best_err = err;
      best = r;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!is_support[i]) approx[i] = r(points[i]);
  }

  RationalInterpolant final_fit = best ? *best : RationalInterpolant({points.front()}, {mean}, {1.0});
  if (!support.empty()) {
    RationalInterpolant cleaned = cleanup_poles(final_fit);
    const double cleaned_err = table_error(cleaned, points, values);
    if (cleaned_err <= tol * fmax) return cleaned;
    if (cleaned_err < best_err) {
      final_fit = cleaned;
      best_err = cleaned_err;
    }
  }
  throw AaaNotConverged("aaa_fit: tolerance " + std::to_string(tol) +
                            " not reached at max degree (achieved " +
                            std::to_string(best_err / fmax) + ")",
                        final_fit, best_err / fmax);
}

} // namespace bathdisc
