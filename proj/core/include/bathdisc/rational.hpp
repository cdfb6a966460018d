#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bathdisc {

// Barycentric rational interpolant r(x) = sum_j w_j f_j/(x-x_j) / sum_j w_j/(x-x_j).
// Evaluation at a support point returns its support value exactly.
class RationalInterpolant {
public:
  RationalInterpolant() = default;
  RationalInterpolant(std::vector<double> support_points,
                      std::vector<double> support_values,
                      std::vector<double> weights);

  double operator()(double x) const;

  std::size_t degree() const { return support_points_.empty() ? 0 : support_points_.size() - 1; }
  const std::vector<double>& support_points() const { return support_points_; }
  const std::vector<double>& support_values() const { return support_values_; }
  const std::vector<double>& weights() const { return weights_; }

  // Real poles of the denominator, restricted to [lo, hi].
  std::vector<double> real_poles_in(double lo, double hi) const;

private:
  std::vector<double> support_points_;
  std::vector<double> support_values_;
  std::vector<double> weights_;
};

// Thrown when the greedy fit exhausts max_degree before reaching the requested
// tolerance; carries the best interpolant found and its achieved error.
class AaaNotConverged : public std::runtime_error {
public:
  AaaNotConverged(std::string what, RationalInterpolant best, double achieved)
      : std::runtime_error(std::move(what)), best_fit(std::move(best)), achieved_error(achieved) {}
  RationalInterpolant best_fit;
  double achieved_error; // max |r - f| over the table, relative to max |f|
};

// Greedy AAA fit of tabulated data (points strictly increasing). Stops when
// the max tabulated error drops below tol (relative to max |values|) or when
// degree reaches max_degree; in-range real poles are removed by dropping the
// nearest support point and re-solving.
RationalInterpolant aaa_fit(const std::vector<double>& points,
                            const std::vector<double>& values,
                            double tol, std::size_t max_degree);

} // namespace bathdisc
