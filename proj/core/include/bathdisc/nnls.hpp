#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bathdisc {

struct NnlsResult {
  Eigen::VectorXd solution;      // z >= 0
  double kkt_residual = 0.0;     // max violated dual component
  double dual_tolerance = 0.0;   // tau = 1e-10 * ||B^T c||_inf
  int iterations = 0;
};

class NnlsNotConverged : public std::runtime_error {
public:
  NnlsNotConverged(std::string what, NnlsResult best)
      : std::runtime_error(std::move(what)), best_iterate(std::move(best)) {}
  NnlsResult best_iterate;
};

// Lawson-Hanson active-set solve of min ||c - B z||_2 s.t. z >= 0.
// On return the KKT conditions hold to within dual_tolerance.
NnlsResult nnls(const Eigen::MatrixXd& B, const Eigen::VectorXd& c);

} // namespace bathdisc
