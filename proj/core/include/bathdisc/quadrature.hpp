#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "bathdisc/qnsd.hpp"

namespace bathdisc {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  int max_panels = 200000;
  // Narrow features between Kronrod nodes of a wide panel are invisible to
  // the error estimate; a minimum subdivision guards against that.
  int min_panels = 32;
  // Extra initial panel boundary, used to check split-invariance of results.
  std::optional<double> forced_split;
};

// Thrown when the panel budget is exhausted before the tolerance is met.
class QuadratureNotConverged : public std::runtime_error {
public:
  QuadratureNotConverged(std::string what, double value, double error_estimate)
      : std::runtime_error(std::move(what)), value(value), error_estimate(error_estimate) {}
  double value;
  double error_estimate;
};

// Adaptive Gauss-Kronrod (G7/K15) over the panels defined by `boundaries`
// (strictly increasing, at least {a, b}). Splits the worst panel first;
// deterministic for a given input.
double integrate_gk_adaptive(const std::function<double(double)>& f,
                             std::vector<double> boundaries,
                             const QuadratureOptions& opts = {});

// Double-exponential (tanh-sinh) rule on [a, b]; robust to integrable
// endpoint singularities.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rel_tol);

// integral_a^b S_beta(w) g(w) dw. Splits at w = 0 and hands the panels
// touching a singular origin to the double-exponential rule.
double qnsd_weighted_integral(const Qnsd& q, double a, double b,
                              const std::function<double(double)>& g,
                              const QuadratureOptions& opts = {});

// integral_lo^hi S_beta(w) exp(-i*kappa*w*t) dw with kappa = phase_per_cm1_fs.
// Initial panel widths are capped at pi/(kappa*t) so no panel spans more than
// half an oscillation of the fastest phase.
std::complex<double> qnsd_fourier_integral(const Qnsd& q, double lo, double hi, double t_fs,
                                           const QuadratureOptions& opts = {});

} // namespace bathdisc
