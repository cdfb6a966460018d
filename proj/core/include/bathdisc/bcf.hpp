#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "bathdisc/bath.hpp"
#include "bathdisc/qnsd.hpp"
#include "bathdisc/quadrature.hpp"

namespace bathdisc {

// Sampled bath correlation function C(t) on an ascending time grid starting
// at t = 0. Values in cm^-2; normalization is |C(0)|.
struct BcfSeries {
  std::vector<double> times_fs;
  std::vector<std::complex<double>> values;
  double normalization = 0.0;
};

struct ErrorReport {
  std::string method;
  std::vector<double> normalized_error; // |dC(t)| / |C_ref(0)| per time point
  double max_error = 0.0;
  double mean_error = 0.0;
};

// Equispaced [0, t_max] grid with n points.
std::vector<double> time_grid(double t_max_fs, int n);

// High-accuracy reference C(t) = integral_lo^hi S_beta(w) e^{-i kappa w t} dw,
// adaptive per time point to relative tolerance rel_tol. Time points are
// independent; `threads` only distributes them.
BcfSeries bcf_reference(const Qnsd& q, double omega_lo_cm1, double omega_hi_cm1,
                        const std::vector<double>& times_fs, double rel_tol = 1e-10,
                        int threads = 1, const QuadratureOptions& panel_opts = {});

// Model reconstruction C(t) = sum_k g_k^2 e^{-i kappa w_k t} at a single time.
std::complex<double> bath_bcf_at(const DiscreteBath& bath, double t_fs);

// Same, sampled on a grid starting at 0.
BcfSeries bcf_from_modes(const DiscreteBath& bath, const std::vector<double>& times_fs);

// Pointwise |C_approx - C_ref| normalized by |C_ref(0)|; grids must match.
ErrorReport compare(const BcfSeries& approx, const BcfSeries& reference,
                    std::string method_label = {});

void write_bcf_csv(std::ostream& os, const BcfSeries& series);
void write_bcf_csv_file(const std::string& path, const BcfSeries& series);

} // namespace bathdisc
