#include "bathdisc/bcf.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "bathdisc/parallel.hpp"
#include "bathdisc/units.hpp"

namespace bathdisc {

namespace {

void check_time_grid(const std::vector<double>& ts) {
  if (ts.empty()) throw std::invalid_argument("time grid is empty");
  if (ts.front() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw std::invalid_argument("time grid must be strictly ascending");
}

} // namespace

std::vector<double> time_grid(double t_max_fs, int n) {
  if (n < 2) throw std::invalid_argument("time grid needs at least 2 points");
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = t_max_fs * i / (n - 1);
  return ts;
}

BcfSeries bcf_reference(const Qnsd& q, double omega_lo_cm1, double omega_hi_cm1,
                        const std::vector<double>& times_fs, double rel_tol, int threads,
                        const QuadratureOptions& panel_opts) {
  check_time_grid(times_fs);
  if (!(omega_lo_cm1 < omega_hi_cm1))
    throw std::invalid_argument("frequency window must satisfy lo < hi");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  BcfSeries out;
  out.times_fs = times_fs;
  out.values.resize(times_fs.size());
  QuadratureOptions opts = panel_opts;
  opts.rel_tol = rel_tol;
  std::vector<std::string> failures(times_fs.size());
  parallel_for(static_cast<int>(times_fs.size()), threads, [&](int i) {
    try {
      out.values[i] = qnsd_fourier_integral(q, omega_lo_cm1, omega_hi_cm1, times_fs[i], opts);
    } catch (const QuadratureNotConverged& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < failures.size(); ++i)
    if (!failures[i].empty())
      throw QuadratureNotConverged("bcf_reference failed at t = " + std::to_string(times_fs[i]) +
                                       " fs: " + failures[i],
                                   0.0, 0.0);
  out.normalization = std::abs(out.values.front());
  return out;
}

std::complex<double> bath_bcf_at(const DiscreteBath& bath, double t_fs) {
  const double kappa = constants::phase_per_cm1_fs;
  std::complex<double> sum = 0.0;
  for (const Mode& m : bath.modes) {
    const double phase = -kappa * m.omega_cm1 * t_fs;
    sum += m.g2_cm2 * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return sum;
}

BcfSeries bcf_from_modes(const DiscreteBath& bath, const std::vector<double>& times_fs) {
  check_time_grid(times_fs);
  if (bath.modes.empty()) throw std::invalid_argument("bath has no modes");
  BcfSeries out;
  out.times_fs = times_fs;
  out.values.resize(times_fs.size());
  for (std::size_t i = 0; i < times_fs.size(); ++i)
    out.values[i] = bath_bcf_at(bath, times_fs[i]);
  out.normalization = std::abs(out.values.front());
  return out;
}

ErrorReport compare(const BcfSeries& approx, const BcfSeries& reference,
                    std::string method_label) {
  if (approx.times_fs != reference.times_fs)
    throw std::invalid_argument("compare: time grids differ");
  if (!(reference.normalization > 0.0))
    throw std::invalid_argument("compare: reference normalization must be positive");
  ErrorReport report;
  report.method = std::move(method_label);
  report.normalized_error.resize(approx.values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < approx.values.size(); ++i) {
    const double e = std::abs(approx.values[i] - reference.values[i]) / reference.normalization;
    report.normalized_error[i] = e;
    report.max_error = std::max(report.max_error, e);
    sum += e;
  }
  report.mean_error = sum / static_cast<double>(report.normalized_error.size());
  return report;
}

void write_bcf_csv(std::ostream& os, const BcfSeries& series) {
  os.precision(17);
  os << "# bath correlation function, values in cm^-2\n";
  os << "# normalization_abs_c0_cm2 = " << series.normalization << "\n";
  os << "t_fs,re_cm2,im_cm2,abs_cm2\n";
  for (std::size_t i = 0; i < series.times_fs.size(); ++i) {
    os << series.times_fs[i] << ',' << series.values[i].real() << ',' << series.values[i].imag()
       << ',' << std::abs(series.values[i]) << '\n';
  }
}

void write_bcf_csv_file(const std::string& path, const BcfSeries& series) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_bcf_csv(os, series);
}

} // namespace bathdisc
