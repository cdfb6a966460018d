#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bathdisc/rational.hpp"

namespace bathdisc {

// Two-column tabulated spectral density: omega [cm^-1] strictly increasing,
// J(omega) [cm^-1], at least 8 rows.
struct SdTable {
  std::vector<double> omega_cm1;
  std::vector<double> j_cm1;

  void validate() const;
  std::size_t size() const { return omega_cm1.size(); }
};

// Whitespace- or comma-separated numeric text; '#' starts a comment.
SdTable load_sd_table(std::istream& in);
SdTable load_sd_table_file(const std::string& path);

// Natural cubic smoothing spline evaluated at the table abscissae: minimizes
// sum (y - J)^2 + lambda * integral (y'')^2. lambda = 0 returns the input.
SdTable smooth_table(const SdTable& table, double lambda);

// Smoothing strength chosen by generalized cross-validation.
SdTable smooth_table_gcv(const SdTable& table, double* chosen_lambda = nullptr);

// AAA surrogate of the (smoothed) table.
RationalInterpolant fit_sd_table(const SdTable& table, double tol, std::size_t max_degree);

} // namespace bathdisc
