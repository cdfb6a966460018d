#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bathdisc {

// Equispaced discretization window: t_i = (i-1) T / (m-1) on [0, T],
// w_j = lo + (j-1)(hi-lo)/(n-1) on [lo, hi].
struct DiscretizationGrid {
  double cutoff_time_fs = 0.0;
  double omega_min_cm1 = 0.0;
  double omega_max_cm1 = 0.0;
  int time_points = 0;
  int freq_points = 0;

  void validate() const;
  std::vector<double> times() const;
  std::vector<double> frequencies() const;
  double freq_step() const { return (omega_max_cm1 - omega_min_cm1) / (freq_points - 1); }
};

struct Mode {
  double omega_cm1 = 0.0;
  double g_cm1 = 0.0;
  double g2_cm2 = 0.0;
};

struct BathProvenance {
  std::string mode_descriptor;                    // e.g. "rank=20" or "tolerance=1e-4"
  std::optional<DiscretizationGrid> grid;
  std::optional<double> achieved_max_bcf_error;   // normalized, on the build grid
  std::optional<double> id_seed_residual;         // quadrature-weight seed fit quality
  std::vector<double> pivot_order_omega_cm1;      // ID selection order
  std::vector<std::string> warnings;
  std::string config_hash;
};

// Discrete bath: modes (w_k, g_k) reproducing the BCF as sum g_k^2 e^{-i w_k t}.
// Modes are sorted by ascending frequency; zero-weight modes are dropped.
struct DiscreteBath {
  std::vector<Mode> modes;
  double temperature_K = 0.0;
  std::string method;
  BathProvenance provenance;

  double sum_g2() const;
};

// Nearest-neighbor chain equivalent of a Gauss-quadrature bath: site energies
// alpha_k, hoppings sqrt(eta_k), and system coupling sqrt(total_weight).
struct ChainCoefficients {
  double total_weight_cm2 = 0.0;
  std::vector<double> site_energy_cm1;
  std::vector<double> hopping_cm1;
  double system_coupling_cm1 = 0.0;
};

void write_modes_csv(std::ostream& os, const DiscreteBath& bath);
void write_modes_csv_file(const std::string& path, const DiscreteBath& bath);
DiscreteBath read_modes_csv_file(const std::string& path);

void write_modes_json_file(const std::string& path, const DiscreteBath& bath);

void write_chain_csv(std::ostream& os, const ChainCoefficients& chain);
void write_chain_csv_file(const std::string& path, const ChainCoefficients& chain);

} // namespace bathdisc
