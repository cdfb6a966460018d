#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bathdisc/bath.hpp"
#include "bathdisc/qnsd.hpp"

namespace bathdisc {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One run of the tool: spectral-density source, temperature, method and its
// knobs, grids, and output destination. Parsed from `key = value` text with
// '#' comments; units are spelled in the key names.
struct RunConfig {
  // Source: exactly one of the two.
  std::optional<PowerLawExpCutoff> model;
  std::optional<std::string> table_file;
  std::optional<double> smoothing_lambda; // empty = choose by cross-validation
  double aaa_tolerance = 1e-6;
  int aaa_max_degree = 150;
  double omega_floor_cm1 = 1.0;

  double temperature_K = 0.0;
  std::string method; // id | ld | mdm | bsdo | all

  DiscretizationGrid grid;

  std::optional<int> id_rank;
  std::optional<double> id_tolerance;

  int n_modes = 0;        // M for ld/mdm/bsdo
  double ld_lambda = 1.1; // log-spacing ratio
  std::optional<double> bsdo_omega_min_cm1;
  std::optional<double> bsdo_omega_max_cm1;
  std::vector<std::pair<double, double>> bsdo_intervals_cm1; // compare runs

  double oracle_tolerance = 1e-10;
  int verification_points = 2000;
  std::string output_dir = ".";
  int threads = 1;

  void validate() const;
  // Builds the QNSD, running the table ingest pipeline when tabulated.
  Qnsd make_qnsd() const;
  // Hash over the semantically meaningful fields (everything except
  // output_dir and threads).
  std::string semantic_hash() const;
  std::pair<double, double> bsdo_interval() const;
};

RunConfig parse_config(std::istream& in, const std::string& origin = "<stream>");
RunConfig load_config(const std::string& path);

// Applies `key = value` overrides on top of a parsed config (CLI flags).
void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& overrides);

// All recognized config keys, for CLI flag generation.
const std::vector<std::string>& config_keys();

} // namespace bathdisc
