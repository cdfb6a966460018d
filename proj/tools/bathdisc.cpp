// bathdisc: discretize a bosonic-bath spectral density into a minimal set of
// modes whose correlation function matches the exact one over a time window.
//
// Subcommands:
//   discretize  build one bath (method = id | ld | mdm | bsdo), write mode tables
//   bcf         evaluate the reference BCF (or a stored mode table's BCF)
//   compare     run every requested method against the oracle, emit panel CSVs
//   chain       nearest-neighbor chain coefficients from the quadrature bath

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "bathdisc/bcf.hpp"
#include "bathdisc/config.hpp"
#include "bathdisc/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, CommonArgs& args,
                        std::map<std::string, std::string>& flag_values) {
  cmd->add_option("--config", args.config_path, "run configuration file (key = value lines)");
  for (const auto& key : bathdisc::config_keys()) {
    cmd->add_option("--" + key, flag_values[key], "override config key " + key);
  }
}

bathdisc::RunConfig resolve_config(const CommonArgs& args,
                                   const std::map<std::string, std::string>& flag_values) {
  std::map<std::string, std::string> overrides;
  for (const auto& [key, value] : flag_values)
    if (!value.empty()) overrides[key] = value;
  if (args.config_path.empty()) {
    // Build entirely from flags.
    std::ostringstream synth;
    for (const auto& [key, value] : overrides) synth << key << " = " << value << "\n";
    std::istringstream in(synth.str());
    return bathdisc::parse_config(in, "<flags>");
  }
  bathdisc::RunConfig cfg = bathdisc::load_config(args.config_path);
  if (!overrides.empty()) bathdisc::apply_overrides(cfg, overrides);
  return cfg;
}

int dispatch(const std::string& command, const bathdisc::RunConfig& cfg,
             const std::string& modes_file) {
  using namespace bathdisc;
  if (command == "discretize") {
    const DiscreteBath bath = run_discretize(cfg);
    std::cout << cfg.method << ": " << bath.modes.size() << " modes";
    if (bath.provenance.achieved_max_bcf_error)
      std::cout << ", max normalized BCF error " << *bath.provenance.achieved_max_bcf_error;
    std::cout << "\n";
    return 0;
  }
  if (command == "bcf") {
    if (!modes_file.empty()) {
      const DiscreteBath bath = read_modes_csv_file(modes_file);
      const auto ts = time_grid(cfg.grid.cutoff_time_fs, cfg.verification_points);
      const BcfSeries series = bcf_from_modes(bath, ts);
      std::filesystem::create_directories(cfg.output_dir);
      const auto path = std::filesystem::path(cfg.output_dir) / "bcf_modes.csv";
      write_bcf_csv_file(path.string(), series);
      std::cout << "model BCF written to " << path.string() << "\n";
      return 0;
    }
    const BcfSeries ref = run_bcf(cfg);
    std::cout << "reference BCF on " << ref.times_fs.size() << " points, |C(0)| = "
              << ref.normalization << " cm^-2\n";
    return 0;
  }
  if (command == "compare") {
    const ComparisonBundle bundle = run_compare(cfg);
    std::printf("%-18s %10s %14s %14s\n", "method", "modes", "max_error", "mean_error");
    for (const auto& m : bundle.methods) {
      if (!m.bath) {
        std::printf("%-18s failed: %s\n", m.name.c_str(), m.error.c_str());
        continue;
      }
      std::printf("%-18s %10zu %14.6e %14.6e\n", m.name.c_str(), m.bath->modes.size(),
                  m.report->max_error, m.report->mean_error);
    }
    return 0;
  }
  if (command == "chain") {
    const ChainCoefficients chain = run_chain(cfg);
    std::cout << "chain with " << chain.site_energy_cm1.size()
              << " sites, system coupling " << chain.system_coupling_cm1 << " cm^-1\n";
    return 0;
  }
  return 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"bath spectral density discretization toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::map<std::string, std::string> flag_values;
  std::string modes_file;

  CLI::App* discretize = app.add_subcommand("discretize", "build one discrete bath");
  CLI::App* bcf = app.add_subcommand("bcf", "evaluate bath correlation functions");
  bcf->add_option("--modes", modes_file, "evaluate a stored mode table instead of the oracle");
  CLI::App* compare = app.add_subcommand("compare", "compare methods against the oracle");
  CLI::App* chain = app.add_subcommand("chain", "emit chain-mapping coefficients");
  for (CLI::App* cmd : {discretize, bcf, compare, chain})
    add_config_options(cmd, args, flag_values);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const bathdisc::RunConfig cfg = resolve_config(args, flag_values);
    return dispatch(command, cfg, modes_file);
  } catch (const bathdisc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
