#include "bathdisc/bath.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bathdisc {

namespace {

constexpr int kModesSchemaVersion = 1;

void write_provenance_comments(std::ostream& os, const DiscreteBath& bath) {
  os << "# method = " << bath.method << "\n";
  os << "# temperature_K = " << bath.temperature_K << "\n";
  if (!bath.provenance.mode_descriptor.empty())
    os << "# mode = " << bath.provenance.mode_descriptor << "\n";
  if (bath.provenance.achieved_max_bcf_error)
    os << "# achieved_max_bcf_error = " << *bath.provenance.achieved_max_bcf_error << "\n";
  if (bath.provenance.id_seed_residual)
    os << "# id_seed_residual = " << *bath.provenance.id_seed_residual << "\n";
  if (!bath.provenance.config_hash.empty())
    os << "# config_hash = " << bath.provenance.config_hash << "\n";
  for (const auto& w : bath.provenance.warnings) os << "# warning: " << w << "\n";
}

} // namespace

void write_modes_csv(std::ostream& os, const DiscreteBath& bath) {
  os.precision(17);
  write_provenance_comments(os, bath);
  os << "omega_cm1,g_cm1,g2_cm2\n";
  for (const Mode& m : bath.modes)
    os << m.omega_cm1 << ',' << m.g_cm1 << ',' << m.g2_cm2 << '\n';
}

void write_modes_csv_file(const std::string& path, const DiscreteBath& bath) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_modes_csv(os, bath);
}

DiscreteBath read_modes_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open modes csv: " + path);
  DiscreteBath bath;
  std::string line;
  bool saw_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.find("method") != std::string::npos && eq != std::string::npos && bath.method.empty()) {
        std::string v = line.substr(eq + 1);
        v.erase(0, v.find_first_not_of(" \t"));
        v.erase(v.find_last_not_of(" \t\r") + 1);
        bath.method = v;
      }
      if (line.find("temperature_K") != std::string::npos && eq != std::string::npos)
        bath.temperature_K = std::stod(line.substr(eq + 1));
      continue;
    }
    if (!saw_header) { // column header row
      saw_header = true;
      if (line.rfind("omega_cm1", 0) == 0) continue;
    }
    std::istringstream ss(line);
    Mode m;
    char comma = 0;
    if (!(ss >> m.omega_cm1 >> comma >> m.g_cm1 >> comma >> m.g2_cm2))
      throw std::runtime_error("modes csv: malformed line " + std::to_string(lineno));
    bath.modes.push_back(m);
  }
  if (bath.modes.empty()) throw std::runtime_error("modes csv: no modes in " + path);
  return bath;
}

void write_modes_json_file(const std::string& path, const DiscreteBath& bath) {
  nlohmann::json j;
  j["schema_version"] = kModesSchemaVersion;
  j["method"] = bath.method;
  j["temperature_K"] = bath.temperature_K;
  nlohmann::json prov;
  prov["mode"] = bath.provenance.mode_descriptor;
  if (bath.provenance.grid) {
    prov["grid"] = {{"cutoff_time_fs", bath.provenance.grid->cutoff_time_fs},
                    {"omega_min_cm1", bath.provenance.grid->omega_min_cm1},
                    {"omega_max_cm1", bath.provenance.grid->omega_max_cm1},
                    {"time_points", bath.provenance.grid->time_points},
                    {"freq_points", bath.provenance.grid->freq_points}};
  }
  if (bath.provenance.achieved_max_bcf_error)
    prov["achieved_max_bcf_error"] = *bath.provenance.achieved_max_bcf_error;
  if (bath.provenance.id_seed_residual)
    prov["id_seed_residual"] = *bath.provenance.id_seed_residual;
  if (!bath.provenance.pivot_order_omega_cm1.empty())
    prov["pivot_order_omega_cm1"] = bath.provenance.pivot_order_omega_cm1;
  if (!bath.provenance.config_hash.empty()) prov["config_hash"] = bath.provenance.config_hash;
  if (!bath.provenance.warnings.empty()) prov["warnings"] = bath.provenance.warnings;
  j["provenance"] = prov;
  auto modes = nlohmann::json::array();
  for (const Mode& m : bath.modes)
    modes.push_back({{"omega_cm1", m.omega_cm1}, {"g_cm1", m.g_cm1}, {"g2_cm2", m.g2_cm2}});
  j["modes"] = modes;

  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
}

void write_chain_csv(std::ostream& os, const ChainCoefficients& chain) {
  os.precision(17);
  os << "# total_weight_cm2 = " << chain.total_weight_cm2 << "\n";
  os << "# system_coupling_cm1 = " << chain.system_coupling_cm1 << "\n";
  os << "site,alpha_cm1,hop_cm1\n";
  for (std::size_t k = 0; k < chain.site_energy_cm1.size(); ++k) {
    os << k << ',' << chain.site_energy_cm1[k] << ',';
    if (k < chain.hopping_cm1.size())
      os << chain.hopping_cm1[k];
    else
      os << 0.0; // last site has no outgoing hop
    os << '\n';
  }
}

void write_chain_csv_file(const std::string& path, const ChainCoefficients& chain) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_chain_csv(os, chain);
}

} // namespace bathdisc
