#include "bathdisc/config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "bathdisc/sd_table.hpp"

namespace bathdisc {

namespace {

const std::vector<std::string> kKeys = {
    "sd_model",
    "powerlaw_exponent",
    "powerlaw_alpha",
    "powerlaw_omega_c_cm1",
    "sd_table_file",
    "table_smoothing_lambda",
    "aaa_tolerance",
    "aaa_max_degree",
    "omega_floor_cm1",
    "temperature_K",
    "method",
    "cutoff_time_fs",
    "omega_min_cm1",
    "omega_max_cm1",
    "time_points",
    "freq_points",
    "id_rank",
    "id_tolerance",
    "n_modes",
    "ld_lambda",
    "bsdo_omega_min_cm1",
    "bsdo_omega_max_cm1",
    "bsdo_intervals_cm1",
    "oracle_tolerance",
    "verification_points",
    "output_dir",
    "threads",
};

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number from '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  return i;
}

// "lo..hi, lo..hi, ..."
std::vector<std::pair<double, double>> parse_intervals(const std::string& key,
                                                       const std::string& value) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto sep = item.find("..");
    if (sep == std::string::npos)
      throw ConfigError("config key '" + key + "': interval '" + item + "' must look like lo..hi");
    const double lo = parse_double(key, trim(item.substr(0, sep)));
    const double hi = parse_double(key, trim(item.substr(sep + 2)));
    if (!(lo < hi))
      throw ConfigError("config key '" + key + "': interval '" + item + "' must satisfy lo < hi");
    out.emplace_back(lo, hi);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': no intervals given");
  return out;
}

std::string unknown_key_message(const std::string& key) {
  std::string msg = "unknown config key '" + key + "'";
  for (const auto& known : kKeys) {
    // A known key that extends the given one by a unit suffix.
    if (known.size() > key.size() && known.rfind(key, 0) == 0 && known[key.size()] == '_') {
      msg += "; did you mean '" + known + "' (unit suffix required)?";
      return msg;
    }
  }
  return msg;
}

struct KeyValues {
  std::map<std::string, std::string> values;
  std::vector<std::string> order;
};

KeyValues read_key_values(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + unknown_key_message(key));
    if (kv.values.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv.values[key] = value;
    kv.order.push_back(key);
  }
  return kv;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               PowerLawExpCutoff& model, bool& saw_model_param, bool& saw_model) {
  if (key == "sd_model") {
    if (value != "powerlaw")
      throw ConfigError("config key 'sd_model': unsupported model '" + value +
                        "' (available: powerlaw)");
    saw_model = true;
  } else if (key == "powerlaw_exponent") {
    model.exponent_s = parse_double(key, value);
    saw_model_param = true;
  } else if (key == "powerlaw_alpha") {
    model.coupling_alpha = parse_double(key, value);
    saw_model_param = true;
  } else if (key == "powerlaw_omega_c_cm1") {
    model.omega_c_cm1 = parse_double(key, value);
    saw_model_param = true;
  } else if (key == "sd_table_file") {
    cfg.table_file = value;
  } else if (key == "table_smoothing_lambda") {
    if (value == "auto")
      cfg.smoothing_lambda.reset();
    else
      cfg.smoothing_lambda = parse_double(key, value);
  } else if (key == "aaa_tolerance") {
    cfg.aaa_tolerance = parse_double(key, value);
  } else if (key == "aaa_max_degree") {
    cfg.aaa_max_degree = parse_int(key, value);
  } else if (key == "omega_floor_cm1") {
    cfg.omega_floor_cm1 = parse_double(key, value);
  } else if (key == "temperature_K") {
    cfg.temperature_K = parse_double(key, value);
  } else if (key == "method") {
    cfg.method = value;
  } else if (key == "cutoff_time_fs") {
    cfg.grid.cutoff_time_fs = parse_double(key, value);
  } else if (key == "omega_min_cm1") {
    cfg.grid.omega_min_cm1 = parse_double(key, value);
  } else if (key == "omega_max_cm1") {
    cfg.grid.omega_max_cm1 = parse_double(key, value);
  } else if (key == "time_points") {
    cfg.grid.time_points = parse_int(key, value);
  } else if (key == "freq_points") {
    cfg.grid.freq_points = parse_int(key, value);
  } else if (key == "id_rank") {
    cfg.id_rank = parse_int(key, value);
  } else if (key == "id_tolerance") {
    cfg.id_tolerance = parse_double(key, value);
  } else if (key == "n_modes") {
    cfg.n_modes = parse_int(key, value);
  } else if (key == "ld_lambda") {
    cfg.ld_lambda = parse_double(key, value);
  } else if (key == "bsdo_omega_min_cm1") {
    cfg.bsdo_omega_min_cm1 = parse_double(key, value);
  } else if (key == "bsdo_omega_max_cm1") {
    cfg.bsdo_omega_max_cm1 = parse_double(key, value);
  } else if (key == "bsdo_intervals_cm1") {
    cfg.bsdo_intervals_cm1 = parse_intervals(key, value);
  } else if (key == "oracle_tolerance") {
    cfg.oracle_tolerance = parse_double(key, value);
  } else if (key == "verification_points") {
    cfg.verification_points = parse_int(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "threads") {
    cfg.threads = parse_int(key, value);
  } else {
    throw ConfigError(unknown_key_message(key));
  }
}

RunConfig build_config(const KeyValues& kv) {
  RunConfig cfg;
  PowerLawExpCutoff model{1.0, 1.0, 1.0};
  bool saw_model = false, saw_model_param = false;
  for (const auto& key : kv.order)
    apply_key(cfg, key, kv.values.at(key), model, saw_model_param, saw_model);
  if (saw_model || (saw_model_param && !cfg.table_file)) cfg.model = model;

  // Paper-informed grid defaults: 500 (model) or 1000 (tabulated) time points
  // by 2000 frequency points.
  if (cfg.grid.time_points == 0) cfg.grid.time_points = cfg.table_file ? 1000 : 500;
  if (cfg.grid.freq_points == 0) cfg.grid.freq_points = 2000;
  return cfg;
}

} // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

RunConfig parse_config(std::istream& in, const std::string& origin) {
  RunConfig cfg = build_config(read_key_values(in, origin));
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, path);
}

void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& overrides) {
  PowerLawExpCutoff model = cfg.model.value_or(PowerLawExpCutoff{1.0, 1.0, 1.0});
  bool saw_model = cfg.model.has_value(), saw_model_param = false;
  for (const auto& [key, value] : overrides) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(unknown_key_message(key));
    apply_key(cfg, key, value, model, saw_model_param, saw_model);
  }
  if (saw_model || saw_model_param) cfg.model = model;
  cfg.validate();
}

void RunConfig::validate() const {
  if (model.has_value() == table_file.has_value())
    throw ConfigError("exactly one spectral-density source required: set sd_model=powerlaw (with "
                      "powerlaw_* keys) or sd_table_file");
  if (model) {
    if (!(model->exponent_s > 0.0)) throw ConfigError("powerlaw_exponent must be > 0");
    if (!(model->coupling_alpha > 0.0)) throw ConfigError("powerlaw_alpha must be > 0");
    if (!(model->omega_c_cm1 > 0.0)) throw ConfigError("powerlaw_omega_c_cm1 must be > 0");
  }
  if (temperature_K < 0.0) throw ConfigError("temperature_K must be >= 0");
  if (omega_floor_cm1 < 0.0) throw ConfigError("omega_floor_cm1 must be >= 0");
  if (!(aaa_tolerance > 0.0)) throw ConfigError("aaa_tolerance must be > 0");
  if (aaa_max_degree < 1) throw ConfigError("aaa_max_degree must be >= 1");
  if (smoothing_lambda && *smoothing_lambda < 0.0)
    throw ConfigError("table_smoothing_lambda must be >= 0 or 'auto'");

  static const std::vector<std::string> methods = {"id", "ld", "mdm", "bsdo", "all"};
  if (std::find(methods.begin(), methods.end(), method) == methods.end())
    throw ConfigError("method must be one of id, ld, mdm, bsdo, all (got '" + method + "')");

  if (!(grid.cutoff_time_fs > 0.0)) throw ConfigError("cutoff_time_fs must be > 0");
  if (!(grid.omega_min_cm1 < grid.omega_max_cm1))
    throw ConfigError("omega_min_cm1 must be below omega_max_cm1");
  if (grid.time_points < 2 || grid.freq_points < 2)
    throw ConfigError("time_points and freq_points must be >= 2");

  const bool needs_id = method == "id" || method == "all";
  if (needs_id) {
    if (id_rank.has_value() == id_tolerance.has_value())
      throw ConfigError("the id method needs exactly one of id_rank or id_tolerance");
    if (id_rank && *id_rank < 1) throw ConfigError("id_rank must be >= 1");
    if (id_tolerance && !(*id_tolerance > 0.0)) throw ConfigError("id_tolerance must be > 0");
  }
  const bool needs_m = method == "ld" || method == "mdm" || method == "bsdo" || method == "all";
  if (needs_m) {
    if (n_modes < 1) throw ConfigError("n_modes is required for ld/mdm/bsdo (and 'all')");
    if ((method == "ld" || method == "mdm" || method == "all") && n_modes % 2 != 0)
      throw ConfigError("ld and mdm require an even n_modes");
  }
  if ((method == "ld" || method == "all") && !(ld_lambda > 1.0))
    throw ConfigError("ld_lambda must exceed 1");
  if (bsdo_omega_min_cm1.has_value() != bsdo_omega_max_cm1.has_value())
    throw ConfigError("bsdo_omega_min_cm1 and bsdo_omega_max_cm1 must be given together");
  if (bsdo_omega_min_cm1 && !(*bsdo_omega_min_cm1 < *bsdo_omega_max_cm1))
    throw ConfigError("bsdo interval must satisfy min < max");

  if (!(oracle_tolerance > 0.0)) throw ConfigError("oracle_tolerance must be > 0");
  if (verification_points < 2) throw ConfigError("verification_points must be >= 2");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

Qnsd RunConfig::make_qnsd() const {
  if (model) return Qnsd(SpectralDensity::power_law(model->exponent_s, model->coupling_alpha,
                                                    model->omega_c_cm1),
                         temperature_K);
  SdTable table = load_sd_table_file(*table_file);
  table = smoothing_lambda ? smooth_table(table, *smoothing_lambda) : smooth_table_gcv(table);
  auto interp = std::make_shared<RationalInterpolant>(
      fit_sd_table(table, aaa_tolerance, static_cast<std::size_t>(aaa_max_degree)));
  return Qnsd(SpectralDensity::tabulated(std::move(interp), omega_floor_cm1), temperature_K);
}

std::pair<double, double> RunConfig::bsdo_interval() const {
  if (bsdo_omega_min_cm1) return {*bsdo_omega_min_cm1, *bsdo_omega_max_cm1};
  return {grid.omega_min_cm1, grid.omega_max_cm1};
}

std::string RunConfig::semantic_hash() const {
  std::ostringstream ss;
  ss.precision(17);
  auto put = [&ss](const char* key, const auto& value) { ss << key << '=' << value << '\n'; };
  if (model) {
    put("sd_model", "powerlaw");
    put("powerlaw_exponent", model->exponent_s);
    put("powerlaw_alpha", model->coupling_alpha);
    put("powerlaw_omega_c_cm1", model->omega_c_cm1);
  }
  if (table_file) {
    put("sd_table_file", *table_file);
    put("table_smoothing_lambda", smoothing_lambda ? std::to_string(*smoothing_lambda) : "auto");
    put("aaa_tolerance", aaa_tolerance);
    put("aaa_max_degree", aaa_max_degree);
    put("omega_floor_cm1", omega_floor_cm1);
  }
  put("temperature_K", temperature_K);
  put("method", method);
  put("cutoff_time_fs", grid.cutoff_time_fs);
  put("omega_min_cm1", grid.omega_min_cm1);
  put("omega_max_cm1", grid.omega_max_cm1);
  put("time_points", grid.time_points);
  put("freq_points", grid.freq_points);
  if (id_rank) put("id_rank", *id_rank);
  if (id_tolerance) put("id_tolerance", *id_tolerance);
  if (n_modes > 0) put("n_modes", n_modes);
  put("ld_lambda", ld_lambda);
  if (bsdo_omega_min_cm1) {
    put("bsdo_omega_min_cm1", *bsdo_omega_min_cm1);
    put("bsdo_omega_max_cm1", *bsdo_omega_max_cm1);
  }
  for (const auto& [lo, hi] : bsdo_intervals_cm1) {
    ss << "bsdo_interval=" << lo << ".." << hi << '\n';
  }
  put("oracle_tolerance", oracle_tolerance);
  put("verification_points", verification_points);

  // FNV-1a, 64 bit.
  const std::string data = ss.str();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

} // namespace bathdisc
