#include "bathdisc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bathdisc {

namespace {

std::string sanitize(std::string name) {
  for (char& c : name)
    if (c == '[' || c == ']' || c == ',' || c == ':' || c == ' ') c = '_';
  return name;
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& file) {
  std::filesystem::create_directories(cfg.output_dir);
  return std::filesystem::path(cfg.output_dir) / file;
}

DiscreteBath build_method(const RunConfig& cfg, const Qnsd& q, const std::string& name,
                          std::optional<std::pair<double, double>> bsdo_window = {}) {
  if (name == "id") {
    IdDiscretizeOptions opts;
    if (cfg.id_rank) {
      opts.mode.mode = IdOptions::Mode::Rank;
      opts.mode.rank = *cfg.id_rank;
    } else {
      opts.mode.mode = IdOptions::Mode::Tolerance;
      opts.mode.tolerance = *cfg.id_tolerance;
    }
    opts.oracle_rel_tol = cfg.oracle_tolerance;
    opts.threads = cfg.threads;
    return discretize_id(q, cfg.grid, opts);
  }
  if (name == "ld") return discretize_ld(q, cfg.grid.omega_max_cm1, cfg.n_modes, cfg.ld_lambda);
  if (name == "mdm") return discretize_mdm(q, cfg.n_modes);
  if (name == "bsdo") {
    const auto [lo, hi] = bsdo_window ? *bsdo_window : cfg.bsdo_interval();
    return discretize_bsdo(q, lo, hi, cfg.n_modes);
  }
  throw ConfigError("unknown method '" + name + "'");
}

void write_bath_files(const RunConfig& cfg, const std::string& stem, DiscreteBath& bath) {
  bath.provenance.config_hash = cfg.semantic_hash();
  write_modes_csv_file(out_path(cfg, stem + "_modes.csv").string(), bath);
  write_modes_json_file(out_path(cfg, stem + "_modes.json").string(), bath);
}

} // namespace

DiscreteBath run_discretize(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.method == "all")
    throw ConfigError("run_discretize expects a single method; use compare for method=all");
  const Qnsd q = cfg.make_qnsd();
  DiscreteBath bath = build_method(cfg, q, cfg.method);
  write_bath_files(cfg, cfg.method, bath);
  return bath;
}

BcfSeries run_bcf(const RunConfig& cfg) {
  cfg.validate();
  const Qnsd q = cfg.make_qnsd();
  const auto ts = time_grid(cfg.grid.cutoff_time_fs, cfg.verification_points);
  const BcfSeries ref = bcf_reference(q, cfg.grid.omega_min_cm1, cfg.grid.omega_max_cm1, ts,
                                      cfg.oracle_tolerance, cfg.threads);
  write_bcf_csv_file(out_path(cfg, "bcf_reference.csv").string(), ref);
  return ref;
}

ComparisonBundle run_compare(const RunConfig& cfg) {
  cfg.validate();
  const Qnsd q = cfg.make_qnsd();
  const auto ts = time_grid(cfg.grid.cutoff_time_fs, cfg.verification_points);

  ComparisonBundle bundle;
  bundle.reference = bcf_reference(q, cfg.grid.omega_min_cm1, cfg.grid.omega_max_cm1, ts,
                                   cfg.oracle_tolerance, cfg.threads);

  std::vector<std::pair<std::string, std::optional<std::pair<double, double>>>> plan;
  if (cfg.method == "all") {
    plan.emplace_back("id", std::nullopt);
    plan.emplace_back("ld", std::nullopt);
    plan.emplace_back("mdm", std::nullopt);
    if (cfg.bsdo_intervals_cm1.empty()) {
      plan.emplace_back("bsdo", std::nullopt);
    } else {
      for (const auto& window : cfg.bsdo_intervals_cm1) {
        std::ostringstream name;
        name << "bsdo[" << window.first << ":" << window.second << "]";
        plan.emplace_back(name.str(), window);
      }
    }
  } else {
    plan.emplace_back(cfg.method, std::nullopt);
  }
  if (plan.empty()) throw ConfigError("empty method list");

  for (const auto& [name, window] : plan) {
    MethodOutcome outcome;
    outcome.name = name;
    try {
      const std::string base = name.substr(0, name.find('['));
      DiscreteBath bath = build_method(cfg, q, base, window);
      if (window) bath.method = name;
      write_bath_files(cfg, sanitize(name), bath);
      outcome.bcf = bcf_from_modes(bath, ts);
      outcome.report = compare(*outcome.bcf, bundle.reference, name);
      outcome.bath = std::move(bath);
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    bundle.methods.push_back(std::move(outcome));
  }

  // Panels: one CSV per quantity, methods as columns.
  auto open_panel = [&](const std::string& file) {
    std::ofstream os(out_path(cfg, file));
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    os.precision(17);
    os << "# config_hash = " << cfg.semantic_hash() << "\n";
    os << "# normalization_abs_c0_cm2 = " << bundle.reference.normalization << "\n";
    return os;
  };
  std::ofstream re_os = open_panel("compare_re.csv");
  std::ofstream im_os = open_panel("compare_im.csv");
  std::ofstream err_os = open_panel("compare_err.csv");
  re_os << "t_fs,reference";
  im_os << "t_fs,reference";
  err_os << "t_fs";
  for (const auto& m : bundle.methods) {
    if (!m.bcf) continue;
    re_os << ',' << m.name;
    im_os << ',' << m.name;
    err_os << ',' << m.name;
  }
  re_os << '\n';
  im_os << '\n';
  err_os << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    re_os << ts[i] << ',' << bundle.reference.values[i].real();
    im_os << ts[i] << ',' << bundle.reference.values[i].imag();
    err_os << ts[i];
    for (const auto& m : bundle.methods) {
      if (!m.bcf) continue;
      re_os << ',' << m.bcf->values[i].real();
      im_os << ',' << m.bcf->values[i].imag();
      err_os << ',' << m.report->normalized_error[i];
    }
    re_os << '\n';
    im_os << '\n';
    err_os << '\n';
  }

  std::ofstream summary = open_panel("compare_summary.csv");
  summary << "method,status,n_modes,max_error,mean_error,sum_g2_cm2,c0_consistency\n";
  for (const auto& m : bundle.methods) {
    if (!m.bath) {
      std::string reason = m.error;
      std::replace(reason.begin(), reason.end(), ',', ';');
      summary << m.name << ",failed: " << reason << ",,,,,\n";
      continue;
    }
    const double c0_dev = std::abs(m.bath->sum_g2() - bundle.reference.values.front().real()) /
                          bundle.reference.normalization;
    summary << m.name << ",ok," << m.bath->modes.size() << ',' << m.report->max_error << ','
            << m.report->mean_error << ',' << m.bath->sum_g2() << ',' << c0_dev << '\n';
  }

  write_bcf_csv_file(out_path(cfg, "bcf_reference.csv").string(), bundle.reference);
  return bundle;
}

ChainCoefficients run_chain(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.n_modes < 1) throw ConfigError("chain requires n_modes >= 1");
  const Qnsd q = cfg.make_qnsd();
  const auto [lo, hi] = cfg.bsdo_interval();
  const ChainCoefficients chain = chain_map(q, lo, hi, cfg.n_modes);
  write_chain_csv_file(out_path(cfg, "chain.csv").string(), chain);
  return chain;
}

} // namespace bathdisc
