#include "bathdisc/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include <Eigen/Dense>

#include "bathdisc/bcf.hpp"
#include "bathdisc/nnls.hpp"
#include "bathdisc/parallel.hpp"
#include "bathdisc/quadrature.hpp"
#include "bathdisc/units.hpp"

namespace bathdisc {

namespace {

std::string format_mode(const IdOptions& mode) {
  std::ostringstream ss;
  if (mode.mode == IdOptions::Mode::Rank)
    ss << "rank=" << mode.rank;
  else
    ss << "tolerance=" << mode.tolerance;
  return ss.str();
}

void finalize(DiscreteBath& bath) {
  std::sort(bath.modes.begin(), bath.modes.end(),
            [](const Mode& a, const Mode& b) { return a.omega_cm1 < b.omega_cm1; });
}

} // namespace

void DiscretizationGrid::validate() const {
  if (time_points < 2 || freq_points < 2)
    throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!(cutoff_time_fs > 0.0)) throw std::invalid_argument("grid cutoff time must be positive");
  if (!(omega_min_cm1 < omega_max_cm1))
    throw std::invalid_argument("grid frequency window must satisfy min < max");
}

std::vector<double> DiscretizationGrid::times() const {
  std::vector<double> ts(time_points);
  for (int i = 0; i < time_points; ++i)
    ts[i] = cutoff_time_fs * i / (time_points - 1);
  return ts;
}

std::vector<double> DiscretizationGrid::frequencies() const {
  std::vector<double> ws(freq_points);
  for (int j = 0; j < freq_points; ++j)
    ws[j] = omega_min_cm1 + (omega_max_cm1 - omega_min_cm1) * j / (freq_points - 1);
  return ws;
}

double DiscreteBath::sum_g2() const {
  double s = 0.0;
  for (const Mode& m : modes) s += m.g2_cm2;
  return s;
}

DiscreteBath discretize_id(const Qnsd& q, const DiscretizationGrid& grid,
                           const IdDiscretizeOptions& options) {
  grid.validate();
  const std::vector<double> ts = grid.times();
  std::vector<double> ws = grid.frequencies();
  const int m = grid.time_points;
  const int n = grid.freq_points;
  const double kappa = constants::phase_per_cm1_fs;

  // A singular origin cannot be sampled; nudge an exact-zero column by half a
  // grid step. The integrable singularity is recovered through the NNLS stage,
  // which fits against the quadrature reference.
  std::vector<std::string> warnings;
  if (q.singular_at_zero()) {
    const double step = grid.freq_step();
    for (double& w : ws) {
      if (std::abs(w) <= 1e-9 * step) {
        w = 0.5 * step;
        warnings.push_back("omega = 0 grid column nudged to half a grid step");
      }
    }
  }

  Eigen::VectorXd sbeta(n);
  for (int j = 0; j < n; ++j) sbeta[j] = q.value(ws[j]);

  Eigen::MatrixXd A(2 * m, n);
  parallel_for(n, options.threads, [&](int j) {
    for (int i = 0; i < m; ++i) {
      const double phase = kappa * ws[j] * ts[i];
      A(i, j) = sbeta[j] * std::cos(phase);
      A(m + i, j) = -sbeta[j] * std::sin(phase);
    }
  });

  IdFactorization id = id_decompose(A, options.mode);
  if (id.tolerance_unreachable)
    warnings.push_back("requested ID tolerance required the full rank of the sampled matrix");

  const BcfSeries ref = bcf_reference(q, grid.omega_min_cm1, grid.omega_max_cm1, ts,
                                      options.oracle_rel_tol, options.threads);
  Eigen::VectorXd c(2 * m);
  for (int i = 0; i < m; ++i) {
    c[i] = ref.values[i].real();
    c[m + i] = ref.values[i].imag();
  }

  const auto r = static_cast<Eigen::Index>(id.selected_columns.size());
  Eigen::MatrixXd B(2 * m, r);
  for (Eigen::Index k = 0; k < r; ++k) B.col(k) = A.col(id.selected_columns[k]);

  // Seed coefficients z = P w from the initial quadrature rule; recorded as a
  // diagnostic, then superseded by the NNLS solve.
  Eigen::VectorXd w_rule(n);
  const double dw = grid.freq_step();
  for (int j = 0; j < n; ++j)
    w_rule[j] = (j == 0 || j == n - 1) ? 0.5 * dw : dw;
  const Eigen::VectorXd z_seed = id.interpolation * w_rule;
  const double seed_residual = (c - B * z_seed).norm() / c.norm();

  const NnlsResult fit = nnls(B, c);

  DiscreteBath bath;
  bath.temperature_K = q.temperature_K();
  bath.method = "id";
  for (Eigen::Index k = 0; k < r; ++k) {
    const double z = fit.solution[k];
    if (z <= 0.0) continue;
    const double omega = ws[id.selected_columns[k]];
    Mode mode;
    mode.omega_cm1 = omega;
    mode.g2_cm2 = z * sbeta[id.selected_columns[k]];
    mode.g_cm1 = std::sqrt(mode.g2_cm2);
    bath.modes.push_back(mode);
  }
  if (bath.modes.empty())
    throw std::runtime_error("discretize_id: degenerate fit, all NNLS weights vanished");
  finalize(bath);

  bath.provenance.mode_descriptor = format_mode(options.mode);
  bath.provenance.grid = grid;
  bath.provenance.id_seed_residual = seed_residual;
  bath.provenance.warnings = std::move(warnings);
  for (Eigen::Index k = 0; k < r; ++k)
    bath.provenance.pivot_order_omega_cm1.push_back(ws[id.selected_columns[k]]);

  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::complex<double> model = bath_bcf_at(bath, ts[i]);
    worst = std::max(worst, std::abs(model - ref.values[i]) / ref.normalization);
  }
  bath.provenance.achieved_max_bcf_error = worst;
  return bath;
}

std::vector<std::pair<double, double>> ld_bins(double omega_max_cm1, int M, double lambda_ratio) {
  if (M < 2 || M % 2 != 0) throw std::invalid_argument("discretize_ld: M must be even and >= 2");
  if (!(lambda_ratio > 1.0)) throw std::invalid_argument("discretize_ld: Lambda must exceed 1");
  if (!(omega_max_cm1 > 0.0)) throw std::invalid_argument("discretize_ld: Omega must be positive");
  const int half = M / 2;
  std::vector<std::pair<double, double>> bins;
  // Ascending: negative bins outermost-first, then positive innermost-first.
  // The k = half bins are extended to touch 0 so the union covers
  // [-Omega, Omega] \ {0}.
  for (int k = 1; k <= half; ++k) {
    const double outer = omega_max_cm1 * std::pow(lambda_ratio, -(k - 1));
    const double inner = k == half ? 0.0 : omega_max_cm1 * std::pow(lambda_ratio, -k);
    bins.emplace_back(-outer, -inner);
  }
  for (int k = half; k >= 1; --k) {
    const double outer = omega_max_cm1 * std::pow(lambda_ratio, -(k - 1));
    const double inner = k == half ? 0.0 : omega_max_cm1 * std::pow(lambda_ratio, -k);
    bins.emplace_back(inner, outer);
  }
  return bins;
}

DiscreteBath discretize_ld(const Qnsd& q, double omega_max_cm1, int M, double lambda_ratio) {
  DiscreteBath bath;
  bath.temperature_K = q.temperature_K();
  bath.method = "ld";
  bath.provenance.mode_descriptor =
      "M=" + std::to_string(M) + ",Lambda=" + std::to_string(lambda_ratio);
  QuadratureOptions opts;
  opts.rel_tol = 1e-11;
  for (const auto& [lo, hi] : ld_bins(omega_max_cm1, M, lambda_ratio)) {
    const double mass = qnsd_weighted_integral(q, lo, hi, [](double) { return 1.0; }, opts);
    if (!(mass > 0.0)) {
      std::ostringstream ss;
      ss << "empty bin [" << lo << ", " << hi << "] dropped";
      bath.provenance.warnings.push_back(ss.str());
      continue;
    }
    const double first = qnsd_weighted_integral(q, lo, hi, [](double w) { return w; }, opts);
    Mode mode;
    mode.omega_cm1 = first / mass;
    mode.g2_cm2 = mass;
    mode.g_cm1 = std::sqrt(mass);
    bath.modes.push_back(mode);
  }
  finalize(bath);
  return bath;
}

namespace {

// Mode-density integrals: rho(w) ~ J(w)/w is integrable on [0, inf) for the
// supported spectral densities; sub-Ohmic power laws are singular at 0.
struct ModeDensity {
  const Qnsd& q;
  double upper;        // effective support cutoff
  bool singular_at_zero;

  double density(double w) const { return w > 0.0 ? q.sd(w) / w : 0.0; }

  double integral(double a, double b, double rel_tol) const {
    if (!(a < b)) return 0.0;
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    auto f = [this](double w) { return density(w); };
    if (a == 0.0 && singular_at_zero) {
      const double split = std::min(b, 1e-2 * upper);
      double head = integrate_tanh_sinh(f, 0.0, split, rel_tol);
      if (split >= b) return head;
      return head + integrate_gk_adaptive(f, {split, b}, opts);
    }
    return integrate_gk_adaptive(f, {a, b}, opts);
  }
};

} // namespace

DiscreteBath discretize_mdm(const Qnsd& q, int M) {
  if (M < 2 || M % 2 != 0) throw std::invalid_argument("discretize_mdm: M must be even and >= 2");
  const int half = M / 2;

  // Effective support of J: the exponential tail is negligible past 60 w_c
  // for the power law; a rational surrogate is integrated over its fitted
  // range (the last AAA support point).
  double upper = 0.0;
  bool singular = false;
  if (const auto* p = q.spectral_density().power_law_params()) {
    upper = 60.0 * p->omega_c_cm1;
    singular = p->exponent_s < 1.0;
  } else {
    const auto* interp = q.spectral_density().interpolant();
    upper = *std::max_element(interp->support_points().begin(), interp->support_points().end());
  }
  ModeDensity md{q, upper, singular};

  const double total = md.integral(0.0, upper, 1e-12);
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::runtime_error("discretize_mdm: reorganization integral is not finite");
  const double gamma = total / half;

  // Cumulative breakpoints for bracketing the equal-mass targets.
  const int segments = 512;
  std::vector<double> edge(segments + 1), cum(segments + 1, 0.0);
  for (int i = 0; i <= segments; ++i)
    edge[i] = upper * std::pow(2.0, -0.05 * (segments - i));
  edge[0] = 0.0;
  for (int i = 1; i <= segments; ++i)
    cum[i] = cum[i - 1] + md.integral(edge[i - 1], edge[i], 1e-12);

  DiscreteBath bath;
  bath.temperature_K = q.temperature_K();
  bath.method = "mdm";
  bath.provenance.mode_descriptor = "M=" + std::to_string(M);

  std::vector<double> positive;
  for (int k = 1; k <= half; ++k) {
    const double target = (k - 0.5) * gamma;
    int seg = 0;
    while (seg < segments && cum[seg + 1] < target) ++seg;
    if (seg >= segments)
      throw std::runtime_error("discretize_mdm: equal-weight target outside tabulated range");
    auto f = [&](double x) { return cum[seg] + md.integral(edge[seg], x, 1e-12) - target; };
    boost::math::tools::eps_tolerance<double> tol(45);
    std::uintmax_t iters = 200;
    auto bracket = boost::math::tools::toms748_solve(f, edge[seg], edge[seg + 1],
                                                     cum[seg] - target, cum[seg + 1] - target,
                                                     tol, iters);
    positive.push_back(0.5 * (bracket.first + bracket.second));
  }

  for (int k = 0; k < half; ++k) {
    const double wk = positive[k];
    const double rho = md.density(wk) / gamma;
    for (const double sign : {+1.0, -1.0}) {
      const double omega = sign * wk;
      const double s = q.value(omega);
      if (!(s > 0.0)) {
        bath.provenance.warnings.push_back("zero-weight mode at omega = " + std::to_string(omega) +
                                           " dropped");
        continue;
      }
      Mode mode;
      mode.omega_cm1 = omega;
      mode.g2_cm2 = s / rho;
      mode.g_cm1 = std::sqrt(mode.g2_cm2);
      bath.modes.push_back(mode);
    }
  }
  if (bath.modes.empty()) throw std::runtime_error("discretize_mdm: all modes empty");
  finalize(bath);
  return bath;
}

DiscreteBath discretize_bsdo(const Qnsd& q, double omega_min_cm1, double omega_max_cm1, int M) {
  if (M < 1) throw std::invalid_argument("discretize_bsdo: M must be >= 1");
  if (q.singular_at_zero() && (omega_min_cm1 == 0.0 || omega_max_cm1 == 0.0))
    throw std::invalid_argument(
        "discretize_bsdo: the quadrature weight is unbounded at omega = 0; move the interval "
        "endpoint away from 0 (e.g. omega_min > 0)");
  const JacobiMatrix jm = stieltjes_jacobi(q, omega_min_cm1, omega_max_cm1, M);
  const GaussRule rule = golub_welsch(jm);

  DiscreteBath bath;
  bath.temperature_K = q.temperature_K();
  bath.method = "bsdo";
  {
    std::ostringstream ss;
    ss << "M=" << M << ",interval=[" << omega_min_cm1 << "," << omega_max_cm1 << "]";
    bath.provenance.mode_descriptor = ss.str();
  }
  if (!jm.stabilized)
    bath.provenance.warnings.push_back(
        "recurrence coefficients did not stabilize under grid doubling (singular weight?)");
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    if (!(rule.weights[k] > 0.0)) {
      bath.provenance.warnings.push_back("zero Christoffel weight at node " +
                                         std::to_string(rule.nodes[k]) + " dropped");
      continue;
    }
    Mode mode;
    mode.omega_cm1 = rule.nodes[k];
    mode.g2_cm2 = rule.weights[k];
    mode.g_cm1 = std::sqrt(mode.g2_cm2);
    bath.modes.push_back(mode);
  }
  finalize(bath);
  return bath;
}

ChainCoefficients chain_map(const Qnsd& q, double omega_min_cm1, double omega_max_cm1, int M) {
  if (M < 1) throw std::invalid_argument("chain_map: M must be >= 1");
  if (q.singular_at_zero() && (omega_min_cm1 == 0.0 || omega_max_cm1 == 0.0))
    throw std::invalid_argument(
        "chain_map: the quadrature weight is unbounded at omega = 0; move the interval endpoint "
        "away from 0");
  const JacobiMatrix jm = stieltjes_jacobi(q, omega_min_cm1, omega_max_cm1, M);
  ChainCoefficients chain;
  chain.total_weight_cm2 = jm.total_weight;
  chain.system_coupling_cm1 = std::sqrt(jm.total_weight);
  chain.site_energy_cm1.assign(jm.alpha.data(), jm.alpha.data() + jm.alpha.size());
  chain.hopping_cm1.resize(static_cast<std::size_t>(jm.eta.size()));
  for (Eigen::Index k = 0; k < jm.eta.size(); ++k)
    chain.hopping_cm1[static_cast<std::size_t>(k)] = std::sqrt(jm.eta[k]);
  return chain;
}

} // namespace bathdisc
