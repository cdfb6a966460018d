#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "bathdisc/bcf.hpp"
#include "bathdisc/discretize.hpp"
#include "bathdisc/quadrature.hpp"
#include "bathdisc/sd_table.hpp"
#include "bathdisc/units.hpp"

using namespace bathdisc;

namespace {

Qnsd ohmic300() { return Qnsd(SpectralDensity::power_law(1.0, 5.0, 53.0), 300.0); }

// Constant J = pi * c on the positive axis via an exact one-point rational;
// at T = 0 the QNSD is the constant c for omega > 0.
Qnsd flat_qnsd(double c) {
  auto interp = std::make_shared<RationalInterpolant>(
      RationalInterpolant({1.0}, {std::numbers::pi * c}, {1.0}));
  return Qnsd(SpectralDensity::tabulated(interp, 0.0), 0.0);
}

} // namespace

TEST_CASE("ld bins partition the interval") {
  const double omega = 500.0;
  const double lam = 1.1;
  const auto bins = ld_bins(omega, 20, lam);
  REQUIRE(bins.size() == 20);
  // Negative bins first (ascending), then positive ones.
  CHECK(bins.front().first == -omega);
  CHECK(bins[9].second == 0.0);
  CHECK(bins[10].first == 0.0);
  CHECK(bins.back().second == omega);
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    CHECK(bins[i].first < bins[i].second);
    if (i != 9) CHECK(bins[i].second == bins[i + 1].first); // contiguous
  }
  // Log spacing with ratio Lambda on the outer edges.
  CHECK(bins[19].first == doctest::Approx(omega / lam).epsilon(1e-14));
  CHECK(bins[18].first == doctest::Approx(omega / (lam * lam)).epsilon(1e-14));
  CHECK_THROWS_AS(ld_bins(omega, 7, lam), std::invalid_argument);
  CHECK_THROWS_AS(ld_bins(omega, 8, 0.9), std::invalid_argument);
}

TEST_CASE("ld centroids sit at bin midpoints for a flat qnsd") {
  const Qnsd q = flat_qnsd(2.0);
  const DiscreteBath bath = discretize_ld(q, 400.0, 8, 1.5);
  // T = 0: the negative bins are empty and dropped with a warning.
  CHECK(bath.modes.size() == 4);
  CHECK(bath.provenance.warnings.size() == 4);
  const auto bins = ld_bins(400.0, 8, 1.5);
  for (const Mode& m : bath.modes) {
    bool matched = false;
    for (const auto& [lo, hi] : bins) {
      if (lo >= 0.0 && m.omega_cm1 > lo && m.omega_cm1 < hi) {
        CHECK(m.omega_cm1 == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
        CHECK(m.g2_cm2 == doctest::Approx(2.0 * (hi - lo)).epsilon(1e-9));
        matched = true;
      }
    }
    CHECK(matched);
  }
}

TEST_CASE("ld total weight matches the qnsd mass") {
  const Qnsd q = ohmic300();
  const DiscreteBath bath = discretize_ld(q, 500.0, 20, 1.1);
  const double mass = qnsd_weighted_integral(q, -500.0, 500.0, [](double) { return 1.0; });
  CHECK(bath.sum_g2() == doctest::Approx(mass).epsilon(1e-8));
  CHECK(bath.modes.size() == 20);
}

TEST_CASE("mdm nodes follow the Ohmic closed form") {
  const Qnsd q = ohmic300();
  const int M = 20;
  const DiscreteBath bath = discretize_mdm(q, M);
  REQUIRE(bath.modes.size() == M);

  std::vector<double> positive;
  for (const Mode& m : bath.modes)
    if (m.omega_cm1 > 0.0) positive.push_back(m.omega_cm1);
  std::sort(positive.begin(), positive.end());
  REQUIRE(positive.size() == M / 2);
  for (int k = 1; k <= M / 2; ++k) {
    const double expected = -53.0 * std::log(1.0 - (k - 0.5) / (M / 2.0));
    CHECK(positive[k - 1] == doctest::Approx(expected).epsilon(1e-7));
  }
  // Mirror symmetry of the node set.
  for (const Mode& m : bath.modes) {
    bool has_mirror = false;
    for (const Mode& o : bath.modes)
      if (o.omega_cm1 == doctest::Approx(-m.omega_cm1).epsilon(1e-12)) has_mirror = true;
    CHECK(has_mirror);
  }
}

TEST_CASE("mdm equal-weight condition holds at every positive node") {
  const Qnsd q = Qnsd(SpectralDensity::power_law(0.25, 5.0, 53.0), 50.0);
  const int M = 12;
  const DiscreteBath bath = discretize_mdm(q, M);
  // Independent cumulative of J/w, double-exponential near the singular origin.
  auto density = [&q](double w) { return q.sd(w) / w; };
  const double upper = 60.0 * 53.0;
  const double head = integrate_tanh_sinh(density, 0.0, 1.0, 1e-13);
  const double total = head + integrate_gk_adaptive(density, {1.0, upper}, {1e-13, 200000, {}});
  const double gamma = total / (M / 2);
  int k = 0;
  for (const Mode& m : bath.modes) {
    if (m.omega_cm1 <= 0.0) continue;
    ++k;
  }
  CHECK(k == M / 2);
  std::vector<double> nodes;
  for (const Mode& m : bath.modes)
    if (m.omega_cm1 > 0.0) nodes.push_back(m.omega_cm1);
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double cum = head > 0 && nodes[i] > 1.0
                           ? head + integrate_gk_adaptive(density, {1.0, nodes[i]}, {1e-13, 200000, {}})
                           : integrate_tanh_sinh(density, 0.0, nodes[i], 1e-13);
    const double target = (static_cast<double>(i) + 0.5);
    CHECK(std::abs(cum / gamma - target) <= 1e-10 * (M / 2));
  }
}

TEST_CASE("bsdo weights sum to the total weight and nodes interlace") {
  const Qnsd q = ohmic300();
  const DiscreteBath b20 = discretize_bsdo(q, -250.0, 250.0, 20);
  CHECK(b20.modes.size() == 20);
  const auto jm = stieltjes_jacobi(q, -250.0, 250.0, 20);
  CHECK(b20.sum_g2() == doctest::Approx(jm.total_weight).epsilon(1e-10));
  const DiscreteBath b21 = discretize_bsdo(q, -250.0, 250.0, 21);
  for (std::size_t k = 0; k + 1 < b20.modes.size(); ++k) {
    CHECK(b21.modes[k].omega_cm1 < b20.modes[k].omega_cm1);
    CHECK(b20.modes[k].omega_cm1 < b21.modes[k + 1].omega_cm1);
  }
  for (const Mode& m : b20.modes) {
    CHECK(m.omega_cm1 >= -250.0);
    CHECK(m.omega_cm1 <= 250.0);
    CHECK(m.g2_cm2 > 0.0);
  }
}

TEST_CASE("bsdo refuses a singular endpoint") {
  const Qnsd q(SpectralDensity::power_law(0.25, 5.0, 53.0), 50.0);
  CHECK_THROWS_WITH_AS(discretize_bsdo(q, 0.0, 200.0, 10), doctest::Contains("unbounded at omega = 0"),
                       std::invalid_argument);
  // Interior zero is allowed.
  CHECK_NOTHROW(discretize_bsdo(q, -200.0, 200.0, 10));
}

TEST_CASE("chain coefficients agree with the quadrature bath") {
  const Qnsd q = ohmic300();
  const int M = 8;
  const ChainCoefficients chain = chain_map(q, -250.0, 250.0, M);
  REQUIRE(chain.site_energy_cm1.size() == M);
  REQUIRE(chain.hopping_cm1.size() == M - 1);
  CHECK(chain.system_coupling_cm1 == doctest::Approx(std::sqrt(chain.total_weight_cm2)));
  for (double h : chain.hopping_cm1) CHECK(h > 0.0);

  // The assembled tridiagonal reproduces the quadrature nodes.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(M, M);
  for (int k = 0; k < M; ++k) T(k, k) = chain.site_energy_cm1[k];
  for (int k = 0; k + 1 < M; ++k) {
    T(k, k + 1) = chain.hopping_cm1[k];
    T(k + 1, k) = chain.hopping_cm1[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const DiscreteBath bath = discretize_bsdo(q, -250.0, 250.0, M);
  for (int k = 0; k < M; ++k)
    CHECK(es.eigenvalues()[k] ==
          doctest::Approx(bath.modes[k].omega_cm1).epsilon(1e-12).scale(250.0));

  // Single site: energy alpha_0, coupling sqrt(total weight).
  const ChainCoefficients single = chain_map(q, -250.0, 250.0, 1);
  CHECK(single.site_energy_cm1.size() == 1);
  CHECK(single.hopping_cm1.empty());
  const DiscreteBath one = discretize_bsdo(q, -250.0, 250.0, 1);
  CHECK(single.site_energy_cm1[0] == doctest::Approx(one.modes[0].omega_cm1).epsilon(1e-12));
  CHECK(single.system_coupling_cm1 ==
        doctest::Approx(std::sqrt(one.modes[0].g2_cm2)).epsilon(1e-12));
}

TEST_CASE("three-site chain for the uniform weight carries Legendre hoppings") {
  const auto jm = stieltjes_jacobi([](double) { return 1.0; }, -1.0, 1.0, 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(jm.alpha[k]) <= 1e-13);
  CHECK(std::sqrt(jm.eta[0]) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  CHECK(std::sqrt(jm.eta[1]) == doctest::Approx(std::sqrt(4.0 / 15.0)).epsilon(1e-12));
  CHECK(std::sqrt(jm.total_weight) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("id pipeline on a small Ohmic grid") {
  const Qnsd q = ohmic300();
  DiscretizationGrid grid;
  grid.cutoff_time_fs = 500.0;
  grid.omega_min_cm1 = -500.0;
  grid.omega_max_cm1 = 500.0;
  grid.time_points = 120;
  grid.freq_points = 480;
  IdDiscretizeOptions opts;
  opts.mode.mode = IdOptions::Mode::Rank;
  opts.mode.rank = 14;

  const DiscreteBath bath = discretize_id(q, grid, opts);
  CHECK(bath.method == "id");
  CHECK(bath.modes.size() <= 14);
  CHECK(bath.modes.size() >= 5);
  REQUIRE(bath.provenance.achieved_max_bcf_error.has_value());
  CHECK(*bath.provenance.achieved_max_bcf_error < 5e-2);
  CHECK(bath.provenance.pivot_order_omega_cm1.size() == 14);
  REQUIRE(bath.provenance.id_seed_residual.has_value());

  // Selected frequencies are exact members of the sampling grid.
  const auto freqs = grid.frequencies();
  std::set<double> grid_set(freqs.begin(), freqs.end());
  for (const Mode& m : bath.modes) CHECK(grid_set.count(m.omega_cm1) == 1);

  // Modes ascend and the weights are positive.
  for (std::size_t k = 0; k + 1 < bath.modes.size(); ++k)
    CHECK(bath.modes[k].omega_cm1 < bath.modes[k + 1].omega_cm1);
  for (const Mode& m : bath.modes) {
    CHECK(m.g2_cm2 > 0.0);
    CHECK(m.g_cm1 == doctest::Approx(std::sqrt(m.g2_cm2)));
  }

  // Sum rule: model C(0) within the achieved error of the reference C(0).
  const auto ref = bcf_reference(q, -500.0, 500.0, {0.0, 1.0}, 1e-10);
  CHECK(std::abs(bath.sum_g2() - ref.values[0].real()) / ref.normalization <=
        *bath.provenance.achieved_max_bcf_error * 1.0000001);
}

TEST_CASE("id output is invariant under threading") {
  const Qnsd q = ohmic300();
  DiscretizationGrid grid;
  grid.cutoff_time_fs = 300.0;
  grid.omega_min_cm1 = -400.0;
  grid.omega_max_cm1 = 400.0;
  grid.time_points = 60;
  grid.freq_points = 240;
  IdDiscretizeOptions one, many;
  one.mode.mode = many.mode.mode = IdOptions::Mode::Rank;
  one.mode.rank = many.mode.rank = 10;
  one.threads = 1;
  many.threads = 4;
  const DiscreteBath a = discretize_id(q, grid, one);
  const DiscreteBath b = discretize_id(q, grid, many);
  REQUIRE(a.modes.size() == b.modes.size());
  for (std::size_t k = 0; k < a.modes.size(); ++k) {
    CHECK(a.modes[k].omega_cm1 == b.modes[k].omega_cm1);
    CHECK(a.modes[k].g2_cm2 == b.modes[k].g2_cm2);
  }
}

TEST_CASE("id at zero temperature on a positive window keeps frequencies nonnegative") {
  const Qnsd q(SpectralDensity::power_law(1.0, 5.0, 53.0), 0.0);
  DiscretizationGrid grid;
  grid.cutoff_time_fs = 300.0;
  grid.omega_min_cm1 = 0.0;
  grid.omega_max_cm1 = 600.0;
  grid.time_points = 80;
  grid.freq_points = 300;
  IdDiscretizeOptions opts;
  opts.mode.mode = IdOptions::Mode::Rank;
  opts.mode.rank = 10;
  const DiscreteBath bath = discretize_id(q, grid, opts);
  for (const Mode& m : bath.modes) CHECK(m.omega_cm1 >= 0.0);
  CHECK(*bath.provenance.achieved_max_bcf_error < 5e-2);
}

TEST_CASE("id resolves a single narrow line to one mode") {
  // Narrow Gaussian at 200.02 cm^-1 (width well under the 1 cm^-1 grid
  // spacing), tabulated densely around the peak.
  const double mu = 200.02, sigma = 0.15, amp = 25.0;
  auto gaussian = [&](double w) {
    return amp * std::exp(-0.5 * (w - mu) * (w - mu) / (sigma * sigma));
  };
  SdTable t;
  for (int i = 0; i <= 400; ++i) { // dense core +-10 sigma
    const double x = mu - 10.0 * sigma + 20.0 * sigma * i / 400.0;
    t.omega_cm1.push_back(x);
    t.j_cm1.push_back(std::numbers::pi * gaussian(x));
  }
  for (double x = 0.0; x < mu - 2.0; x += 4.0) {
    t.omega_cm1.push_back(x);
    t.j_cm1.push_back(std::numbers::pi * gaussian(x));
  }
  for (double x = mu + 2.5; x <= 500.0; x += 4.0) {
    t.omega_cm1.push_back(x);
    t.j_cm1.push_back(std::numbers::pi * gaussian(x));
  }
  std::sort(t.omega_cm1.begin(), t.omega_cm1.end());
  std::vector<double> js;
  for (double x : t.omega_cm1) js.push_back(std::numbers::pi * gaussian(x));
  t.j_cm1 = js;

  auto interp = std::make_shared<RationalInterpolant>(fit_sd_table(t, 1e-10, 80));
  const Qnsd q(SpectralDensity::tabulated(interp, 0.0), 0.0);

  DiscretizationGrid grid;
  grid.cutoff_time_fs = 1000.0;
  grid.omega_min_cm1 = 0.0;
  grid.omega_max_cm1 = 500.0;
  grid.time_points = 200;
  grid.freq_points = 501; // grid step exactly 1 cm^-1
  IdDiscretizeOptions opts;
  opts.mode.mode = IdOptions::Mode::Tolerance;
  opts.mode.tolerance = 1e-6;

  const DiscreteBath bath = discretize_id(q, grid, opts);
  REQUIRE(bath.modes.size() == 1);
  CHECK(bath.modes[0].omega_cm1 == 200.0); // nearest grid frequency
  const double mass = qnsd_weighted_integral(q, 0.0, 500.0, [](double) { return 1.0; });
  CHECK(bath.modes[0].g2_cm2 == doctest::Approx(mass).epsilon(0.02));
}

TEST_CASE("finite-temperature sub-ohmic id nudges the zero column") {
  const Qnsd q(SpectralDensity::power_law(0.25, 5.0, 53.0), 50.0);
  DiscretizationGrid grid;
  grid.cutoff_time_fs = 200.0;
  grid.omega_min_cm1 = -200.0;
  grid.omega_max_cm1 = 200.0;
  grid.time_points = 50;
  grid.freq_points = 201; // odd: the grid hits omega = 0 exactly
  IdDiscretizeOptions opts;
  opts.mode.mode = IdOptions::Mode::Rank;
  opts.mode.rank = 12;
  const DiscreteBath bath = discretize_id(q, grid, opts);
  REQUIRE(!bath.provenance.warnings.empty());
  CHECK(bath.provenance.warnings[0].find("nudged") != std::string::npos);
  for (const Mode& m : bath.modes) CHECK(m.omega_cm1 != 0.0);
  CHECK(*bath.provenance.achieved_max_bcf_error < 0.1);
}
