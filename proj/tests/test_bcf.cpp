#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bathdisc/bcf.hpp"
#include "bathdisc/quadrature.hpp"
#include "bathdisc/units.hpp"

using namespace bathdisc;
using cplx = std::complex<double>;

namespace {

Qnsd power_law_bath(double T, double s) {
  return Qnsd(SpectralDensity::power_law(s, 5.0, 53.0), T);
}

// Exact zero-temperature BCF of the power-law density:
// C(t) = alpha * wc^2 * Gamma(s+1) / (1 + i kappa wc t)^{s+1}.
cplx zero_t_closed_form(double s, double alpha, double wc, double t_fs) {
  const double kappa = constants::phase_per_cm1_fs;
  const cplx base(1.0, kappa * wc * t_fs);
  return alpha * wc * wc * std::tgamma(s + 1.0) / std::pow(base, s + 1.0);
}

} // namespace

TEST_CASE("C(0) is purely real and matches the qnsd mass") {
  const auto q = power_law_bath(300.0, 1.0);
  const auto series = bcf_reference(q, -500.0, 500.0, {0.0, 10.0}, 1e-10);
  CHECK(std::abs(series.values[0].imag()) <= 1e-10 * std::abs(series.values[0].real()));
  const double mass = qnsd_weighted_integral(q, -500.0, 500.0, [](double) { return 1.0; });
  CHECK(series.values[0].real() == doctest::Approx(mass).epsilon(1e-9));
  CHECK(series.normalization == doctest::Approx(std::abs(series.values[0])));
}

TEST_CASE("zero-temperature oracle matches the closed form") {
  const double tol = 1e-10;
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    CAPTURE(s);
    const auto q = power_law_bath(0.0, s);
    const auto ts = time_grid(1000.0, 51);
    const auto series = bcf_reference(q, 0.0, 40.0 * 53.0, ts, tol);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const cplx exact = zero_t_closed_form(s, 5.0, 53.0, ts[i]);
      const double rel = std::abs(series.values[i] - exact) / std::abs(exact);
      CAPTURE(ts[i]);
      CHECK(rel <= 10.0 * tol);
    }
  }
}

TEST_CASE("oracle modulus at t = 1000 fs for the Ohmic zero-temperature bath") {
  const auto q = power_law_bath(0.0, 1.0);
  const auto series = bcf_reference(q, 0.0, 2120.0, {0.0, 1000.0}, 1e-10);
  CHECK(series.values[0].real() == doctest::Approx(5.0 * 53.0 * 53.0).epsilon(1e-9));
  const double kappa_wct = constants::phase_per_cm1_fs * 53.0 * 1000.0;
  const double expected = 14045.0 / (1.0 + kappa_wct * kappa_wct);
  CHECK(std::abs(series.values[1]) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("sub-ohmic finite-temperature oracle handles the singular origin") {
  const auto q = power_law_bath(50.0, 0.25);
  REQUIRE(q.singular_at_zero());
  const auto ts = time_grid(1000.0, 5);
  const auto series = bcf_reference(q, -200.0, 200.0, ts, 1e-10);
  const double mass = qnsd_weighted_integral(q, -200.0, 200.0, [](double) { return 1.0; });
  CHECK(series.values[0].real() == doctest::Approx(mass).epsilon(1e-9));
  for (const auto& v : series.values) CHECK(std::isfinite(std::abs(v)));
}

TEST_CASE("quadrature result is split-invariant") {
  const auto q = power_law_bath(300.0, 1.0);
  const double tol = 1e-10;
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> dist(-499.0, 499.0);
  const auto ts = time_grid(1000.0, 7);
  const auto base = bcf_reference(q, -500.0, 500.0, ts, tol);
  for (int rep = 0; rep < 3; ++rep) {
    QuadratureOptions opts;
    opts.forced_split = dist(rng);
    const auto alt = bcf_reference(q, -500.0, 500.0, ts, tol, 1, opts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(std::abs(alt.values[i] - base.values[i]) <=
            10.0 * tol * std::max(std::abs(base.values[i]), 1e-3 * base.normalization));
    }
  }
}

TEST_CASE("bcf_from_modes basics") {
  SUBCASE("single zero-frequency mode is constant") {
    DiscreteBath bath;
    bath.modes.push_back({0.0, std::sqrt(2.0), 2.0});
    const auto series = bcf_from_modes(bath, time_grid(100.0, 11));
    for (const auto& v : series.values) {
      CHECK(v.real() == doctest::Approx(2.0).epsilon(1e-15));
      CHECK(v.imag() == 0.0);
    }
  }
  SUBCASE("conjugate pair gives a real cosine") {
    DiscreteBath bath;
    bath.modes.push_back({+40.0, 1.5, 2.25});
    bath.modes.push_back({-40.0, 1.5, 2.25});
    const auto ts = time_grid(500.0, 41);
    const auto series = bcf_from_modes(bath, ts);
    const double kappa = constants::phase_per_cm1_fs;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(std::abs(series.values[i].imag()) <= 1e-14 * series.normalization);
      CHECK(series.values[i].real() ==
            doctest::Approx(2.0 * 2.25 * std::cos(kappa * 40.0 * ts[i])).epsilon(1e-13));
    }
  }
}

TEST_CASE("model BCF is Hermitian in time") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> w_dist(-300.0, 300.0);
  std::uniform_real_distribution<double> g_dist(0.1, 3.0);
  DiscreteBath bath;
  for (int k = 0; k < 12; ++k) {
    const double g2 = g_dist(rng);
    bath.modes.push_back({w_dist(rng), std::sqrt(g2), g2});
  }
  for (double t : {0.0, 17.0, 123.4, 999.0}) {
    const cplx fwd = bath_bcf_at(bath, t);
    const cplx bwd = bath_bcf_at(bath, -t);
    CHECK(bwd.real() == doctest::Approx(fwd.real()).epsilon(1e-14));
    CHECK(bwd.imag() == doctest::Approx(-fwd.imag()).epsilon(1e-14));
  }
}

TEST_CASE("compare reports normalized errors") {
  DiscreteBath bath;
  bath.modes.push_back({10.0, 1.0, 1.0});
  const auto ts = time_grid(100.0, 9);
  const auto ref = bcf_from_modes(bath, ts);

  SUBCASE("identical series") {
    const auto report = compare(ref, ref, "self");
    CHECK(report.max_error == 0.0);
    CHECK(report.mean_error == 0.0);
    CHECK(report.method == "self");
  }
  SUBCASE("one-point shift by |C(0)|") {
    BcfSeries shifted = ref;
    shifted.values[4] += ref.normalization;
    const auto report = compare(shifted, ref);
    CHECK(report.max_error == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(report.mean_error == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  }
  SUBCASE("mismatched grids throw") {
    const auto other = bcf_from_modes(bath, time_grid(100.0, 8));
    CHECK_THROWS_AS(compare(other, ref), std::invalid_argument);
  }
  SUBCASE("max >= mean") {
    BcfSeries noisy = ref;
    std::mt19937 rng(3u);
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    for (auto& v : noisy.values) v += dist(rng);
    const auto report = compare(noisy, ref);
    CHECK(report.max_error >= report.mean_error);
    CHECK(report.mean_error >= 0.0);
  }
}

TEST_CASE("exhausting the panel budget names the failing time point") {
  const auto q = power_law_bath(300.0, 1.0);
  QuadratureOptions opts;
  opts.max_panels = 40; // below what the tolerance needs
  opts.min_panels = 32;
  try {
    bcf_reference(q, -500.0, 500.0, {0.0, 977.0}, 1e-13, 1, opts);
    FAIL("expected QuadratureNotConverged");
  } catch (const QuadratureNotConverged& e) {
    CHECK(std::string(e.what()).find("977") != std::string::npos);
  }
}

TEST_CASE("time grids must start at zero and ascend") {
  DiscreteBath bath;
  bath.modes.push_back({10.0, 1.0, 1.0});
  CHECK_THROWS_AS(bcf_from_modes(bath, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(bcf_from_modes(bath, std::vector<double>{0.0, 2.0, 2.0}), std::invalid_argument);
  const auto q = power_law_bath(300.0, 1.0);
  CHECK_THROWS_AS(bcf_reference(q, -500.0, 500.0, {5.0, 10.0}, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(bcf_reference(q, 500.0, -500.0, {0.0, 10.0}, 1e-8), std::invalid_argument);
}
