#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "bathdisc/sd_table.hpp"
#include "bathdisc/spectral_density.hpp"

using namespace bathdisc;

namespace {

SdTable sample_function(double lo, double hi, int n, const std::function<double(double)>& f) {
  SdTable t;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    t.omega_cm1.push_back(x);
    t.j_cm1.push_back(f(x));
  }
  return t;
}

// Sign changes of the barycentric denominator between adjacent support
// points betray a real pole in the gap.
bool denominator_changes_sign_in_gaps(const RationalInterpolant& r) {
  auto zs = r.support_points();
  std::vector<std::size_t> order(zs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return zs[a] < zs[b]; });
  auto den = [&](double x) {
    double d = 0.0;
    for (std::size_t j = 0; j < zs.size(); ++j) d += r.weights()[j] / (x - zs[j]);
    return d;
  };
  for (std::size_t g = 0; g + 1 < order.size(); ++g) {
    const double a = zs[order[g]], b = zs[order[g + 1]];
    double prev = 0.0;
    bool have_prev = false;
    for (int i = 1; i < 50; ++i) {
      const double x = a + (b - a) * i / 50.0;
      const double d = den(x);
      if (have_prev && d * prev < 0.0) return true;
      prev = d;
      have_prev = true;
    }
  }
  return false;
}

} // namespace

TEST_CASE("table loading parses comments, commas and whitespace") {
  std::istringstream in(
      "# spectral density\n"
      "0.0, 0.0\n"
      "1.0  0.5 # inline comment\n"
      "2.0\t1.0\n"
      "3.0, 1.5\n"
      "4.0 2.0\n"
      "5.0 2.5\n"
      "6.0 3.0\n"
      "\n"
      "7.0 3.5\n");
  const SdTable t = load_sd_table(in);
  CHECK(t.size() == 8);
  CHECK(t.omega_cm1[3] == 3.0);
  CHECK(t.j_cm1[6] == 3.0);
}

TEST_CASE("table validation") {
  std::istringstream too_few("0 1\n1 1\n2 1\n3 1\n4 1\n5 1\n6 1\n");
  CHECK_THROWS(load_sd_table(too_few));
  std::istringstream not_increasing("0 1\n1 1\n1 1\n3 1\n4 1\n5 1\n6 1\n7 1\n");
  CHECK_THROWS(load_sd_table(not_increasing));
  std::istringstream one_column("0 1\n1\n2 1\n3 1\n4 1\n5 1\n6 1\n7 1\n");
  CHECK_THROWS(load_sd_table(one_column));
}

TEST_CASE("zero smoothing reproduces the input") {
  const SdTable t = sample_function(0.0, 10.0, 32, [](double x) { return std::sin(x) + 2.0; });
  const SdTable s = smooth_table(t, 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(s.j_cm1[i] == t.j_cm1[i]);
}

TEST_CASE("constants are fixed points of the smoother") {
  const SdTable t = sample_function(0.0, 5.0, 16, [](double) { return 3.25; });
  for (double lambda : {1e-6, 1.0, 1e6}) {
    const SdTable s = smooth_table(t, lambda);
    for (double v : s.j_cm1) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
  }
}

TEST_CASE("cross-validated smoothing beats the raw noise") {
  std::mt19937 rng(2718u);
  std::normal_distribution<double> noise(0.0, 0.1);
  const int n = 64;
  SdTable noisy;
  std::vector<double> clean(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * std::numbers::pi * i / (n - 1);
    clean[i] = std::sin(x);
    noisy.omega_cm1.push_back(x);
    noisy.j_cm1.push_back(clean[i] + noise(rng));
  }
  double lambda = 0.0;
  const SdTable smoothed = smooth_table_gcv(noisy, &lambda);
  CHECK(lambda > 0.0);
  double raw_dev = 0.0, smooth_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    raw_dev = std::max(raw_dev, std::abs(noisy.j_cm1[i] - clean[i]));
    smooth_dev = std::max(smooth_dev, std::abs(smoothed.j_cm1[i] - clean[i]));
  }
  CHECK(smooth_dev < raw_dev);
}

TEST_CASE("aaa reproduces a rational function at machine precision") {
  const SdTable t = sample_function(0.0, 5.0, 40, [](double x) { return 1.0 / (1.0 + x); });
  const RationalInterpolant r = aaa_fit(t.omega_cm1, t.j_cm1, 1e-12, 10);
  CHECK(r.support_points().size() <= 3);
  for (double x : {0.05, 0.777, 2.3, 4.9})
    CHECK(r(x) == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-11));
}

TEST_CASE("aaa on a constant table returns a single exact support point") {
  const SdTable t = sample_function(0.0, 1.0, 16, [](double) { return 4.5; });
  const RationalInterpolant r = aaa_fit(t.omega_cm1, t.j_cm1, 1e-12, 10);
  CHECK(r.support_points().size() == 1);
  CHECK(r(0.5) == 4.5);
  CHECK(r(r.support_points()[0]) == 4.5);
}

TEST_CASE("aaa fit of the Ohmic density meets the verification tolerance") {
  const auto sd = SpectralDensity::power_law(1.0, 5.0, 53.0);
  const SdTable t = sample_function(0.0, 500.0, 1001, [&](double x) { return sd(x); });
  const RationalInterpolant r = aaa_fit(t.omega_cm1, t.j_cm1, 1e-6, 100);

  double jmax = 0.0;
  for (double v : t.j_cm1) jmax = std::max(jmax, v);
  // 10x finer verification grid.
  double worst = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = 500.0 * i / 10000.0;
    worst = std::max(worst, std::abs(r(x) - sd(x)) / jmax);
  }
  CHECK(worst <= 1e-6);

  // Support points evaluate exactly.
  for (std::size_t j = 0; j < r.support_points().size(); ++j)
    CHECK(r(r.support_points()[j]) == r.support_values()[j]);

  // The fitted peak value agrees with the analytic model.
  CHECK(std::abs(r(53.0) - sd(53.0)) <= 3e-4);

  // No poles inside the fitted range.
  CHECK(r.real_poles_in(0.0, 500.0).empty());
  CHECK(!denominator_changes_sign_in_gaps(r));
}

TEST_CASE("aaa error is monotonically nonincreasing in max_degree") {
  const auto sd = SpectralDensity::power_law(0.5, 2.0, 40.0);
  const SdTable t = sample_function(0.0, 300.0, 301, [&](double x) { return sd(x); });
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t degree : {2, 3, 4, 6, 8, 12}) {
    double achieved = 0.0;
    try {
      const RationalInterpolant r = aaa_fit(t.omega_cm1, t.j_cm1, 1e-15, degree);
      double jmax = 0.0;
      for (double v : t.j_cm1) jmax = std::max(jmax, v);
      for (std::size_t i = 0; i < t.size(); ++i)
        achieved = std::max(achieved, std::abs(r(t.omega_cm1[i]) - t.j_cm1[i]) / jmax);
    } catch (const AaaNotConverged& e) {
      achieved = e.achieved_error;
    }
    CHECK(achieved <= prev * (1.0 + 1e-12) + 1e-15);
    prev = achieved;
  }
}

TEST_CASE("aaa failure carries the best fit") {
  const SdTable t = sample_function(0.0, 10.0, 64, [](double x) { return std::exp(-x * x); });
  try {
    aaa_fit(t.omega_cm1, t.j_cm1, 1e-14, 2);
    FAIL("expected AaaNotConverged");
  } catch (const AaaNotConverged& e) {
    CHECK(e.achieved_error > 1e-14);
    CHECK(e.best_fit.support_points().size() >= 1);
  }
}

TEST_CASE("structured five-peak table fits cleanly through the pipeline") {
  // Lorentzian-like peaks of varied width over [0, 4000].
  auto structured = [](double w) {
    const double mu[5] = {90.0, 450.0, 1100.0, 1500.0, 3100.0};
    const double gamma[5] = {60.0, 120.0, 90.0, 70.0, 160.0};
    const double amp[5] = {40.0, 70.0, 55.0, 90.0, 35.0};
    double j = 0.0;
    for (int p = 0; p < 5; ++p)
      j += amp[p] * w / mu[p] * gamma[p] * gamma[p] /
           ((w - mu[p]) * (w - mu[p]) + gamma[p] * gamma[p]);
    return j;
  };
  SdTable t = sample_function(0.0, 4000.0, 1601, structured);
  std::mt19937 rng(11u);
  std::normal_distribution<double> noise(0.0, 0.4);
  for (auto& v : t.j_cm1) v = std::max(0.0, v + noise(rng));

  // Residual noise after smoothing floors the attainable fit error; the
  // tolerance must sit above it.
  const SdTable smoothed = smooth_table_gcv(t);
  const RationalInterpolant r = fit_sd_table(smoothed, 2.5e-2, 120);
  CHECK(r.real_poles_in(0.0, 4000.0).empty());
  CHECK(!denominator_changes_sign_in_gaps(r));
  // Surrogate stays close to the clean generator despite the noise.
  double jmax = 0.0;
  for (double v : t.j_cm1) jmax = std::max(jmax, v);
  double worst = 0.0;
  for (int i = 0; i <= 8000; ++i) {
    const double x = 4000.0 * i / 8000.0;
    worst = std::max(worst, std::abs(r(x) - structured(x)) / jmax);
  }
  CHECK(worst < 0.05);
}
