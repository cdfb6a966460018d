#include <benchmark/benchmark.h>

#include <random>

#include "bathdisc/bcf.hpp"
#include "bathdisc/discretize.hpp"
#include "bathdisc/id.hpp"
#include "bathdisc/nnls.hpp"
#include "bathdisc/qnsd.hpp"

namespace {

bathdisc::Qnsd ohmic300() {
  return bathdisc::Qnsd(bathdisc::SpectralDensity::power_law(1.0, 5.0, 53.0), 300.0);
}

void BM_qnsd_eval(benchmark::State& state) {
  const auto q = ohmic300();
  double w = -500.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q.value(w));
    w += 0.37;
    if (w > 500.0) w = -500.0;
  }
}
BENCHMARK(BM_qnsd_eval);

void BM_bcf_reference_point(benchmark::State& state) {
  const auto q = ohmic300();
  const std::vector<double> ts{0.0, static_cast<double>(state.range(0))};
  for (auto _ : state) {
    auto series = bathdisc::bcf_reference(q, -500.0, 500.0, ts, 1e-10);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_bcf_reference_point)->Arg(100)->Arg(1000);

void BM_id_decompose(benchmark::State& state) {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd A(200, 400);
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = dist(rng) / (1.0 + j);
  bathdisc::IdOptions opts;
  opts.mode = bathdisc::IdOptions::Mode::Rank;
  opts.rank = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto id = bathdisc::id_decompose(A, opts);
    benchmark::DoNotOptimize(id);
  }
}
BENCHMARK(BM_id_decompose)->Arg(10)->Arg(40);

void BM_nnls(benchmark::State& state) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int m = 400, n = static_cast<int>(state.range(0));
  Eigen::MatrixXd B(m, n);
  Eigen::VectorXd c(m);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) B(i, j) = dist(rng);
  for (int i = 0; i < m; ++i) c[i] = dist(rng);
  for (auto _ : state) {
    auto r = bathdisc::nnls(B, c);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_nnls)->Arg(20)->Arg(60);

void BM_discretize_id_small(benchmark::State& state) {
  const auto q = ohmic300();
  bathdisc::DiscretizationGrid grid{500.0, -500.0, 500.0, 100, 400};
  bathdisc::IdDiscretizeOptions opts;
  opts.mode.mode = bathdisc::IdOptions::Mode::Rank;
  opts.mode.rank = 12;
  for (auto _ : state) {
    auto bath = bathdisc::discretize_id(q, grid, opts);
    benchmark::DoNotOptimize(bath);
  }
}
BENCHMARK(BM_discretize_id_small);

} // namespace
