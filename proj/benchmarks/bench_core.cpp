#include <benchmark/benchmark.h>

#include <random>

#include "mmc/mmc.hpp"

namespace {

mmc::SyntheticData make_data(mmc::Index side, std::size_t observed) {
  return mmc::gen_synthetic(side, side, 5, 0.0, mmc::SamplingScheme::uniform(), observed, 7);
}

mmc::MmcConfig make_config(mmc::Index rank) {
  mmc::MmcConfig config;
  config.rank = rank;
  config.lambda = 1.2;
  return config;
}

void BM_Objective(benchmark::State& state) {
  const auto side = static_cast<mmc::Index>(state.range(0));
  const auto data = make_data(side, static_cast<std::size_t>(side * side / 10));
  const auto f = mmc::initial_factors(side, side, make_config(10));
  for (auto _ : state) benchmark::DoNotOptimize(mmc::objective(data.observations, f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.observations.size()));
}
BENCHMARK(BM_Objective)->Arg(200)->Arg(1000);

void BM_Gradients(benchmark::State& state) {
  const auto side = static_cast<mmc::Index>(state.range(0));
  const auto data = make_data(side, static_cast<std::size_t>(side * side / 10));
  const auto f = mmc::initial_factors(side, side, make_config(10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmc::grad_u(data.observations, f));
    benchmark::DoNotOptimize(mmc::grad_v(data.observations, f));
  }
}
BENCHMARK(BM_Gradients)->Arg(200)->Arg(1000);

void BM_ArmijoStep(benchmark::State& state) {
  const auto data = make_data(500, 25000);
  const auto config = make_config(10);
  const auto f = mmc::initial_factors(500, 500, config);
  const auto gu = mmc::grad_u(data.observations, f);
  const auto gv = mmc::grad_v(data.observations, f);
  for (auto _ : state) benchmark::DoNotOptimize(mmc::armijo_step(data.observations, f, gu, gv, config));
}
BENCHMARK(BM_ArmijoStep);

void BM_Fit(benchmark::State& state) {
  const auto data = make_data(300, 9000);
  auto config = make_config(static_cast<mmc::Index>(state.range(0)));
  config.max_iters = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmc::fit(data.observations, config, mmc::Warnings::Suppress));
  }
}
BENCHMARK(BM_Fit)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TruncatedSvd(benchmark::State& state) {
  const auto side = static_cast<mmc::Index>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  mmc::DenseMatrix m(side, side);
  for (mmc::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(mmc::linalg::truncated_svd(m, 10));
}
BENCHMARK(BM_TruncatedSvd)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_MaxnormOracle(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  mmc::DenseMatrix m(5, 5);
  for (mmc::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(mmc::maxnorm_oracle_small(m, 1));
}
BENCHMARK(BM_MaxnormOracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
