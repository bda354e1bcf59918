#include <gtest/gtest.h>

#include <random>

#include "mmc/baselines.hpp"
#include "mmc/data_io.hpp"
#include "mmc/errors.hpp"
#include "mmc/linalg.hpp"
#include "support/oracles.hpp"

namespace mmc {
namespace {

DenseMatrix rank_one_signs(Index p, Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  Vector s(p), t(n);
  for (Index k = 0; k < p; ++k) s(k) = coin(rng) ? 1.0 : -1.0;
  for (Index k = 0; k < n; ++k) t(k) = coin(rng) ? 1.0 : -1.0;
  return s * t.transpose();
}

TEST(Svt, FullyObservedRankOneWithVanishingThreshold) {
  const DenseMatrix truth = rank_one_signs(12, 9, 1);
  const auto obs = testing::full_observations(truth);
  BaselineConfig c;
  c.method = BaselineMethod::Svt;
  c.threshold = 1e-9;
  c.tolerance = 1e-13;
  c.max_iters = 2000;
  const DenseMatrix x = svt_fit(obs, c);
  EXPECT_LT((x - truth).norm(), 1e-6);
}

TEST(Svt, EmptyObservationsRejected) {
  SignedObservations obs(4, 4, {});
  BaselineConfig c;
  c.method = BaselineMethod::Svt;
  EXPECT_THROW(svt_fit(obs, c), InputError);
}

TEST(Svt, RankTwoSignMatrixFromHalfTheEntries) {
  // Every row is one of two independent +/-1 patterns, so the matrix has rank 2.
  std::mt19937_64 rng(31);
  std::bernoulli_distribution coin(0.5);
  Vector a(50), b(50);
  for (Index k = 0; k < 50; ++k) {
    a(k) = coin(rng) ? 1.0 : -1.0;
    b(k) = coin(rng) ? 1.0 : -1.0;
  }
  DenseMatrix truth(50, 50);
  for (Index i = 0; i < 50; ++i) truth.row(i) = (coin(rng) ? a : b).transpose();
  ASSERT_EQ(linalg::svd(truth).s(2) < 1e-9, true);
  std::vector<SignedEntry> entries;
  std::bernoulli_distribution half(0.5);
  for (Index i = 0; i < 50; ++i)
    for (Index j = 0; j < 50; ++j)
      if (half(rng))
        entries.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                           static_cast<std::int8_t>(truth(i, j))});
  SignedObservations obs(50, 50, std::move(entries));
  BaselineConfig c;
  c.method = BaselineMethod::Svt;
  c.tolerance = 1e-6;
  c.max_iters = 2000;
  BaselineTrace trace;
  const DenseMatrix x = svt_fit(obs, c, trace);
  const double relative = (x - truth).norm() / truth.norm();
  RecordProperty("relative_error", std::to_string(relative));
  EXPECT_LT(relative, 1e-2);
  EXPECT_TRUE(trace.converged);
}

TEST(Svt, TraceRecordsResidualPerIteration) {
  const auto data = gen_synthetic(20, 20, 2, 0.0, SamplingScheme::uniform(), 200, 3);
  BaselineConfig c;
  c.method = BaselineMethod::Svt;
  c.max_iters = 15;
  c.tolerance = 1e-14;
  BaselineTrace trace;
  svt_fit(data.observations, c, trace);
  EXPECT_EQ(trace.iterations, 15);
  EXPECT_EQ(trace.relative_residuals.size(), 15u);
  EXPECT_FALSE(trace.converged);
  EXPECT_DOUBLE_EQ(trace.step, 1.2 * 400.0 / 200.0);
}

TEST(Svt, DivergentStepRaisesNumericalError) {
  const auto data = gen_synthetic(20, 20, 2, 0.0, SamplingScheme::uniform(), 200, 4);
  BaselineConfig c;
  c.method = BaselineMethod::Svt;
  c.step = 50.0;
  c.threshold = 1e-6;
  c.max_iters = 200;
  c.tolerance = 1e-14;
  EXPECT_THROW(svt_fit(data.observations, c), NumericalError);
}

TEST(Svp, FullyObservedRankOneUnitStepIsExact) {
  const DenseMatrix truth = rank_one_signs(15, 11, 2);
  BaselineConfig c;
  c.rank = 1;
  c.step = 1.0;
  const FactorPair f = svp_fit(testing::full_observations(truth), c);
  EXPECT_EQ(f.rank(), 1);
  EXPECT_LT((f.u * f.v.transpose() - truth).norm(), 1e-6);
}

TEST(Svp, FullRankFullyObservedRecoversExactly) {
  std::mt19937_64 rng(40);
  std::bernoulli_distribution coin(0.5);
  DenseMatrix truth(6, 8);
  for (Index k = 0; k < truth.size(); ++k) truth.data()[k] = coin(rng) ? 1.0 : -1.0;
  BaselineConfig c;
  c.rank = 6;
  c.step = 1.0;
  const FactorPair f = svp_fit(testing::full_observations(truth), c);
  EXPECT_LT((f.u * f.v.transpose() - truth).norm(), 1e-6);
}

TEST(Svp, RejectsBadRankAndEmptyObservations) {
  const auto data = gen_synthetic(10, 8, 2, 0.0, SamplingScheme::uniform(), 40, 5);
  BaselineConfig c;
  c.rank = 9;
  EXPECT_THROW(svp_fit(data.observations, c), InputError);
  c.rank = 0;
  EXPECT_THROW(svp_fit(data.observations, c), InputError);
  c.rank = 2;
  EXPECT_THROW(svp_fit(SignedObservations(3, 3, {}), c), InputError);
}

TEST(Svp, OutputHasRequestedRankAndIsDeterministic) {
  const auto data = gen_synthetic(90, 80, 2, 0.0, SamplingScheme::uniform(), 2000, 6);
  BaselineConfig c;
  c.rank = 3;
  const FactorPair a = svp_fit(data.observations, c);
  const FactorPair b = svp_fit(data.observations, c);
  EXPECT_EQ(a.rank(), 3);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(linalg::svd(a.u * a.v.transpose()).s(3) < 1e-8, true);
}

TEST(Factorize, ReconstructsAndBalances) {
  std::mt19937_64 rng(41);
  const DenseMatrix x = testing::random_matrix(7, 2, rng) * testing::random_matrix(5, 2, rng).transpose();
  const FactorPair f = factorize(x);
  EXPECT_LT((f.u * f.v.transpose() - x).norm(), 1e-10 * x.norm());
  EXPECT_TRUE((f.u.transpose() * f.u).isApprox(f.v.transpose() * f.v, 1e-9));
}

TEST(Linalg, TruncatedSvdMatchesDenseOnLowRankInput) {
  std::mt19937_64 rng(42);
  const DenseMatrix x = testing::random_matrix(120, 3, rng) * testing::random_matrix(100, 3, rng).transpose();
  const auto full = linalg::svd(x);
  const auto part = linalg::truncated_svd(x, 3);
  for (Index k = 0; k < 3; ++k) EXPECT_NEAR(part.s(k), full.s(k), 1e-9 * full.s(0));
  EXPECT_LT((linalg::reconstruct(part) - x).norm(), 1e-9 * x.norm());
  EXPECT_NEAR(linalg::spectral_norm(x), full.s(0), 1e-9 * full.s(0));
}

TEST(Linalg, SvdSignConvention) {
  std::mt19937_64 rng(43);
  const DenseMatrix x = testing::random_matrix(6, 4, rng);
  const auto d = linalg::svd(x);
  for (Index k = 0; k < d.u.cols(); ++k) {
    Index first = 0;
    while (std::abs(d.u(first, k)) <= 1e-12) ++first;
    EXPECT_GT(d.u(first, k), 0.0);
  }
  EXPECT_LT((linalg::reconstruct(d) - x).norm(), 1e-12 * x.norm());
}

}  // namespace
}  // namespace mmc
