#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "mmc/certificate.hpp"
#include "mmc/data_io.hpp"
#include "mmc/errors.hpp"
#include "mmc/solver.hpp"
#include "support/oracles.hpp"

namespace mmc {
namespace {

DenseMatrix row(std::initializer_list<double> values) {
  DenseMatrix m(1, static_cast<Index>(values.size()));
  Index k = 0;
  for (double x : values) m(0, k++) = x;
  return m;
}

TEST(UpperBound, Examples) {
  EXPECT_DOUBLE_EQ(maxnorm_upper_bound(FactorPair{row({1, 0}), row({0, 1}), 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(maxnorm_upper_bound(FactorPair{row({3, 4}), row({1, 0}), 1.0}), 25.0);
}

TEST(UpperBound, FittedModelWithinLambdaSquared) {
  const auto data = gen_synthetic(40, 30, 2, 0.05, SamplingScheme::uniform(), 400, 1);
  MmcConfig c;
  c.rank = 4;
  c.lambda = 1.1;
  c.max_iters = 100;
  const auto r = fit(data.observations, c);
  EXPECT_LE(maxnorm_upper_bound(r.factors), c.lambda * c.lambda * (1 + 1e-12));
}

TEST(Witness, ScalarFactors) {
  const FactorPair f{row({1}), row({1}), 1.0};
  const SdpWitness w = witness_from_factors(f);
  EXPECT_EQ(w.a, DenseMatrix::Ones(1, 1));
  EXPECT_EQ(w.b, DenseMatrix::Ones(1, 1));
  EXPECT_EQ(w.x, DenseMatrix::Ones(1, 1));
  const DenseMatrix block = w.block();
  ASSERT_EQ(block.rows(), 2);
  EXPECT_EQ(block, DenseMatrix::Ones(2, 2));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-15);
  EXPECT_NEAR(es.eigenvalues()(1), 2.0, 1e-15);
}

TEST(Witness, DiagonalsAreSquaredRowNorms) {
  std::mt19937_64 rng(5);
  const FactorPair f{testing::random_matrix(4, 3, rng), testing::random_matrix(6, 3, rng), 1.0};
  const SdpWitness w = witness_from_factors(f);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(w.a(i, i), f.u.row(i).squaredNorm(), 1e-13);
  for (Index j = 0; j < 6; ++j) EXPECT_NEAR(w.b(j, j), f.v.row(j).squaredNorm(), 1e-13);
  EXPECT_TRUE(w.x.isApprox(f.u * f.v.transpose(), 1e-14));
}

TEST(Witness, FeasibleFactorsHaveBoundedDiagonals) {
  std::mt19937_64 rng(6);
  const double lambda = 0.8;
  const FactorPair f{project_rows(testing::random_matrix(5, 2, rng), lambda, ProjectionMode::PerRow),
                     project_rows(testing::random_matrix(4, 2, rng), lambda, ProjectionMode::PerRow),
                     lambda};
  const SdpWitness w = witness_from_factors(f);
  EXPECT_LE(w.a.diagonal().maxCoeff(), lambda * lambda * (1 + 1e-12));
  EXPECT_LE(w.b.diagonal().maxCoeff(), lambda * lambda * (1 + 1e-12));
}

// Independent PSD check: Cholesky of block + eps I, plus the eigenvalue bound.
TEST(Witness, RandomBlockIsPositiveSemidefinite) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const FactorPair f{testing::random_matrix(5, 2, rng), testing::random_matrix(4, 2, rng), 1.0};
    const Eigen::MatrixXd block = witness_from_factors(f).block();
    ASSERT_EQ(block.rows(), 9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    Eigen::LLT<Eigen::MatrixXd> llt(block + 1e-10 * Eigen::MatrixXd::Identity(9, 9));
    EXPECT_EQ(llt.info(), Eigen::Success);
  }
}

TEST(CheckWitness, FittedModelPasses) {
  const auto data = gen_synthetic(30, 25, 2, 0.0, SamplingScheme::uniform(), 300, 2);
  MmcConfig c;
  c.rank = 3;
  c.max_iters = 60;
  const auto r = fit(data.observations, c);
  const auto check = check_witness(witness_from_factors(r.factors), c.lambda);
  EXPECT_TRUE(check.passed) << check.diagnostic;
  EXPECT_EQ(check.violation, WitnessViolation::None);
}

TEST(CheckWitness, OversizedDiagonalFails) {
  const double lambda = 1.0;
  SdpWitness w = witness_from_factors(FactorPair{row({0.5, 0.5}), row({0.5, 0.5}), lambda});
  w.a(0, 0) = lambda * lambda + 1.0;
  const auto check = check_witness(w, lambda);
  EXPECT_FALSE(check.passed);
  EXPECT_EQ(check.violation, WitnessViolation::DiagonalBound);
  EXPECT_NE(check.diagnostic.find("diagonal bound"), std::string::npos);
}

TEST(CheckWitness, IndefiniteBlockFailsPsd) {
  SdpWitness w{DenseMatrix::Ones(1, 1), DenseMatrix::Constant(1, 1, 2.0), DenseMatrix::Ones(1, 1)};
  const auto check = check_witness(w, 2.0);
  EXPECT_FALSE(check.passed);
  EXPECT_EQ(check.violation, WitnessViolation::NotPsd);
  EXPECT_NEAR(check.min_eigenvalue, -1.0, 1e-12);
  EXPECT_NE(check.diagnostic.find("PSD"), std::string::npos);
}

TEST(CheckWitness, AsymmetricBlockThrows) {
  DenseMatrix a(2, 2);
  a << 1, 0.5, 0.4, 1;
  SdpWitness w{a, DenseMatrix::Zero(2, 1), DenseMatrix::Ones(1, 1)};
  EXPECT_THROW(check_witness(w, 2.0), InputError);
  w.a = DenseMatrix::Identity(2, 2);
  EXPECT_THROW(check_witness(w, 2.0, -1.0), InputError);
}

TEST(CheckWitness, EveryFactorPairPassesAtItsOwnBound) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Index p = 1 + static_cast<Index>(rng() % 8);
    const Index n = 1 + static_cast<Index>(rng() % 8);
    const Index d = 1 + static_cast<Index>(rng() % 4);
    const FactorPair f{testing::random_matrix(p, d, rng, 2.0), testing::random_matrix(n, d, rng, 2.0), 1.0};
    const auto check = check_witness(witness_from_factors(f), std::sqrt(maxnorm_upper_bound(f)), 1e-9);
    EXPECT_TRUE(check.passed) << check.diagnostic;
  }
}

TEST(Oracle, IdentityHasMaxNormOne) {
  EXPECT_NEAR(maxnorm_oracle_small(DenseMatrix::Identity(2, 2)), 1.0, 1e-3);
}

TEST(Oracle, RankOneClosedForm) {
  Vector a(2), b(2);
  a << 1, 2;
  b << 1, 1;
  const DenseMatrix m = a * b.transpose();
  EXPECT_NEAR(maxnorm_oracle_small(m), 2.0, 2e-3);
}

TEST(Oracle, ZeroMatrix) { EXPECT_EQ(maxnorm_oracle_small(DenseMatrix::Zero(3, 2)), 0.0); }

TEST(Oracle, RejectsOversizedInput) {
  EXPECT_THROW(maxnorm_oracle_small(DenseMatrix::Ones(7, 2)), InputError);
  EXPECT_THROW(maxnorm_oracle_small(DenseMatrix::Ones(2, 7)), InputError);
}

TEST(Oracle, AbsoluteHomogeneity) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    const DenseMatrix m = testing::random_matrix(3, 3, rng);
    const double base = maxnorm_oracle_small(m);
    for (double c : {-2.0, 0.5, 3.0}) {
      const double scaled = maxnorm_oracle_small(c * m);
      EXPECT_NEAR(scaled, std::abs(c) * base, 1e-3 * std::abs(c) * base);
    }
  }
}

TEST(Oracle, BoundedBelowByLargestEntryAndAboveByAnyFactorization) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 8; ++trial) {
    const Index p = 2 + static_cast<Index>(rng() % 4);
    const Index n = 2 + static_cast<Index>(rng() % 4);
    const Index d = 1 + static_cast<Index>(rng() % 3);
    const DenseMatrix u = testing::random_matrix(p, d, rng);
    const DenseMatrix v = testing::random_matrix(n, d, rng);
    const DenseMatrix m = u * v.transpose();
    const double value = maxnorm_oracle_small(m);
    EXPECT_GE(value, m.cwiseAbs().maxCoeff() * (1 - 1e-9));
    EXPECT_LE(value, maxnorm_upper_bound(u, v) * (1 + 1e-9));
  }
}

TEST(Oracle, DeterministicForFixedSeed) {
  std::mt19937_64 rng(15);
  const DenseMatrix m = testing::random_matrix(4, 3, rng);
  EXPECT_EQ(maxnorm_oracle_small(m, 8, 3), maxnorm_oracle_small(m, 8, 3));
}

}  // namespace
}  // namespace mmc
