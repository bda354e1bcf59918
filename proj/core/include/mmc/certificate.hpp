#pragma once

#include <cstdint>
#include <string>

#include "mmc/factor_pair.hpp"
#include "mmc/matrix.hpp"

namespace mmc {

/// Block matrix [[A, X], [X^T, B]] witnessing ||X||_max <= lambda^2 when it is
/// PSD and every diagonal entry of A and B is at most lambda^2.
struct SdpWitness {
  DenseMatrix a;  // p x p, symmetric
  DenseMatrix x;  // p x n
  DenseMatrix b;  // n x n, symmetric

  DenseMatrix block() const;
};

enum class WitnessViolation { None, DiagonalBound, NotPsd };

struct WitnessCheck {
  bool passed = false;
  WitnessViolation violation = WitnessViolation::None;
  std::string diagnostic;
  double max_diagonal = 0.0;
  double min_eigenvalue = 0.0;
  double diagonal_limit = 0.0;  // lambda^2 + tol
  double psd_tolerance = 0.0;   // tol * max(1, trace)
};

/// max(||U||_{2,inf}^2, ||V||_{2,inf}^2): the max-norm value of this particular
/// factorization, hence an upper bound on ||U V^T||_max.
double maxnorm_upper_bound(const FactorPair& f);
double maxnorm_upper_bound(const DenseMatrix& u, const DenseMatrix& v);

/// A = U U^T, X = U V^T, B = V V^T. PSD by construction (Gram matrix of the
/// stacked rows of U and V).
SdpWitness witness_from_factors(const FactorPair& f);

/// Checks diagonals against lambda^2 + tol, then the minimum eigenvalue of
/// the block matrix against -tol * max(1, trace). The first violated
/// condition is reported. Throws InputError if A or B is not symmetric or
/// the blocks have inconsistent shapes, and if tol < 0.
WitnessCheck check_witness(const SdpWitness& w, double lambda, double tol = 1e-9);

/// Desk-scale estimate of ||m||_max for matrices up to 6 x 6.
///
/// Works on m / max|m_ij| and rescales. The norm is the smallest t such
/// that t I + H is PSD, where H is zero on the diagonal, carries m and m^T
/// in its off-diagonal blocks, and has free entries elsewhere. The largest
/// eigenvalue of -H is replaced by a log-sum-exp with sharpness 10 ... 1e6
/// and minimized by BFGS. Restart 0 starts from the balanced SVD
/// factorization; later restarts perturb it with seeded noise. Every
/// candidate is an exact factorization, so the result is an upper bound.
/// Test infrastructure; throws InputError above the size cap.
double maxnorm_oracle_small(const DenseMatrix& m, int restarts = 32, std::uint64_t seed = 0);

inline constexpr Index kOracleMaxDim = 6;

}  // namespace mmc
