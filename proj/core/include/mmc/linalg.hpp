#pragma once

#include <cstdint>

#include "mmc/matrix.hpp"

namespace mmc::linalg {

/// Thin SVD M = U diag(s) V^T with singular values in descending order.
///
/// Sign convention: the first component of each left singular vector whose
/// magnitude exceeds 1e-12 is nonnegative; the matching right vector is
/// flipped with it. This makes the decomposition reproducible for a fixed
/// input, which baselines and their regression tests rely on.
struct Svd {
  Eigen::MatrixXd u;  // p x k
  Vector s;           // k
  Eigen::MatrixXd v;  // n x k
};

Svd svd(const DenseMatrix& m);

/// Leading `rank` singular triplets. Uses the dense decomposition for small
/// or nearly square-rank problems and seeded randomized subspace iteration
/// (oversampling 10, `power_iters` sweeps) otherwise.
Svd truncated_svd(const DenseMatrix& m, Index rank, std::uint64_t seed = 0x5eed, int power_iters = 6);

/// U diag(s) V^T.
DenseMatrix reconstruct(const Svd& d);

/// Smallest eigenvalue of a symmetric matrix (lower triangle is read).
double min_eigenvalue(const DenseMatrix& symmetric);

/// Spectral norm ||M||_2.
double spectral_norm(const DenseMatrix& m);

}  // namespace mmc::linalg
