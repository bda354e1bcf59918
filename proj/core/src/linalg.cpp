#include "mmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "mmc/errors.hpp"

namespace mmc::linalg {
namespace {

constexpr double kSignThreshold = 1e-12;
constexpr Index kOversampling = 10;

void fix_signs(Svd& d) {
  for (Index k = 0; k < d.u.cols(); ++k) {
    for (Index i = 0; i < d.u.rows(); ++i) {
      const double x = d.u(i, k);
      if (std::abs(x) > kSignThreshold) {
        if (x < 0.0) {
          d.u.col(k) *= -1.0;
          d.v.col(k) *= -1.0;
        }
        break;
      }
    }
  }
}

Svd dense_svd(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd d{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  fix_signs(d);
  return d;
}

Svd leading(const Svd& full, Index rank) {
  const Index k = std::min<Index>(rank, full.s.size());
  return Svd{full.u.leftCols(k), full.s.head(k), full.v.leftCols(k)};
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

Svd svd(const DenseMatrix& m) {
  if (!m.allFinite()) throw NumericalError("svd: matrix has non-finite entries");
  return dense_svd(Eigen::MatrixXd(m));
}

Svd truncated_svd(const DenseMatrix& m, Index rank, std::uint64_t seed, int power_iters) {
  if (rank < 1) throw InputError("truncated_svd: rank must be at least 1");
  if (!m.allFinite()) throw NumericalError("truncated_svd: matrix has non-finite entries");
  const Index small = std::min(m.rows(), m.cols());
  const Index sketch = rank + kOversampling;
  if (small <= 64 || 3 * sketch >= small) return leading(dense_svd(Eigen::MatrixXd(m)), rank);

  const Eigen::MatrixXd a = m;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd omega(a.cols(), sketch);
  for (Index k = 0; k < omega.size(); ++k) omega.data()[k] = normal(rng);

  Eigen::MatrixXd q = orthonormal_basis(a * omega);
  for (int it = 0; it < power_iters; ++it) {
    Eigen::MatrixXd z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }
  const Eigen::MatrixXd b = q.transpose() * a;  // sketch x n
  Svd small_svd = dense_svd(b);
  Svd d{q * small_svd.u, small_svd.s, small_svd.v};
  fix_signs(d);
  return leading(d, rank);
}

DenseMatrix reconstruct(const Svd& d) { return d.u * d.s.asDiagonal() * d.v.transpose(); }

double min_eigenvalue(const DenseMatrix& symmetric) {
  if (symmetric.rows() != symmetric.cols()) throw DimensionError("min_eigenvalue: matrix not square");
  if (symmetric.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(symmetric),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return solver.eigenvalues()(0);
}

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  return truncated_svd(m, 1).s(0);
}

}  // namespace mmc::linalg
