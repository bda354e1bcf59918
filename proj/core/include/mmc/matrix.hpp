#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace mmc {

using Index = Eigen::Index;

/// Row-major dense storage. Factor rows u_(i), v_(j) are contiguous.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Largest l2 row norm, ||M||_{2,inf}. Zero for a matrix with no rows.
double max_row_norm(const DenseMatrix& m);

bool all_finite(const DenseMatrix& m);

}  // namespace mmc
