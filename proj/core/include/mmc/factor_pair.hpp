#pragma once

#include "mmc/matrix.hpp"

namespace mmc {

/// X = U * V^T with the row-norm budget lambda: ||U||_{2,inf}, ||V||_{2,inf} <= lambda.
///
/// The budget is carried along with the factors so a saved model can be
/// certified against the constraint it was fitted under.
struct FactorPair {
  DenseMatrix u;  // p x d
  DenseMatrix v;  // n x d
  double lambda = 1.0;

  Index rows() const { return u.rows(); }
  Index cols() const { return v.rows(); }
  Index rank() const { return u.cols(); }
};

}  // namespace mmc
