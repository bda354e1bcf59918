#pragma once

#include <string_view>
#include <vector>

#include "mmc/factor_pair.hpp"
#include "mmc/observations.hpp"

namespace mmc {

enum class BaselineMethod { Svt, Svp };

std::string_view to_string(BaselineMethod method);

/// Hyperparameters for the nuclear-norm family baselines. A zero step or
/// threshold selects the default derived from the problem size:
///   SVT step 1.2 p n / |Omega|, threshold 5 sqrt(p n);
///   SVP step 0.75 p n / |Omega| (i.e. 1 / ((1 + 1/3) * sampling rate)),
///   halved whenever an iteration would raise the residual, down to 1.
struct BaselineConfig {
  BaselineMethod method = BaselineMethod::Svp;
  Index rank = 2;          // SVP hard rank
  double step = 0.0;
  double threshold = 0.0;  // SVT only
  int max_iters = 500;
  double tolerance = 1e-4; // relative Omega-residual ||P_Omega(X - Z)||_F / ||P_Omega(Z)||_F

  double resolved_step(const SignedObservations& obs) const;
  double resolved_threshold(const SignedObservations& obs) const;
  void validate(const SignedObservations& obs) const;
};

struct BaselineTrace {
  std::vector<double> relative_residuals;  // one per iteration
  int iterations = 0;
  bool converged = false;
  double step = 0.0;  // step in use at the end
};

/// Singular value thresholding: Y <- Y + step P_Omega(Z - X), X = shrink(Y, threshold),
/// kicked off at Y_0 = k_0 step P_Omega(Z) with k_0 = ceil(threshold / (step ||P_Omega Z||_2)).
/// Throws NumericalError when the relative residual exceeds 10x its initial value.
DenseMatrix svt_fit(const SignedObservations& obs, const BaselineConfig& cfg);
DenseMatrix svt_fit(const SignedObservations& obs, const BaselineConfig& cfg, BaselineTrace& trace);

/// Singular value projection from X_0 = 0: X <- P_rank(X - step P_Omega(X - Z)).
/// The result is returned as the balanced factorization U = U_r S^{1/2},
/// V = V_r S^{1/2}, with lambda set to sqrt of its max-norm upper bound.
/// An explicit step is used as given; divergence then throws as for SVT.
FactorPair svp_fit(const SignedObservations& obs, const BaselineConfig& cfg);
FactorPair svp_fit(const SignedObservations& obs, const BaselineConfig& cfg, BaselineTrace& trace);

/// Balanced factorization of a dense matrix, keeping singular values above
/// 1e-12 * s_max (at least one factor column).
FactorPair factorize(const DenseMatrix& x);

}  // namespace mmc
