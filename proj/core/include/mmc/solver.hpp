#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "mmc/errors.hpp"
#include "mmc/factor_pair.hpp"
#include "mmc/observations.hpp"

namespace mmc {

enum class ProjectionMode {
  PerRow,       // rescale only the rows whose norm exceeds lambda
  WholeMatrix,  // scale the whole matrix by lambda / ||M||_{2,inf} when infeasible
};

std::string_view to_string(ProjectionMode mode);
ProjectionMode parse_projection_mode(std::string_view text);

/// Hyperparameters of the projected-gradient max-norm solver.
struct MmcConfig {
  double lambda = 1.2;
  Index rank = 10;
  int max_iters = 500;
  double armijo_beta = 0.5;
  double armijo_sigma = 1e-4;
  double initial_step = 1.0;
  double min_step = 1e-10;
  ProjectionMode projection = ProjectionMode::PerRow;
  double init_scale = 0.5;
  std::uint64_t seed = 0;

  /// Throws InputError when a parameter is out of range.
  void check() const;
  /// check(), then logs a warning for lambda < 1: a 1-bit entry cannot be
  /// fitted exactly below that.
  void validate() const;
};

struct IterationRecord {
  double objective = 0.0;
  double step = 0.0;
  double u_norm = 0.0;  // ||U_t||_{2,inf}
  double v_norm = 0.0;  // ||V_t||_{2,inf}
};

enum class Termination { MaxIterations, StepUnderflow, Stalled };

std::string_view to_string(Termination reason);

struct FitTrace {
  double initial_objective = 0.0;
  std::vector<IterationRecord> iterations;
  Termination reason = Termination::MaxIterations;

  friend bool operator==(const FitTrace&, const FitTrace&) = default;
};

inline bool operator==(const IterationRecord& a, const IterationRecord& b) {
  return a.objective == b.objective && a.step == b.step && a.u_norm == b.u_norm &&
         a.v_norm == b.v_norm;
}

struct FitResult {
  FactorPair factors;
  FitTrace trace;
};

/// Raised by fit() when the objective turns non-finite. Carries the trace
/// recorded up to the failing iteration.
class FitDivergedError : public NumericalError {
 public:
  FitDivergedError(const std::string& what, FitTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const FitTrace& trace() const noexcept { return trace_; }

 private:
  FitTrace trace_;
};

/// Gradient of the objective in U: P_Omega(U V^T - Z) V, accumulated over Omega.
DenseMatrix grad_u(const SignedObservations& obs, const FactorPair& f);
/// Gradient of the objective in V: P_Omega(U V^T - Z)^T U.
DenseMatrix grad_v(const SignedObservations& obs, const FactorPair& f);

/// Both gradients from precomputed residuals (same order as obs.entries()).
void gradients_from_residuals(const SignedObservations& obs, const DenseMatrix& u,
                              const DenseMatrix& v, const std::vector<double>& residuals,
                              DenseMatrix& g_u, DenseMatrix& g_v);

/// Map M onto {||M||_{2,inf} <= lambda}. Throws InputError for lambda <= 0.
DenseMatrix project_rows(const DenseMatrix& m, double lambda, ProjectionMode mode);
void project_rows_in_place(DenseMatrix& m, double lambda, ProjectionMode mode);

struct ArmijoResult {
  double step = 0.0;       // accepted alpha, 0 on underflow
  FactorPair next;         // projected trial point (the input point on underflow)
  double objective = 0.0;  // objective at `next`
  bool stationary = false; // no step down to min_step was accepted
  int trials = 0;
};

/// Backtracking along the projection arc: tries alpha = initial_step * beta^k
/// and accepts the first projected point satisfying
///   f(next) <= f(current) + sigma * <G, next - current>  and  f(next) <= f(current).
ArmijoResult armijo_step(const SignedObservations& obs, const FactorPair& current,
                         const DenseMatrix& g_u, const DenseMatrix& g_v, const MmcConfig& config);

/// Seeded Gaussian start with entry std init_scale * lambda / sqrt(d), projected.
FactorPair initial_factors(Index rows, Index cols, const MmcConfig& config);

enum class Warnings { Emit, Suppress };

/// Projected gradient descent with Armijo steps from a seeded start.
FitResult fit(const SignedObservations& obs, const MmcConfig& config,
              Warnings warnings = Warnings::Emit);

/// Same loop from a caller-provided start (projected onto the budget first).
FitResult fit_from(const SignedObservations& obs, FactorPair start, const MmcConfig& config,
                   Warnings warnings = Warnings::Emit);

/// u_(i) . v_(j). Throws DimensionError on out-of-range indices.
double predict(const FactorPair& f, Index i, Index j);
/// +1 if predict(f, i, j) >= 0, else -1.
int predict_sign(const FactorPair& f, Index i, Index j);

}  // namespace mmc
