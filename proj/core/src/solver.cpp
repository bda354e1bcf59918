#include "mmc/solver.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "mmc/log.hpp"

namespace mmc {
namespace {

constexpr int kStallWindow = 10;
constexpr double kStallTolerance = 1e-9;

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
  return (a.array() * b.array()).sum();
}

struct TrialOutcome {
  double step = 0.0;
  double objective = 0.0;
  bool stationary = false;
  int trials = 0;
};

// Backtracking search writing the accepted point into (u_next, v_next) and
// its residuals into residuals_next.
TrialOutcome search_step(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v,
                         double current_objective, const DenseMatrix& g_u, const DenseMatrix& g_v,
                         const MmcConfig& config, DenseMatrix& u_next, DenseMatrix& v_next,
                         std::vector<double>& residuals_next) {
  TrialOutcome out;
  double alpha = config.initial_step;
  while (alpha >= config.min_step) {
    ++out.trials;
    u_next = u - alpha * g_u;
    v_next = v - alpha * g_v;
    project_rows_in_place(u_next, config.lambda, config.projection);
    project_rows_in_place(v_next, config.lambda, config.projection);

    residuals_on_omega(obs, u_next, v_next, residuals_next);
    double sum = 0.0;
    for (double r : residuals_next) sum += r * r;
    const double trial_objective = 0.5 * sum;

    const double directional =
        frobenius_inner(g_u, u_next - u) + frobenius_inner(g_v, v_next - v);
    if (trial_objective <= current_objective + config.armijo_sigma * directional &&
        trial_objective <= current_objective) {
      out.step = alpha;
      out.objective = trial_objective;
      return out;
    }
    alpha *= config.armijo_beta;
  }
  out.stationary = true;
  out.objective = current_objective;
  u_next = u;
  v_next = v;
  return out;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw InputError(std::string(name) + " must be positive, got " + std::to_string(value));
  }
}

}  // namespace

std::string_view to_string(ProjectionMode mode) {
  return mode == ProjectionMode::PerRow ? "per-row" : "whole-matrix";
}

ProjectionMode parse_projection_mode(std::string_view text) {
  if (text == "per-row") return ProjectionMode::PerRow;
  if (text == "whole-matrix") return ProjectionMode::WholeMatrix;
  throw InputError("unknown projection mode '" + std::string(text) +
                   "' (expected per-row or whole-matrix)");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::MaxIterations: return "max-iterations";
    case Termination::StepUnderflow: return "step-underflow";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

void MmcConfig::check() const {
  require_positive(lambda, "lambda");
  if (rank < 1) throw InputError("rank must be at least 1");
  if (max_iters < 0) throw InputError("max_iters must be nonnegative");
  if (!(armijo_beta > 0.0 && armijo_beta < 1.0)) throw InputError("armijo_beta must lie in (0, 1)");
  if (!(armijo_sigma > 0.0 && armijo_sigma < 1.0)) {
    throw InputError("armijo_sigma must lie in (0, 1)");
  }
  require_positive(initial_step, "initial_step");
  require_positive(min_step, "min_step");
  require_positive(init_scale, "init_scale");
}

void MmcConfig::validate() const {
  check();
  if (lambda < 1.0) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " < 1: predictions are bounded by lambda^2 < 1 and cannot "
        << "reach the observed +/-1 values";
    log::warn(msg.str());
  }
}

void gradients_from_residuals(const SignedObservations& obs, const DenseMatrix& u,
                              const DenseMatrix& v, const std::vector<double>& residuals,
                              DenseMatrix& g_u, DenseMatrix& g_v) {
  check_factor_shapes(obs, u, v);
  if (residuals.size() != obs.size()) throw DimensionError("residual count does not match Omega");
  g_u.setZero(u.rows(), u.cols());
  g_v.setZero(v.rows(), v.cols());
  const auto entries = obs.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const double r = residuals[k];
    g_u.row(e.row).noalias() += r * v.row(e.col);
    g_v.row(e.col).noalias() += r * u.row(e.row);
  }
}

DenseMatrix grad_u(const SignedObservations& obs, const FactorPair& f) {
  const auto r = residuals_on_omega(obs, f);
  DenseMatrix g_u;
  DenseMatrix g_v;
  gradients_from_residuals(obs, f.u, f.v, r, g_u, g_v);
  return g_u;
}

DenseMatrix grad_v(const SignedObservations& obs, const FactorPair& f) {
  const auto r = residuals_on_omega(obs, f);
  DenseMatrix g_u;
  DenseMatrix g_v;
  gradients_from_residuals(obs, f.u, f.v, r, g_u, g_v);
  return g_v;
}

void project_rows_in_place(DenseMatrix& m, double lambda, ProjectionMode mode) {
  if (!(lambda > 0.0)) {
    throw InputError("projection radius must be positive, got " + std::to_string(lambda));
  }
  if (mode == ProjectionMode::PerRow) {
    for (Index i = 0; i < m.rows(); ++i) {
      const double norm = m.row(i).norm();
      if (norm > lambda) m.row(i) *= lambda / norm;
    }
    return;
  }
  const double norm = max_row_norm(m);
  if (norm > lambda) m *= lambda / norm;
}

DenseMatrix project_rows(const DenseMatrix& m, double lambda, ProjectionMode mode) {
  DenseMatrix out = m;
  project_rows_in_place(out, lambda, mode);
  return out;
}

ArmijoResult armijo_step(const SignedObservations& obs, const FactorPair& current,
                         const DenseMatrix& g_u, const DenseMatrix& g_v, const MmcConfig& config) {
  check_factor_shapes(obs, current.u, current.v);
  if (g_u.rows() != current.u.rows() || g_u.cols() != current.u.cols() ||
      g_v.rows() != current.v.rows() || g_v.cols() != current.v.cols()) {
    throw DimensionError("gradient shapes do not match the factors");
  }
  ArmijoResult result;
  result.next.lambda = current.lambda;
  std::vector<double> residuals;
  const auto outcome = search_step(obs, current.u, current.v, objective(obs, current), g_u, g_v,
                                   config, result.next.u, result.next.v, residuals);
  result.step = outcome.step;
  result.objective = outcome.objective;
  result.stationary = outcome.stationary;
  result.trials = outcome.trials;
  return result;
}

namespace {

FactorPair draw_start(Index rows, Index cols, const MmcConfig& config) {
  std::mt19937_64 rng(config.seed);
  const double sd =
      config.init_scale * config.lambda / std::sqrt(static_cast<double>(config.rank));
  std::normal_distribution<double> normal(0.0, std::isfinite(sd) ? sd : 1.0);
  FactorPair f;
  f.lambda = config.lambda;
  f.u.resize(rows, config.rank);
  f.v.resize(cols, config.rank);
  for (Index k = 0; k < f.u.size(); ++k) f.u.data()[k] = normal(rng);
  for (Index k = 0; k < f.v.size(); ++k) f.v.data()[k] = normal(rng);
  project_rows_in_place(f.u, config.lambda, config.projection);
  project_rows_in_place(f.v, config.lambda, config.projection);
  return f;
}

FitResult run_descent(const SignedObservations& obs, FactorPair start, const MmcConfig& config) {
  if (obs.empty()) throw InputError("cannot fit: no observed entries");
  check_factor_shapes(obs, start.u, start.v);

  FitResult result;
  FactorPair& f = result.factors;
  FitTrace& trace = result.trace;
  f = std::move(start);
  f.lambda = config.lambda;

  std::vector<double> residuals;
  residuals_on_omega(obs, f.u, f.v, residuals);
  double current = 0.0;
  for (double r : residuals) current += r * r;
  current *= 0.5;
  trace.initial_objective = current;
  if (!std::isfinite(current)) throw FitDivergedError("initial objective is not finite", trace);

  DenseMatrix g_u;
  DenseMatrix g_v;
  DenseMatrix u_next;
  DenseMatrix v_next;
  std::vector<double> residuals_next;
  trace.iterations.reserve(static_cast<std::size_t>(config.max_iters));

  for (int t = 1; t <= config.max_iters; ++t) {
    gradients_from_residuals(obs, f.u, f.v, residuals, g_u, g_v);
    const auto outcome = search_step(obs, f.u, f.v, current, g_u, g_v, config, u_next, v_next,
                                     residuals_next);
    if (outcome.stationary) {
      trace.iterations.push_back({current, 0.0, max_row_norm(f.u), max_row_norm(f.v)});
      trace.reason = Termination::StepUnderflow;
      return result;
    }
    f.u.swap(u_next);
    f.v.swap(v_next);
    residuals.swap(residuals_next);
    current = outcome.objective;
    trace.iterations.push_back({current, outcome.step, max_row_norm(f.u), max_row_norm(f.v)});
    if (!std::isfinite(current)) {
      throw FitDivergedError("objective became non-finite at iteration " + std::to_string(t),
                             trace);
    }
    if (t >= kStallWindow) {
      const double reference =
          t == kStallWindow ? trace.initial_objective
                            : trace.iterations[static_cast<std::size_t>(t - kStallWindow - 1)].objective;
      if (reference == 0.0 || (reference - current) < kStallTolerance * reference) {
        trace.reason = Termination::Stalled;
        return result;
      }
    }
  }
  trace.reason = Termination::MaxIterations;
  return result;
}

}  // namespace

FactorPair initial_factors(Index rows, Index cols, const MmcConfig& config) {
  config.validate();
  return draw_start(rows, cols, config);
}

FitResult fit(const SignedObservations& obs, const MmcConfig& config, Warnings warnings) {
  warnings == Warnings::Emit ? config.validate() : config.check();
  if (obs.empty()) throw InputError("cannot fit: no observed entries");
  return run_descent(obs, draw_start(obs.rows(), obs.cols(), config), config);
}

FitResult fit_from(const SignedObservations& obs, FactorPair start, const MmcConfig& config,
                   Warnings warnings) {
  warnings == Warnings::Emit ? config.validate() : config.check();
  project_rows_in_place(start.u, config.lambda, config.projection);
  project_rows_in_place(start.v, config.lambda, config.projection);
  return run_descent(obs, std::move(start), config);
}

double predict(const FactorPair& f, Index i, Index j) {
  if (i < 0 || i >= f.rows() || j < 0 || j >= f.cols()) {
    throw DimensionError("prediction index (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside " + std::to_string(f.rows()) + " x " +
                         std::to_string(f.cols()));
  }
  return f.u.row(i).dot(f.v.row(j));
}

int predict_sign(const FactorPair& f, Index i, Index j) { return predict(f, i, j) >= 0.0 ? 1 : -1; }

}  // namespace mmc
