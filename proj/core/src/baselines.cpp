#include "mmc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmc/certificate.hpp"
#include "mmc/errors.hpp"
#include "mmc/linalg.hpp"

namespace mmc {
namespace {

constexpr double kDivergenceFactor = 10.0;

double sampling_density(const SignedObservations& obs) {
  return static_cast<double>(obs.size()) /
         (static_cast<double>(obs.rows()) * static_cast<double>(obs.cols()));
}

double relative_residual(const SignedObservations& obs, const DenseMatrix& x) {
  double sum = 0.0;
  for (const auto& e : obs.entries()) {
    const double r = x(e.row, e.col) - e.sign;
    sum += r * r;
  }
  // ||P_Omega(Z)||_F^2 = |Omega| for sign data.
  return std::sqrt(sum / static_cast<double>(obs.size()));
}

void check_divergence(double residual, const char* method, int iteration) {
  if (!std::isfinite(residual) || residual > kDivergenceFactor) {
    throw NumericalError(std::string(method) + " diverged at iteration " +
                         std::to_string(iteration) + " (relative residual " +
                         std::to_string(residual) + ")");
  }
}

DenseMatrix shrink(const DenseMatrix& y, double threshold) {
  linalg::Svd d = linalg::svd(y);
  Index keep = 0;
  while (keep < d.s.size() && d.s(keep) > threshold) ++keep;
  if (keep == 0) return DenseMatrix::Zero(y.rows(), y.cols());
  const Vector shrunk = (d.s.head(keep).array() - threshold).matrix();
  return d.u.leftCols(keep) * shrunk.asDiagonal() * d.v.leftCols(keep).transpose();
}

// U diag(sqrt s), V diag(sqrt s). With `trim`, directions with negligible
// singular values are dropped; otherwise all of them are kept.
FactorPair balanced(const linalg::Svd& d, Index rows, Index cols, bool trim) {
  const double top = d.s.size() > 0 ? d.s(0) : 0.0;
  Index keep = 0;
  if (trim) {
    while (keep < d.s.size() && d.s(keep) > 1e-12 * top && d.s(keep) > 0.0) ++keep;
  } else {
    keep = d.s.size();
  }
  FactorPair f;
  if (keep == 0) {
    f.u = DenseMatrix::Zero(rows, 1);
    f.v = DenseMatrix::Zero(cols, 1);
  } else {
    const Vector root = d.s.head(keep).cwiseMax(0.0).cwiseSqrt();
    f.u = d.u.leftCols(keep) * root.asDiagonal();
    f.v = d.v.leftCols(keep) * root.asDiagonal();
  }
  f.lambda = std::max(std::sqrt(maxnorm_upper_bound(f)), 1e-300);
  return f;
}

}  // namespace

std::string_view to_string(BaselineMethod method) {
  return method == BaselineMethod::Svt ? "svt" : "svp";
}

double BaselineConfig::resolved_step(const SignedObservations& obs) const {
  if (step > 0.0) return step;
  const double density = sampling_density(obs);
  return method == BaselineMethod::Svt ? 1.2 / density : 0.75 / density;
}

double BaselineConfig::resolved_threshold(const SignedObservations& obs) const {
  if (threshold > 0.0) return threshold;
  return 5.0 * std::sqrt(static_cast<double>(obs.rows()) * static_cast<double>(obs.cols()));
}

void BaselineConfig::validate(const SignedObservations& obs) const {
  if (obs.empty()) throw InputError("baseline fit needs a non-empty set of observations");
  if (step < 0.0 || !std::isfinite(step)) throw InputError("baseline step must be positive");
  if (threshold < 0.0 || !std::isfinite(threshold)) {
    throw InputError("SVT threshold must be positive");
  }
  if (max_iters < 1) throw InputError("baseline max_iters must be at least 1");
  if (!(tolerance > 0.0)) throw InputError("baseline tolerance must be positive");
  if (method == BaselineMethod::Svp) {
    if (rank < 1 || rank > std::min(obs.rows(), obs.cols())) {
      throw InputError("SVP rank must lie in [1, min(p, n)] = [1, " +
                       std::to_string(std::min(obs.rows(), obs.cols())) + "]");
    }
  }
}

DenseMatrix svt_fit(const SignedObservations& obs, const BaselineConfig& cfg) {
  BaselineTrace trace;
  return svt_fit(obs, cfg, trace);
}

DenseMatrix svt_fit(const SignedObservations& obs, const BaselineConfig& cfg, BaselineTrace& trace) {
  cfg.validate(obs);
  const double step = cfg.resolved_step(obs);
  const double threshold = cfg.resolved_threshold(obs);
  trace = BaselineTrace{};
  trace.step = step;

  const DenseMatrix observed = obs.to_dense();
  const double spectral = linalg::spectral_norm(observed);
  const double kick = std::max(1.0, std::ceil(threshold / (step * spectral)));
  DenseMatrix y = kick * step * observed;
  DenseMatrix x = DenseMatrix::Zero(obs.rows(), obs.cols());

  for (int it = 1; it <= cfg.max_iters; ++it) {
    x = shrink(y, threshold);
    const double residual = relative_residual(obs, x);
    trace.relative_residuals.push_back(residual);
    trace.iterations = it;
    check_divergence(residual, "SVT", it);
    if (residual <= cfg.tolerance) {
      trace.converged = true;
      break;
    }
    for (const auto& e : obs.entries()) y(e.row, e.col) += step * (e.sign - x(e.row, e.col));
  }
  return x;
}

FactorPair svp_fit(const SignedObservations& obs, const BaselineConfig& cfg) {
  BaselineTrace trace;
  return svp_fit(obs, cfg, trace);
}

FactorPair svp_fit(const SignedObservations& obs, const BaselineConfig& cfg, BaselineTrace& trace) {
  cfg.validate(obs);
  double step = cfg.resolved_step(obs);
  // With the default step, an iteration that raises the residual is redone
  // with half the step. The residual's gradient is 1-Lipschitz, so steps
  // <= 1 never raise it and the back-off stops there.
  const bool back_off = !(cfg.step > 0.0);
  trace = BaselineTrace{};

  DenseMatrix x = DenseMatrix::Zero(obs.rows(), obs.cols());
  linalg::Svd current{Eigen::MatrixXd::Zero(obs.rows(), 1), Vector::Zero(1),
                      Eigen::MatrixXd::Zero(obs.cols(), 1)};
  double previous = 1.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    DenseMatrix trial;
    linalg::Svd decomposition;
    double residual = 0.0;
    for (;;) {
      trial = x;
      for (const auto& e : obs.entries()) trial(e.row, e.col) -= step * (x(e.row, e.col) - e.sign);
      decomposition = linalg::truncated_svd(trial, cfg.rank);
      trial = linalg::reconstruct(decomposition);
      residual = relative_residual(obs, trial);
      if (!back_off || step <= 1.0 || residual <= previous) break;
      step = std::max(1.0, 0.5 * step);
    }
    x = std::move(trial);
    current = std::move(decomposition);
    trace.relative_residuals.push_back(residual);
    trace.iterations = it;
    check_divergence(residual, "SVP", it);
    if (residual <= cfg.tolerance) {
      trace.converged = true;
      break;
    }
    if (std::abs(previous - residual) <= 1e-10 * previous) break;
    previous = residual;
  }
  trace.step = step;
  return balanced(current, obs.rows(), obs.cols(), false);
}

FactorPair factorize(const DenseMatrix& x) { return balanced(linalg::svd(x), x.rows(), x.cols(), true); }

}  // namespace mmc
