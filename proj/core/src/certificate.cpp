#include "mmc/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mmc/errors.hpp"
#include "mmc/linalg.hpp"

namespace mmc {
namespace {

void require_symmetric(const DenseMatrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw InputError(std::string("witness block ") + name + " is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double skew = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "witness block " << name << " is not symmetric (max |M - M^T| = " << skew << ")";
    throw InputError(msg.str());
  }
}

DenseMatrix gram(const DenseMatrix& rows_a, const DenseMatrix& rows_b) {
  DenseMatrix g = rows_a * rows_b.transpose();
  return g;
}

// Gram matrix made exactly symmetric by mirroring the lower triangle.
DenseMatrix symmetric_gram(const DenseMatrix& rows) {
  DenseMatrix g = gram(rows, rows);
  for (Index i = 0; i < g.rows(); ++i) {
    for (Index j = i + 1; j < g.cols(); ++j) g(i, j) = g(j, i);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Max-norm oracle.
//
// ||m||_max <= t iff some [A m; m^T B] is PSD with diagonal t. Writing
// the block as t I + H with H zero on the diagonal gives
//   ||m||_max = min over the free off-diagonal entries of lambda_max(-H),
// a convex problem. It is smoothed with a log-sum-exp of the eigenvalues and
// minimized by BFGS while the sharpness beta increases.

class CompletionProblem {
 public:
  explicit CompletionProblem(const DenseMatrix& target)
      : m_(target), p_(target.rows()), n_(target.cols()) {
    for (Index i = 0; i < p_; ++i) {
      for (Index j = i + 1; j < p_; ++j) slots_.emplace_back(i, j);
    }
    for (Index i = 0; i < n_; ++i) {
      for (Index j = i + 1; j < n_; ++j) slots_.emplace_back(p_ + i, p_ + j);
    }
  }

  Index size() const { return static_cast<Index>(slots_.size()); }

  // -H for the free entries x.
  DenseMatrix negated_block(const Vector& x) const {
    DenseMatrix h = DenseMatrix::Zero(p_ + n_, p_ + n_);
    h.topRightCorner(p_, n_) = -m_;
    h.bottomLeftCorner(n_, p_) = -m_.transpose();
    for (Index k = 0; k < size(); ++k) {
      const auto [i, j] = slots_[static_cast<std::size_t>(k)];
      h(i, j) = -x(k);
      h(j, i) = -x(k);
    }
    return h;
  }

  double exact(const Vector& x) const {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(negated_block(x), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }

  // Smoothed lambda_max and its gradient.
  double smoothed(const Vector& x, double beta, Vector& grad) const {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(negated_block(x));
    const Vector& mu = eig.eigenvalues();
    const double top = mu.maxCoeff();
    const Vector weights = (beta * (mu.array() - top)).exp().matrix();
    const double total = weights.sum();
    const DenseMatrix& q = eig.eigenvectors();
    const DenseMatrix proj = q * (weights / total).asDiagonal() * q.transpose();
    grad.resize(size());
    for (Index k = 0; k < size(); ++k) {
      const auto [i, j] = slots_[static_cast<std::size_t>(k)];
      grad(k) = -2.0 * proj(i, j);
    }
    return top + std::log(total) / beta;
  }

  // Free entries of the Gram blocks of a balanced SVD factorization.
  Vector balanced_start() const {
    const linalg::Svd d = linalg::svd(m_);
    const Vector root = d.s.cwiseMax(0.0).cwiseSqrt();
    const DenseMatrix u = d.u * root.asDiagonal();
    const DenseMatrix v = d.v * root.asDiagonal();
    DenseMatrix w(p_ + n_, u.cols());
    w.topRows(p_) = u;
    w.bottomRows(n_) = v;
    const DenseMatrix g = w * w.transpose();
    Vector x(size());
    for (Index k = 0; k < size(); ++k) {
      const auto [i, j] = slots_[static_cast<std::size_t>(k)];
      x(k) = g(i, j);
    }
    return x;
  }

 private:
  DenseMatrix m_;
  Index p_;
  Index n_;
  std::vector<std::pair<Index, Index>> slots_;
};

// BFGS with Armijo backtracking on the smoothed objective.
void minimize_smoothed(const CompletionProblem& problem, Vector& x, double beta, int max_iters) {
  const Index dim = x.size();
  DenseMatrix inverse = DenseMatrix::Identity(dim, dim) / beta;
  Vector grad;
  double value = problem.smoothed(x, beta, grad);
  Vector trial_grad;
  for (int it = 0; it < max_iters; ++it) {
    if (grad.norm() <= 1e-12) break;
    Vector dir = -inverse * grad;
    double slope = grad.dot(dir);
    if (slope >= 0.0) {
      inverse = DenseMatrix::Identity(dim, dim) / beta;
      dir = -grad / beta;
      slope = grad.dot(dir);
    }
    double alpha = 1.0;
    Vector trial;
    double trial_value = value;
    bool accepted = false;
    while (alpha > 1e-14) {
      trial = x + alpha * dir;
      trial_value = problem.smoothed(trial, beta, trial_grad);
      if (trial_value <= value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const Vector s = trial - x;
    const Vector y = trial_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      const Vector hy = inverse * y;
      const double rho = 1.0 / sy;
      inverse += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                 rho * (hy * s.transpose() + s * hy.transpose());
    }
    const double decrease = value - trial_value;
    x = std::move(trial);
    grad = trial_grad;
    value = trial_value;
    if (decrease <= 1e-15 * (1.0 + std::abs(value))) break;
  }
}

double oracle_restart(const CompletionProblem& problem, int index, std::uint64_t seed) {
  Vector x = problem.balanced_start();
  if (index > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.5);
    for (Index k = 0; k < x.size(); ++k) x(k) += normal(rng);
  }
  double best = problem.exact(x);
  for (double beta = 10.0; beta <= 1e6; beta *= 10.0) {
    minimize_smoothed(problem, x, beta, 500);
    best = std::min(best, problem.exact(x));
  }
  return best;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

DenseMatrix SdpWitness::block() const {
  const Index p = a.rows();
  const Index n = b.rows();
  DenseMatrix out(p + n, p + n);
  out.topLeftCorner(p, p) = a;
  out.topRightCorner(p, n) = x;
  out.bottomLeftCorner(n, p) = x.transpose();
  out.bottomRightCorner(n, n) = b;
  return out;
}

double maxnorm_upper_bound(const DenseMatrix& u, const DenseMatrix& v) {
  const double nu = max_row_norm(u);
  const double nv = max_row_norm(v);
  return std::max(nu * nu, nv * nv);
}

double maxnorm_upper_bound(const FactorPair& f) { return maxnorm_upper_bound(f.u, f.v); }

SdpWitness witness_from_factors(const FactorPair& f) {
  if (f.u.cols() != f.v.cols()) throw DimensionError("factor ranks differ");
  return SdpWitness{symmetric_gram(f.u), gram(f.u, f.v), symmetric_gram(f.v)};
}

WitnessCheck check_witness(const SdpWitness& w, double lambda, double tol) {
  if (!(tol >= 0.0)) throw InputError("witness tolerance must be nonnegative");
  require_symmetric(w.a, "A");
  require_symmetric(w.b, "B");
  if (w.x.rows() != w.a.rows() || w.x.cols() != w.b.rows()) {
    throw InputError("witness block X has shape inconsistent with A and B");
  }

  WitnessCheck check;
  const DenseMatrix block = w.block();
  const double trace = block.trace();
  check.diagonal_limit = lambda * lambda + tol;
  check.psd_tolerance = tol * std::max(1.0, trace);
  check.max_diagonal = block.rows() == 0 ? 0.0 : block.diagonal().maxCoeff();
  check.min_eigenvalue = linalg::min_eigenvalue(block);

  std::ostringstream msg;
  msg.precision(17);
  for (Index k = 0; k < block.rows(); ++k) {
    if (block(k, k) > check.diagonal_limit) {
      const bool in_a = k < w.a.rows();
      const Index local = in_a ? k : k - w.a.rows();
      msg << "diagonal bound violated: " << (in_a ? "A" : "B") << "(" << local << "," << local
          << ") = " << block(k, k) << " > lambda^2 + tol = " << check.diagonal_limit;
      check.violation = WitnessViolation::DiagonalBound;
      check.diagnostic = msg.str();
      return check;
    }
  }
  if (check.min_eigenvalue < -check.psd_tolerance) {
    msg << "block matrix not PSD: min eigenvalue " << check.min_eigenvalue << " < -"
        << check.psd_tolerance;
    check.violation = WitnessViolation::NotPsd;
    check.diagnostic = msg.str();
    return check;
  }
  check.passed = true;
  check.diagnostic = "ok";
  return check;
}

double maxnorm_oracle_small(const DenseMatrix& m, int restarts, std::uint64_t seed) {
  if (m.rows() < 1 || m.cols() < 1) throw InputError("max-norm oracle needs a non-empty matrix");
  if (m.rows() > kOracleMaxDim || m.cols() > kOracleMaxDim) {
    throw InputError("max-norm oracle is limited to " + std::to_string(kOracleMaxDim) + " x " +
                     std::to_string(kOracleMaxDim) + " matrices");
  }
  if (restarts < 1) throw InputError("max-norm oracle needs at least one restart");
  if (!m.allFinite()) throw InputError("max-norm oracle input has non-finite entries");
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // The norm is absolutely homogeneous: solve for m / max|m_ij| and rescale.
  const double scale = m.cwiseAbs().maxCoeff();
  const CompletionProblem problem(m / scale);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    best = std::min(best, oracle_restart(problem, r, mix_seed(seed, static_cast<std::uint64_t>(r))));
  }
  if (!std::isfinite(best)) throw NumericalError("max-norm oracle: non-finite bound");
  // Any completion is an exact factorization, so best is an upper bound;
  // it can only dip below max|m_ij| by rounding.
  return std::max(best, 1.0) * scale;
}

}  // namespace mmc
