#include "mmc/observations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmc/errors.hpp"

namespace mmc {

double max_row_norm(const DenseMatrix& m) {
  if (m.rows() == 0) return 0.0;
  return m.rowwise().norm().maxCoeff();
}

bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

SignedObservations::SignedObservations(Index rows, Index cols, std::vector<SignedEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw InputError("observation shape must be nonnegative");
  for (const auto& e : entries_) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw InputError("observed entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                       ") outside " + std::to_string(rows) + " x " + std::to_string(cols));
    }
    if (e.sign != 1 && e.sign != -1) {
      throw InputError("observed entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                       ") has sign " + std::to_string(e.sign) + ", expected -1 or +1");
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const SignedEntry& a, const SignedEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const SignedEntry& a, const SignedEntry& b) {
                                  return a.row == b.row && a.col == b.col;
                                });
  if (dup != entries_.end()) {
    throw InputError("duplicate observed entry (" + std::to_string(dup->row) + ", " +
                     std::to_string(dup->col) + ")");
  }
}

std::vector<Cell> SignedObservations::cells() const {
  std::vector<Cell> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back({e.row, e.col});
  return out;
}

DenseMatrix SignedObservations::to_dense() const {
  DenseMatrix m = DenseMatrix::Zero(rows_, cols_);
  for (const auto& e : entries_) m(e.row, e.col) = e.sign;
  return m;
}

std::size_t SignedObservations::positive_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const SignedEntry& e) { return e.sign > 0; }));
}

DenseMatrix project_omega(const DenseMatrix& m, std::span<const Cell> omega) {
  DenseMatrix out = DenseMatrix::Zero(m.rows(), m.cols());
  for (const auto& c : omega) {
    if (c.row < 0 || c.row >= m.rows() || c.col < 0 || c.col >= m.cols()) {
      throw DimensionError("index (" + std::to_string(c.row) + ", " + std::to_string(c.col) +
                           ") outside " + std::to_string(m.rows()) + " x " +
                           std::to_string(m.cols()) + " matrix");
    }
    out(c.row, c.col) = m(c.row, c.col);
  }
  return out;
}

void check_factor_shapes(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v) {
  if (u.rows() != obs.rows() || v.rows() != obs.cols() || u.cols() != v.cols()) {
    throw DimensionError("factor shapes U " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + ", V " + std::to_string(v.rows()) + "x" +
                         std::to_string(v.cols()) + " do not match observations " +
                         std::to_string(obs.rows()) + "x" + std::to_string(obs.cols()));
  }
}

void residuals_on_omega(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v,
                        std::vector<double>& out) {
  check_factor_shapes(obs, u, v);
  out.resize(obs.size());
  const auto entries = obs.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    out[k] = u.row(e.row).dot(v.row(e.col)) - e.sign;
  }
}

std::vector<double> residuals_on_omega(const SignedObservations& obs, const FactorPair& f) {
  std::vector<double> out;
  residuals_on_omega(obs, f.u, f.v, out);
  return out;
}

double objective(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v) {
  check_factor_shapes(obs, u, v);
  double sum = 0.0;
  for (const auto& e : obs.entries()) {
    const double r = u.row(e.row).dot(v.row(e.col)) - e.sign;
    sum += r * r;
  }
  return 0.5 * sum;
}

double objective(const SignedObservations& obs, const FactorPair& f) {
  return objective(obs, f.u, f.v);
}

}  // namespace mmc
