#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmc/factor_pair.hpp"
#include "mmc/matrix.hpp"

namespace mmc {

/// One observed 1-bit entry Z_ij.
struct SignedEntry {
  std::int32_t row = 0;
  std::int32_t col = 0;
  std::int8_t sign = 1;  // -1 or +1

  friend bool operator==(const SignedEntry&, const SignedEntry&) = default;
};

/// Position (i, j) in a p x n matrix.
struct Cell {
  std::int32_t row = 0;
  std::int32_t col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Partially observed sign matrix Z restricted to the index set Omega.
///
/// Entries are kept sorted by (row, col). The shape is declared explicitly
/// so rows or columns without any observation still count. Immutable after
/// construction; concurrent reads are safe.
class SignedObservations {
 public:
  SignedObservations() = default;

  /// Throws InputError on an out-of-range index, a duplicate (i, j) or a
  /// sign other than -1/+1.
  SignedObservations(Index rows, Index cols, std::vector<SignedEntry> entries);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::span<const SignedEntry> entries() const noexcept { return entries_; }
  const SignedEntry& operator[](std::size_t k) const noexcept { return entries_[k]; }

  std::vector<Cell> cells() const;

  /// Dense p x n matrix holding the observed signs and zeros elsewhere, i.e. P_Omega(Z).
  DenseMatrix to_dense() const;

  std::size_t positive_count() const noexcept;

  friend bool operator==(const SignedObservations&, const SignedObservations&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<SignedEntry> entries_;
};

/// P_Omega(M): M on the listed cells, exactly zero elsewhere.
DenseMatrix project_omega(const DenseMatrix& m, std::span<const Cell> omega);

/// r_k = u_(i) . v_(j) - Z_ij for the k-th observed entry, same order as obs.
std::vector<double> residuals_on_omega(const SignedObservations& obs, const FactorPair& f);

/// As above, writing into a caller-owned buffer (resized to obs.size()).
void residuals_on_omega(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v,
                        std::vector<double>& out);

/// f(Z, U, V) = 1/2 ||P_Omega(Z - U V^T)||_F^2, evaluated over Omega only.
double objective(const SignedObservations& obs, const FactorPair& f);
double objective(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v);

/// Throws DimensionError unless U is p x d and V is n x d for the same d.
void check_factor_shapes(const SignedObservations& obs, const DenseMatrix& u, const DenseMatrix& v);

}  // namespace mmc
