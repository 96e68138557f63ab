#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbident {

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// grown one row at a time. The leading principal block of the factor is a
/// valid factor of the corresponding leading submatrix, which is what makes
/// nested per-order least squares cheap: one factorization serves every
/// order. Storage is packed row-major (row i holds i+1 entries).
class CholeskyFactor {
 public:
  std::size_t order() const noexcept { return order_; }

  /// Appends the next row of the symmetric matrix (lower half including the
  /// diagonal, so row.size() == order() + 1). Throws RankDeficiencyError when
  /// the new pivot is not safely positive.
  void append_row(std::span<const double> row);

  /// Applies A += v v^T restricted to the leading `order` columns, updating
  /// the factor in place. Rows beyond `order` become stale, so callers that
  /// shrink the active order must not use the larger orders afterwards.
  void rank_one_update(std::span<const double> v, std::size_t order);

  /// Solves A x = b on the leading `order` block.
  std::vector<double> solve(std::span<const double> b, std::size_t order) const;

  /// Factor entry L(i, j) for j <= i < order().
  double entry(std::size_t i, std::size_t j) const { return rows_[i * (i + 1) / 2 + j]; }

 private:
  double& at(std::size_t i, std::size_t j) { return rows_[i * (i + 1) / 2 + j]; }

  std::vector<double> rows_;
  std::size_t order_ = 0;
};

}  // namespace fbident
