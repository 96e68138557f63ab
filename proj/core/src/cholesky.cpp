#include "fbident/cholesky.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fbident/errors.hpp"

namespace fbident {
namespace {

// A pivot below this fraction of the original diagonal entry is treated as a
// numerically dead direction rather than folded into a huge, meaningless
// solution.
constexpr double kPivotTol = 1e-13;

}  // namespace

void CholeskyFactor::append_row(std::span<const double> row) {
  if (row.size() != order_ + 1) {
    throw std::invalid_argument("expected a row of " + std::to_string(order_ + 1) +
                                " entries, got " + std::to_string(row.size()));
  }
  const std::size_t n = order_;
  rows_.resize(rows_.size() + n + 1, 0.0);
  // Left-looking update: L(n,j) = (A(n,j) - sum_k L(n,k) L(j,k)) / L(j,j).
  for (std::size_t j = 0; j < n; ++j) {
    double sum = row[j];
    for (std::size_t k = 0; k < j; ++k) {
      sum -= at(n, k) * entry(j, k);
    }
    at(n, j) = sum / entry(j, j);
  }
  double diag = row[n];
  for (std::size_t k = 0; k < n; ++k) {
    diag -= at(n, k) * at(n, k);
  }
  if (!(diag > 0.0) || diag <= row[n] * kPivotTol) {
    rows_.resize(rows_.size() - (n + 1));
    throw RankDeficiencyError("matrix is not positive definite at column " + std::to_string(n),
                              n);
  }
  at(n, n) = std::sqrt(diag);
  ++order_;
}

void CholeskyFactor::rank_one_update(std::span<const double> v, std::size_t order) {
  if (order > order_ || v.size() != order) {
    throw std::invalid_argument("rank-one update size mismatch");
  }
  std::vector<double> w(v.begin(), v.end());
  for (std::size_t k = 0; k < order; ++k) {
    const double lkk = entry(k, k);
    const double r = std::hypot(lkk, w[k]);
    const double c = r / lkk;
    const double s = w[k] / lkk;
    at(k, k) = r;
    for (std::size_t i = k + 1; i < order; ++i) {
      at(i, k) = (entry(i, k) + s * w[i]) / c;
      w[i] = c * w[i] - s * entry(i, k);
    }
  }
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b, std::size_t order) const {
  if (order > order_ || b.size() != order) {
    throw std::invalid_argument("solve size mismatch");
  }
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < order; ++i) {
    double sum = x[i];
    for (std::size_t k = 0; k < i; ++k) {
      sum -= entry(i, k) * x[k];
    }
    x[i] = sum / entry(i, i);
  }
  for (std::size_t ii = order; ii-- > 0;) {
    double sum = x[ii];
    for (std::size_t k = ii + 1; k < order; ++k) {
      sum -= entry(k, ii) * x[k];
    }
    x[ii] = sum / entry(ii, ii);
  }
  return x;
}

}  // namespace fbident
