#include <cmath>
#include <cstddef>
#include <vector>

#include <doctest.h>

#include "fbident/cholesky.hpp"
#include "fbident/errors.hpp"
#include "oracles.hpp"

using fbident::CholeskyFactor;
using fbident::RankDeficiencyError;

namespace {

// Dense symmetric matrix helper: packed lower rows -> full storage.
struct Sym {
  std::size_t n;
  std::vector<double> a;  // n x n, row-major, kept symmetric

  explicit Sym(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// A = B^T B + diag shift so random instances are comfortably positive definite.
Sym random_spd(oracle::Rng& rng, std::size_t n) {
  std::vector<double> b(n * n);
  for (double& v : b) v = oracle::uniform(rng, -1.0, 1.0);
  Sym a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += b[k * n + i] * b[k * n + j];
      a.at(i, j) = acc + (i == j ? 0.5 : 0.0);
    }
  }
  return a;
}

CholeskyFactor factor_of(const Sym& a) {
  CholeskyFactor chol;
  for (std::size_t i = 0; i < a.n; ++i) {
    std::vector<double> row(a.a.begin() + static_cast<std::ptrdiff_t>(i * a.n),
                            a.a.begin() + static_cast<std::ptrdiff_t>(i * a.n + i + 1));
    chol.append_row(row);
  }
  return chol;
}

std::vector<double> dense_solve(const Sym& a, std::size_t order, std::vector<double> b) {
  std::vector<std::vector<double>> rows(order, std::vector<double>(order));
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j) rows[i][j] = a.at(i, j);
  }
  return oracle::gauss_solve(rows, b);
}

}  // namespace

TEST_CASE("hand-checked 3x3 factor") {
  CholeskyFactor chol;
  chol.append_row(std::vector<double>{4.0});
  chol.append_row(std::vector<double>{2.0, 10.0});
  chol.append_row(std::vector<double>{-2.0, 2.0, 5.0});

  REQUIRE(chol.order() == 3);
  CHECK(chol.entry(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(chol.entry(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(chol.entry(1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(chol.entry(2, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(chol.entry(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(chol.entry(2, 2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("append_row rejects rows of the wrong length") {
  CholeskyFactor chol;
  CHECK_THROWS_AS(chol.append_row(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(chol.append_row(std::vector<double>{1.0, 2.0}), std::invalid_argument);
  chol.append_row(std::vector<double>{1.0});
  CHECK_THROWS_AS(chol.append_row(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("non-positive leading pivot is reported at column 0") {
  for (const double pivot : {0.0, -1.0}) {
    CholeskyFactor chol;
    try {
      chol.append_row(std::vector<double>{pivot});
      FAIL("expected RankDeficiencyError");
    } catch (const RankDeficiencyError& e) {
      CHECK(e.column() == 0);
    }
    CHECK(chol.order() == 0);
  }
}

TEST_CASE("dependent second column is reported and rolled back") {
  // [[1, 1], [1, 1]] is singular: the second pivot collapses to zero.
  CholeskyFactor chol;
  chol.append_row(std::vector<double>{1.0});
  try {
    chol.append_row(std::vector<double>{1.0, 1.0});
    FAIL("expected RankDeficiencyError");
  } catch (const RankDeficiencyError& e) {
    CHECK(e.column() == 1);
  }

  // The failed append must not corrupt the factor: order is unchanged and an
  // independent row still appends cleanly.
  REQUIRE(chol.order() == 1);
  chol.append_row(std::vector<double>{1.0, 2.0});
  CHECK(chol.order() == 2);
  CHECK(chol.entry(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(chol.entry(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("every leading block factors its leading submatrix") {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = oracle::pick(rng, 1, 8);
    const Sym a = random_spd(rng, n);
    const CholeskyFactor chol = factor_of(a);

    // L L^T restricted to any leading block reproduces that block of A.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= j; ++k) acc += chol.entry(i, k) * chol.entry(j, k);
        CHECK(acc == doctest::Approx(a.at(i, j)).epsilon(1e-10));
      }
    }

    // Solves agree with Gaussian elimination at every order.
    std::vector<double> b(n);
    for (double& v : b) v = oracle::uniform(rng, -2.0, 2.0);
    for (std::size_t order = 1; order <= n; ++order) {
      const std::vector<double> got =
          chol.solve(std::vector<double>(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(order)),
                     order);
      const std::vector<double> want =
          dense_solve(a, order, std::vector<double>(b.begin(),
                                                    b.begin() + static_cast<std::ptrdiff_t>(order)));
      REQUIRE(got.size() == order);
      for (std::size_t i = 0; i < order; ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("solve validates order and right-hand side") {
  CholeskyFactor chol;
  chol.append_row(std::vector<double>{4.0});
  CHECK_THROWS_AS(chol.solve(std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(chol.solve(std::vector<double>{1.0, 2.0}, 1), std::invalid_argument);
}

TEST_CASE("rank-one update matches refactoring the updated matrix") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = oracle::pick(rng, 1, 7);
    const Sym a = random_spd(rng, n);
    const CholeskyFactor base = factor_of(a);

    std::vector<double> v(n);
    for (double& x : v) x = oracle::uniform(rng, -1.0, 1.0);

    // Full-order update against a fresh factor of A + v v^T.
    {
      CholeskyFactor chol = base;
      chol.rank_one_update(v, n);
      Sym updated = a;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) updated.at(i, j) += v[i] * v[j];
      }
      const CholeskyFactor fresh = factor_of(updated);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          CHECK(chol.entry(i, j) == doctest::Approx(fresh.entry(i, j)).epsilon(1e-9));
        }
      }
    }

    // Update restricted to a leading block; rows beyond it are stale by
    // contract, so only the block is compared and solved.
    {
      const std::size_t k = oracle::pick(rng, 1, n);
      CholeskyFactor chol = base;
      chol.rank_one_update(
          std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k)), k);
      Sym ak(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) ak.at(i, j) = a.at(i, j) + v[i] * v[j];
      }
      const CholeskyFactor fresh = factor_of(ak);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          CHECK(chol.entry(i, j) == doctest::Approx(fresh.entry(i, j)).epsilon(1e-9));
        }
      }
      std::vector<double> b(k);
      for (double& x : b) x = oracle::uniform(rng, -1.0, 1.0);
      const std::vector<double> got = chol.solve(b, k);
      const std::vector<double> want = dense_solve(ak, k, b);
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("rank-one update validates its arguments") {
  CholeskyFactor chol;
  chol.append_row(std::vector<double>{4.0});
  chol.append_row(std::vector<double>{2.0, 10.0});
  CHECK_THROWS_AS(chol.rank_one_update(std::vector<double>{1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(chol.rank_one_update(std::vector<double>{1.0, 2.0, 3.0}, 3),
                  std::invalid_argument);
}
