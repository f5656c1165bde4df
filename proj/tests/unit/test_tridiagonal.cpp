#include <doctest.h>

#include <random>

#include "tdse/errors.hpp"
#include "tdse/tridiagonal.hpp"

using complex = std::complex<double>;

namespace {

// Gaussian elimination with partial pivoting on the full matrix.
std::vector<complex> dense_solve(std::vector<std::vector<complex>> a, std::vector<complex> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const complex f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    complex s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
  const std::vector<complex> beta(6, 1.0);
  const std::vector<complex> r = {1.0, complex(0, 2), -3.0, 4.5, complex(1, -1), 0.0};
  CHECK(tdse::thomas_solve(0.0, beta, r) == r);
}

TEST_CASE("two unknowns against the closed-form 2x2 inverse") {
  const complex a(0.0, -2.0);
  const complex b(1.0, 4.0);
  const std::vector<complex> beta = {b, b};
  const std::vector<complex> r = {1.0, 0.0};
  const auto x = tdse::thomas_solve(a, beta, r);
  const complex det = b * b - a * a;
  CHECK(std::abs(x[0] - b / det) < 1e-15);
  CHECK(std::abs(x[1] + a / det) < 1e-15);
}

TEST_CASE("random systems match a dense solve") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 3u, 17u, 50u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const complex alpha(u(rng), u(rng));
      std::vector<complex> beta(n), r(n);
      for (auto& b : beta) b = complex(u(rng), u(rng)) + 2.5 * std::abs(alpha) * complex(1.0, 1.0);
      for (auto& v : r) v = complex(u(rng), u(rng));
      std::vector<std::vector<complex>> m(n, std::vector<complex>(n));
      for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = beta[i];
        if (i > 0) m[i][i - 1] = alpha;
        if (i + 1 < n) m[i][i + 1] = alpha;
      }
      const auto ref = dense_solve(m, r);
      const auto x = tdse::thomas_solve(alpha, beta, r);
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        err = std::max(err, std::abs(x[i] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
      }
      CHECK(err <= 1e-12 * scale);

      // residual of the tridiagonal system itself
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        complex row = beta[i] * x[i];
        if (i > 0) row += alpha * x[i - 1];
        if (i + 1 < n) row += alpha * x[i + 1];
        res = std::max(res, std::abs(row - r[i]));
      }
      CHECK(res <= 1e-12);
    }
  }
}

TEST_CASE("Crank-Nicolson-shaped systems") {
  // alpha = -2i, beta = 1 + 4i: the free system at dt = 0.01, dx = 0.05
  const std::size_t n = 40;
  const std::vector<complex> beta(n, complex(1.0, 4.0));
  std::vector<complex> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::polar(1.0, 0.3 * static_cast<double>(i));
  const auto x = tdse::thomas_solve(complex(0.0, -2.0), beta, r);
  for (std::size_t i = 0; i < n; ++i) {
    complex row = beta[i] * x[i];
    if (i > 0) row += complex(0.0, -2.0) * x[i - 1];
    if (i + 1 < n) row += complex(0.0, -2.0) * x[i + 1];
    CHECK(std::abs(row - r[i]) < 1e-13);
  }
}

TEST_CASE("vanishing pivots are a numeric failure") {
  const std::vector<complex> first_zero = {0.0, 1.0, 1.0};
  const std::vector<complex> r(3, 1.0);
  CHECK_THROWS_AS(tdse::thomas_solve(1.0, first_zero, r), tdse::NumericError);

  // beta = (1, 1): second pivot 1 - alpha^2 = 0 for alpha = 1
  const std::vector<complex> ones(2, 1.0);
  try {
    tdse::thomas_solve(1.0, ones, std::vector<complex>(2, 1.0));
    FAIL("expected NumericError");
  } catch (const tdse::NumericError& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("size mismatch is a contract violation") {
  const std::vector<complex> beta(3, 2.0);
  const std::vector<complex> r(2, 1.0);
  CHECK_THROWS_AS(tdse::thomas_solve(1.0, beta, r), std::invalid_argument);
}

TEST_CASE("in-place variant agrees with the allocating one") {
  const std::vector<complex> beta = {complex(3, 1), complex(2, -1), complex(4, 0), complex(3, 3)};
  const std::vector<complex> r = {1.0, complex(0, 1), 2.0, -1.0};
  std::vector<complex> scratch(4), x(4);
  tdse::thomas_solve_into(complex(0.5, 0.5), beta, r, scratch, x);
  CHECK(x == tdse::thomas_solve(complex(0.5, 0.5), beta, r));
}
