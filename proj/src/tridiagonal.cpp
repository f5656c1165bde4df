#include "tdse/tridiagonal.hpp"

#include <string>

#include "tdse/errors.hpp"

namespace tdse {

namespace {

constexpr double kMinPivot = 1e-14;

}  // namespace

void thomas_solve_into(std::complex<double> alpha, std::span<const std::complex<double>> beta,
                       std::span<const std::complex<double>> r, std::span<std::complex<double>> scratch,
                       std::span<std::complex<double>> x) {
  const std::size_t n = beta.size();
  if (n == 0 || r.size() != n || scratch.size() != n || x.size() != n) {
    throw std::invalid_argument("thomas_solve: size mismatch");
  }

  // Forward sweep: scratch holds the modified super-diagonal c'_j, x holds d'_j.
  std::complex<double> pivot = beta[0];
  if (std::abs(pivot) <= kMinPivot) throw NumericError("vanishing pivot in tridiagonal solve", 0, 0);
  scratch[0] = alpha / pivot;
  x[0] = r[0] / pivot;
  for (std::size_t j = 1; j < n; ++j) {
    pivot = beta[j] - alpha * scratch[j - 1];
    if (std::abs(pivot) <= kMinPivot) {
      throw NumericError("vanishing pivot in tridiagonal solve at row " + std::to_string(j), 0, j);
    }
    scratch[j] = alpha / pivot;
    x[j] = (r[j] - alpha * x[j - 1]) / pivot;
  }

  for (std::size_t j = n - 1; j-- > 0;) x[j] -= scratch[j] * x[j + 1];
}

std::vector<std::complex<double>> thomas_solve(std::complex<double> alpha,
                                               std::span<const std::complex<double>> beta,
                                               std::span<const std::complex<double>> r) {
  std::vector<std::complex<double>> scratch(beta.size());
  std::vector<std::complex<double>> x(beta.size());
  thomas_solve_into(alpha, beta, r, scratch, x);
  return x;
}

}  // namespace tdse
