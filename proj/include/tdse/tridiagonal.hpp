#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tdse {

/// Solves  alpha x_{j+1} + beta_j x_j + alpha x_{j-1} = r_j  for j = 0..n-1 with
/// x_{-1} = x_n = 0 (constant off-diagonal, Gauss elimination without pivoting).
///
/// Throws NumericError when a pivot magnitude drops to 1e-14 or below.
std::vector<std::complex<double>> thomas_solve(std::complex<double> alpha,
                                               std::span<const std::complex<double>> beta,
                                               std::span<const std::complex<double>> r);

/// In-place variant used by the stepper: `scratch` must have beta.size() entries,
/// `x` receives the solution (may alias nothing else).
void thomas_solve_into(std::complex<double> alpha, std::span<const std::complex<double>> beta,
                       std::span<const std::complex<double>> r, std::span<std::complex<double>> scratch,
                       std::span<std::complex<double>> x);

}  // namespace tdse
