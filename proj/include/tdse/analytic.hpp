#pragma once

// Closed-form reference solutions used to validate the simulator.

#include <complex>
#include <cstddef>

namespace tdse::analytic {

struct BarrierCoefficients {
  double k;
  double v0;
  double length;
  double T;
  double R;
};

/// Stationary transmission through a square barrier of height v0 and length L,
/// with k' = sqrt|v0 - k^2|:
///
///   k^2 > v0:  T = 1 / (1 + (1/4) (k'/k - k/k')^2 sin^2(k' L))
///   k^2 < v0:  T = 1 / (1 + (1/4) (k'/k + k/k')^2 sinh^2(k' L))
///   k^2 = v0:  T = 1 / (1 + (k L)^2 / 4)        (|k^2 - v0| < 1e-9)
///
/// R = 1 - T. Throws std::invalid_argument for k <= 0, L <= 0 or v0 < 0.
BarrierCoefficients barrier_transmission(double k, double v0, double length);

struct GaussianPacket {
  double center;
  double sigma;
  double k0;
};

/// Free evolution of the normalized packet (2 pi s^2)^(-1/4) exp(-(x-c)^2/(4 s^2) + i k0 x)
/// under i psi_t = -psi_xx:
///
///   psi = (2 pi s^2)^(-1/4) (s / s_t) exp(-(x - c - 2 k0 t)^2 / (4 s_t^2)) exp(i (k0 x - k0^2 t))
///
/// with the complex width s_t^2 = s^2 + i t (group velocity 2 k0).
std::complex<double> free_gaussian_field(const GaussianPacket& packet, double x, double t);

/// Packet between Dirichlet walls at a < b by the method of images:
///   psi = sum_{n=-M..M} [ Phi(x - 2nL) - Phi(2a - x - 2nL) ],  L = b - a.
/// Throws std::invalid_argument when c -+ 5 sigma reaches a wall or n_images < 1.
std::complex<double> box_gaussian_field(double a, double b, const GaussianPacket& packet, double x,
                                        double t, std::size_t n_images);

/// Smallest M for which every neglected image lies at least 8 dispersed widths
/// away from [a, b] at time t.
std::size_t images_needed(double a, double b, const GaussianPacket& packet, double t);

}  // namespace tdse::analytic
