#include "tdse/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdse::analytic {

namespace {

constexpr double kDegenerateGap = 1e-9;

}  // namespace

BarrierCoefficients barrier_transmission(double k, double v0, double length) {
  if (!(k > 0.0)) throw std::invalid_argument("barrier_transmission: k must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("barrier_transmission: L must be positive");
  if (!(v0 >= 0.0)) throw std::invalid_argument("barrier_transmission: v0 must be >= 0");

  const double gap = k * k - v0;
  double T = 1.0;
  if (std::abs(gap) < kDegenerateGap) {
    const double kl = k * length;
    T = 1.0 / (1.0 + 0.25 * kl * kl);
  } else {
    const double kp = std::sqrt(std::abs(gap));
    if (gap > 0.0) {
      const double bracket = kp / k - k / kp;
      const double s = std::sin(kp * length);
      T = 1.0 / (1.0 + 0.25 * bracket * bracket * s * s);
    } else {
      const double bracket = kp / k + k / kp;
      const double s = std::sinh(kp * length);
      T = 1.0 / (1.0 + 0.25 * bracket * bracket * s * s);
    }
  }
  return {k, v0, length, T, 1.0 - T};
}

std::complex<double> free_gaussian_field(const GaussianPacket& p, double x, double t) {
  using cd = std::complex<double>;
  const double s2 = p.sigma * p.sigma;
  const cd st2(s2, t);
  const double prefactor = std::pow(2.0 * std::numbers::pi * s2, -0.25);
  const double xi = x - p.center - 2.0 * p.k0 * t;
  const cd envelope = std::sqrt(cd(s2, 0.0) / st2) * std::exp(-xi * xi / (4.0 * st2));
  return prefactor * envelope * std::exp(cd(0.0, p.k0 * x - p.k0 * p.k0 * t));
}

std::complex<double> box_gaussian_field(double a, double b, const GaussianPacket& p, double x, double t,
                                        std::size_t n_images) {
  if (!(a < b)) throw std::invalid_argument("box_gaussian_field: walls need a < b");
  if (n_images < 1) throw std::invalid_argument("box_gaussian_field: need at least one image pair");
  if (p.center - 5.0 * p.sigma < a || p.center + 5.0 * p.sigma > b) {
    throw std::invalid_argument("box_gaussian_field: packet overlaps a wall within 5 sigma");
  }
  const double period = 2.0 * (b - a);
  const auto m = static_cast<long>(n_images);
  std::complex<double> sum{};
  for (long n = -m; n <= m; ++n) {
    const double shift = static_cast<double>(n) * period;
    sum += free_gaussian_field(p, x - shift, t) - free_gaussian_field(p, 2.0 * a - x - shift, t);
  }
  return sum;
}

std::size_t images_needed(double a, double b, const GaussianPacket& p, double t) {
  const double width = std::sqrt(p.sigma * p.sigma + t * t / (p.sigma * p.sigma));
  const double period = 2.0 * (b - a);
  const double drift = p.center + 2.0 * p.k0 * t;
  const double mirrored = 2.0 * a - drift;
  // Centre of the n-th direct image is drift + 2nL; of the n-th mirrored image
  // mirrored + 2nL (evaluated at x, as functions of x).
  auto gap = [&](double centre) {
    if (centre < a) return a - centre;
    if (centre > b) return centre - b;
    return 0.0;
  };
  for (std::size_t m = 1; m < 100000; ++m) {
    const double nm = static_cast<double>(m + 1);
    const double nearest = std::min({gap(drift + nm * period), gap(drift - nm * period),
                                     gap(mirrored + nm * period), gap(mirrored - nm * period)});
    if (nearest >= 8.0 * width) return m;
  }
  throw std::invalid_argument("images_needed: packet disperses too fast for an image sum");
}

}  // namespace tdse::analytic
