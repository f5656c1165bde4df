#pragma once

// Lattice, wave field and initial-condition constructors.
//
// Everything is in reduced units: hbar = 1, 2m = 1, so the equation being
// integrated is  i dpsi/dt = -d2psi/dx2 + V psi.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace tdse {

using complex = std::complex<double>;

/// Uniform closed lattice x_j = x0 + j*dx, j = 0..N (n_points = N+1).
class SpatialGrid {
 public:
  SpatialGrid(double x0, double dx, std::size_t n_points);

  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return dx_; }
  std::size_t n_points() const noexcept { return n_points_; }
  /// Index of the last lattice point (N).
  std::size_t last() const noexcept { return n_points_ - 1; }
  double x_max() const noexcept { return position(last()); }

  double position(std::size_t j) const noexcept { return x0_ + static_cast<double>(j) * dx_; }

  /// Nearest lattice index to x; throws ConfigError when x lies outside the grid.
  std::size_t nearest_index(double x) const;

  /// True when x coincides with a lattice point up to a small fraction of dx.
  bool on_lattice(double x) const noexcept;

  std::vector<double> positions() const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  double x0_;
  double dx_;
  std::size_t n_points_;
};

/// Closed grid covering [x_min, x_max]; x_max is moved down to the last lattice
/// point so that dx stays exactly as configured.
SpatialGrid build_grid(double x_min, double x_max, double dx);

struct TimeGrid {
  double dt;
  std::size_t n_steps;

  TimeGrid(double dt, std::size_t n_steps);

  /// t_k = k*dt, computed by multiplication so it never accumulates rounding.
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
};

/// Complex amplitudes psi_j on a lattice. Immutable after construction.
class WaveField {
 public:
  WaveField(SpatialGrid grid, std::vector<complex> values);

  static WaveField zeros(const SpatialGrid& grid);

  const SpatialGrid& grid() const noexcept { return grid_; }
  std::span<const complex> values() const noexcept { return values_; }
  const complex& operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  SpatialGrid grid_;
  std::vector<complex> values_;
};

// --- incident wave -----------------------------------------------------------

struct UniformFront {};
/// g(x) = 1 up to x_g, then exp(-(x - x_g)^2 / l_g^2).
struct GaussianFront {
  double x_g;
  double l_g;
};
struct EmptyFront {};

using Front = std::variant<UniformFront, GaussianFront, EmptyFront>;

/// How the incident plane wave's time dependence is chosen.
enum class Dispersion {
  /// omega = k^2, the free-particle relation of the continuum equation.
  Continuum,
  /// omega of the Crank-Nicolson lattice plane wave exp(i k x_j); the injected
  /// wave is then an exact solution of the discrete free equation.
  Lattice,
};

struct SourceSpec {
  complex amplitude{1.0, 0.0};
  double wavevector = 0.0;
  std::size_t s_index = 0;
  Front front = UniformFront{};
  /// Angular frequency of the incident wave; k^2 when unset.
  std::optional<double> frequency;

  double omega() const noexcept { return frequency ? *frequency : wavevector * wavevector; }
  complex incident(double x, double t) const;
};

/// Throws ConfigError unless 1 <= s <= N-3 and the front is well-formed.
void validate_source(const SpatialGrid& grid, const SourceSpec& source);

/// A exp(i (k x - k^2 t)).
complex plane_wave_value(complex amplitude, double k, double x, double t);
/// A exp(i (k x - omega t)).
complex plane_wave_value(complex amplitude, double k, double omega, double x, double t);

/// Frequency at which exp(i k x_j) is an exact eigen-solution of the
/// Crank-Nicolson free propagator with steps dx, dt.
double lattice_frequency(double k, double dx, double dt);

/// Front shape g(x) for x > x_s; g(x_g) = 1.
double front_profile(const Front& front, double x, double x_s);

/// psi_j = 0 for j <= s and Phi0(x_j, 0) g(x_j) beyond the source.
WaveField initial_injected_state(const SpatialGrid& grid, const SourceSpec& source);

/// Normalized Gaussian packet (2 pi sigma^2)^(-1/4) exp(-(x-c)^2/(4 sigma^2) + i k0 x).
/// Throws ConfigError if center +- 5 sigma leaves the grid or the lattice is too
/// coarse to hold the discrete norm within 1e-6 of one.
WaveField gaussian_packet(const SpatialGrid& grid, double center, double sigma, double k0);

}  // namespace tdse
