#include "tdse/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tdse/errors.hpp"

namespace tdse {

namespace {

// Fraction of dx below which a coordinate is considered to sit on a lattice point.
constexpr double kLatticeTolerance = 1e-6;

}  // namespace

SpatialGrid::SpatialGrid(double x0, double dx, std::size_t n_points)
    : x0_(x0), dx_(dx), n_points_(n_points) {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw ConfigError("grid: dx must be positive, got " + std::to_string(dx));
  }
  if (!std::isfinite(x0)) throw ConfigError("grid: x0 must be finite");
  if (n_points < 3) {
    throw ConfigError("grid: need at least 3 lattice points (one interior), got " + std::to_string(n_points));
  }
}

std::size_t SpatialGrid::nearest_index(double x) const {
  const double u = (x - x0_) / dx_;
  if (!(u > -0.5) || !(u < static_cast<double>(n_points_) - 0.5)) {
    throw ConfigError("coordinate " + std::to_string(x) + " lies outside the grid");
  }
  return static_cast<std::size_t>(std::lround(u));
}

bool SpatialGrid::on_lattice(double x) const noexcept {
  const double u = (x - x0_) / dx_;
  if (u < -kLatticeTolerance || u > static_cast<double>(last()) + kLatticeTolerance) return false;
  return std::abs(u - std::round(u)) <= kLatticeTolerance;
}

std::vector<double> SpatialGrid::positions() const {
  std::vector<double> xs(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) xs[j] = position(j);
  return xs;
}

SpatialGrid build_grid(double x_min, double x_max, double dx) {
  if (!(dx > 0.0)) throw ConfigError("grid.dx must be positive");
  if (!(x_max > x_min)) throw ConfigError("grid.x_max must exceed grid.x_min");
  // A ratio like 60/0.05 can come out as 1199.9999999999998; nudge before flooring.
  const double cells = std::floor((x_max - x_min) / dx + 1e-9);
  return SpatialGrid(x_min, dx, static_cast<std::size_t>(cells) + 1);
}

TimeGrid::TimeGrid(double dt_, std::size_t n_steps_) : dt(dt_), n_steps(n_steps_) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time.dt must be positive");
}

WaveField::WaveField(SpatialGrid grid, std::vector<complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_points()) {
    throw ConfigError("wave field has " + std::to_string(values_.size()) + " values for a grid of " +
                      std::to_string(grid_.n_points()) + " points");
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag())) {
      throw NumericError("non-finite amplitude at lattice index " + std::to_string(j), 0, j);
    }
  }
}

WaveField WaveField::zeros(const SpatialGrid& grid) {
  return WaveField(grid, std::vector<complex>(grid.n_points()));
}

complex SourceSpec::incident(double x, double t) const {
  return plane_wave_value(amplitude, wavevector, omega(), x, t);
}

void validate_source(const SpatialGrid& grid, const SourceSpec& source) {
  const std::size_t n = grid.last();
  if (source.s_index < 1 || source.s_index + 3 > n) {
    throw ConfigError("mode.x_source: injection index " + std::to_string(source.s_index) +
                      " must lie in [1, " + std::to_string(n >= 3 ? n - 3 : 0) + "]");
  }
  if (!std::isfinite(source.wavevector)) throw ConfigError("mode.k must be finite");
  if (const auto* g = std::get_if<GaussianFront>(&source.front)) {
    if (!(g->l_g > 0.0)) throw ConfigError("mode.l_g must be positive");
    if (!(g->x_g > grid.position(source.s_index))) {
      throw ConfigError("mode.x_g must lie to the right of the injection point");
    }
  }
}

complex plane_wave_value(complex amplitude, double k, double x, double t) {
  return plane_wave_value(amplitude, k, k * k, x, t);
}

complex plane_wave_value(complex amplitude, double k, double omega, double x, double t) {
  return amplitude * std::exp(complex(0.0, k * x - omega * t));
}

double lattice_frequency(double k, double dx, double dt) {
  const double s = std::sin(0.5 * k * dx);
  const double lambda = 4.0 * s * s / (dx * dx);
  return 2.0 / dt * std::atan(0.5 * dt * lambda);
}

double front_profile(const Front& front, double x, double /*x_s*/) {
  struct Visitor {
    double x;
    double operator()(const UniformFront&) const { return 1.0; }
    double operator()(const EmptyFront&) const { return 0.0; }
    double operator()(const GaussianFront& g) const {
      if (x <= g.x_g) return 1.0;
      const double u = (x - g.x_g) / g.l_g;
      return std::exp(-u * u);
    }
  };
  return std::visit(Visitor{x}, front);
}

WaveField initial_injected_state(const SpatialGrid& grid, const SourceSpec& source) {
  validate_source(grid, source);
  const double x_s = grid.position(source.s_index);
  std::vector<complex> values(grid.n_points());
  for (std::size_t j = source.s_index + 1; j < grid.n_points(); ++j) {
    const double x = grid.position(j);
    values[j] = source.incident(x, 0.0) * front_profile(source.front, x, x_s);
  }
  return WaveField(grid, std::move(values));
}

WaveField gaussian_packet(const SpatialGrid& grid, double center, double sigma, double k0) {
  if (!(sigma > 0.0)) throw ConfigError("packet.sigma must be positive");
  if (center - 5.0 * sigma < grid.x0() || center + 5.0 * sigma > grid.x_max()) {
    throw ConfigError("packet center +- 5 sigma is clipped by the grid boundary");
  }
  const double prefactor = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  std::vector<complex> values(grid.n_points());
  double norm = 0.0;
  for (std::size_t j = 0; j < grid.n_points(); ++j) {
    const double x = grid.position(j);
    const double d = x - center;
    values[j] = prefactor * std::exp(complex(-d * d / (4.0 * sigma * sigma), k0 * x));
    if (j > 0 && j < grid.last()) norm += std::norm(values[j]);
  }
  norm *= grid.dx();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw ConfigError("lattice too coarse for the packet: discrete norm is " + std::to_string(norm));
  }
  return WaveField(grid, std::move(values));
}

}  // namespace tdse
