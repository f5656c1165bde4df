#pragma once

// Scenario configuration and its INI-style file format.
//
//   [grid]            x_min, x_max, dx
//   [time]            dt, steps
//   [mode]            type = closed | hard_source | transparent_source,
//                     amplitude_re, amplitude_im, k, x_source,
//                     front = uniform | gaussian | empty, x_g, l_g,
//                     dispersion = continuum | lattice
//   [packet]          center, sigma, k0            (closed mode initial state)
//   [potential]       type = zero | square_barrier | oscillating_barrier | tabulated,
//                     v0, a, b, alpha, nu, file
//   [absorber_right]  c, x_i
//   [absorber_left]   c, x_i
//   [output]          dir, snapshot_stride, probes (comma separated)
//
// Comments start with ';' or '#'.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdse/analytic.hpp"
#include "tdse/crank_nicolson.hpp"
#include "tdse/grid.hpp"
#include "tdse/potential.hpp"

namespace tdse {

/// Defaults used when a key is omitted.
namespace defaults {
inline constexpr double kDx = 0.05;
inline constexpr double kXMin = -30.0;
inline constexpr double kXMax = 30.0;
inline constexpr double kAbsorberStrength = 0.1;
inline constexpr double kRightAbsorberOnset = 20.0;
/// Left absorber onset, measured inward from the left edge of the grid.
inline constexpr double kLeftAbsorberInset = 10.0;
inline constexpr double kReflectedProbe = -20.0;
inline constexpr double kTransmittedProbe = 10.0;
inline constexpr std::size_t kSnapshotStride = 250;
}  // namespace defaults

struct Scenario {
  SpatialGrid grid;
  TimeGrid time;
  RunMode mode;
  PotentialSpec potential;
  /// Initial Gaussian packet; used (and required) in closed mode.
  std::optional<analytic::GaussianPacket> packet;
  std::size_t snapshot_stride = defaults::kSnapshotStride;
  std::vector<double> probes;
  std::filesystem::path output_dir = "out";
  /// Dispersion the incident wave was configured with; the sweep recomputes the
  /// frequency for every k.
  Dispersion dispersion = Dispersion::Continuum;

  /// Lattice indices of the probes (validated interior).
  std::vector<std::size_t> probe_indices() const;
  /// Initial wave field implied by the mode.
  WaveField initial_field() const;
  /// Re-checks every cross-field invariant; throws ConfigError.
  void validate() const;
};

/// Parses the INI text. `base_dir` resolves relative paths (tabulated potentials).
/// Throws ConfigError naming the offending key.
Scenario parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");

Scenario load_config(const std::filesystem::path& path);

/// First square or oscillating barrier in the potential, if any (for analytic T/R).
std::optional<SquareBarrier> find_barrier(const PotentialSpec& potential);

/// Copy of the scenario with the incident wavevector replaced.
Scenario with_wavevector(const Scenario& scenario, double k);

}  // namespace tdse
