#pragma once

// Crank-Nicolson stepper for  i dpsi/dt = -d2psi/dx2 + V psi  on a closed lattice.
//
// Each step solves the tridiagonal system
//
//   alpha psi_{j+1}^{k+1} + beta_j psi_j^{k+1} + alpha psi_{j-1}^{k+1} = r_j,   j = 1..N-1
//
//   alpha    = -i dt / (2 dx^2)
//   beta_j   = 1 + i dt/dx^2 + (i dt/4)(V_j^{k+1} + V_j^k)
//   betabar_j= 1 - i dt/dx^2 - (i dt/4)(V_j^{k+1} + V_j^k)
//   r_j      = conj(alpha) psi_{j+1}^k + betabar_j psi_j^k + conj(alpha) psi_{j-1}^k
//
// which is the Cayley form (1 + i dt H/2) psi^{k+1} = (1 - i dt H/2) psi^k with the
// potential averaged over both time levels. For real V the step is exactly unitary.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "tdse/grid.hpp"
#include "tdse/potential.hpp"

namespace tdse {

/// Coefficients over the interior points; entry i corresponds to lattice index j = i + 1.
struct StepCoefficients {
  complex alpha;
  std::vector<complex> beta;
  std::vector<complex> beta_bar;
};

StepCoefficients assemble(const SpatialGrid& grid, double dt, std::span<const complex> v_k,
                          std::span<const complex> v_k1);

/// r_j for j = 1..N-1 (entry j-1), taking psi_0 = psi_N = 0.
std::vector<complex> build_rhs(const StepCoefficients& coeffs, const WaveField& field);

/// Transparent-injection corrections on rows s and s+1:
///   r_s     += alpha       (Phi_{s+1}^{k+1} + Phi_{s+1}^k)
///   r_{s+1} += conj(alpha) (Phi_s^{k+1}     + Phi_s^k)
/// Left of the source the lattice then carries only the reflected wave, to the
/// right the total wave.
std::vector<complex> apply_source_corrections(std::vector<complex> r, const StepCoefficients& coeffs,
                                              const SpatialGrid& grid, const SourceSpec& source,
                                              double t_k, double t_k1);

struct ClosedMode {};
/// psi_s pinned to the incident wave; only j >= s is evolved.
struct HardSourceMode {
  SourceSpec source;
};
/// Incident wave injected at s through the r_s / r_{s+1} corrections.
struct TransparentSourceMode {
  SourceSpec source;
};

using RunMode = std::variant<ClosedMode, HardSourceMode, TransparentSourceMode>;

const SourceSpec* source_of(const RunMode& mode) noexcept;

struct SimulationState {
  WaveField field;
  std::size_t step_index = 0;
  double time = 0.0;
};

/// Owns the cached coefficients and scratch buffers of one simulation. Not
/// thread-safe; use one instance per simulation.
class Propagator {
 public:
  Propagator(SpatialGrid grid, double dt, PotentialSpec potential, RunMode mode);

  const SpatialGrid& grid() const noexcept { return grid_; }
  double dt() const noexcept { return dt_; }
  const PotentialSpec& potential() const noexcept { return potential_; }
  const RunMode& mode() const noexcept { return mode_; }

  /// Advances by one time step. Throws NumericError (carrying the new step index)
  /// on a singular pivot or any non-finite amplitude.
  SimulationState step(const SimulationState& state);

  /// Potential samples at time t (cached for static potentials).
  std::span<const complex> potential_at(double t);

 private:
  void refresh_coefficients(std::size_t k);

  SpatialGrid grid_;
  double dt_;
  PotentialSpec potential_;
  RunMode mode_;
  bool time_dependent_;

  std::vector<complex> v_k_;
  std::vector<complex> v_k1_;
  double v_k_time_ = -1.0;
  double v_k1_time_ = -1.0;
  StepCoefficients coeffs_;
  std::size_t coeff_step_ = static_cast<std::size_t>(-1);

  std::vector<complex> psi_;
  std::vector<complex> rhs_;
  std::vector<complex> scratch_;
  std::vector<complex> solution_;
};

/// One step with a throwaway propagator; convenient for tests, slow in loops.
SimulationState step(const SimulationState& state, const PotentialSpec& potential, const RunMode& mode,
                     const SpatialGrid& grid, double dt);

struct RunCallbacks {
  /// Called for the initial state and then every `snapshot_stride` steps.
  std::function<void(const SimulationState&)> on_snapshot;
  /// Called for the initial state and after every step.
  std::function<void(const SimulationState&)> on_sample;
};

/// Executes n_steps steps from `initial`. Returns the final state. NumericError
/// propagates with the index of the step that failed.
SimulationState run(Propagator& propagator, SimulationState initial, std::size_t n_steps,
                    std::size_t snapshot_stride, const RunCallbacks& callbacks);

}  // namespace tdse
