#pragma once

// Running scenarios: time stepping with CSV output, and transmission sweeps.
//
// Output files (all numbers as 17 significant digits):
//   snap_<step>.csv          t,x,re,im,density,v_re,v_im
//   current_x<coord>.csv     t,j_probe
//   sweep.csv                k,T_num,R_num,T_ana,R_ana,steady_time
//   run_manifest.json        parameters, files written, status

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdse/crank_nicolson.hpp"
#include "tdse/observables.hpp"
#include "tdse/scenario.hpp"

namespace tdse {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2 };

/// Shortest decimal text that round-trips (up to 17 significant digits).
std::string format_number(double value);

std::string snapshot_filename(std::size_t step);
/// current_x<coord>.csv with the coordinate printed like printf("%g").
std::string probe_filename(double x);

/// Writes one snapshot CSV for `state`; `potential` holds V(x_j, t).
void write_snapshot(const std::filesystem::path& file, const SimulationState& state,
                    std::span<const complex> potential);
void write_current_series(const std::filesystem::path& file, const CurrentSeries& series);

/// In-memory result of stepping a scenario.
struct Simulation {
  SimulationState final_state;
  std::vector<CurrentSeries> currents;  // one per probe, same order as Scenario::probes
  std::optional<std::size_t> failed_step;
  std::string error;
};

/// Steps the scenario, recording probe currents at every step and calling
/// `on_snapshot` at every snapshot_stride-th step. A numeric failure stops the
/// run and is reported through `failed_step` instead of an exception.
Simulation simulate(const Scenario& scenario,
                    const std::function<void(const SimulationState&, std::span<const complex>)>& on_snapshot = {});

struct RunReport {
  int exit_code = kExitOk;
  std::optional<std::size_t> failed_step;
  std::string error;
  std::vector<std::filesystem::path> files;
};

/// Runs the scenario and writes snapshots (every stride and the final step),
/// probe currents and run_manifest.json into `out_dir` (the scenario's own
/// output_dir when empty).
RunReport run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir = {});

struct ScatteringRecord {
  double k = 0.0;
  double T_num = 0.0;
  double R_num = 0.0;
  double T_ana = 0.0;
  double R_ana = 0.0;
  /// Time after which both probe currents were steady; nullopt when they never settled.
  std::optional<double> steady_time;
  bool failed = false;
  std::string error;
};

struct SweepOptions {
  /// Steady-state window in time steps.
  std::size_t window = 200;
  double tol = 1e-3;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Probe indices used to measure reflection (left of the source) and
/// transmission (right of the barrier, or of the source without one).
struct ScatteringProbes {
  std::size_t reflected;
  std::size_t transmitted;
};
ScatteringProbes scattering_probes(const Scenario& scenario);

/// One simulation at wavevector k, T/R from the mean currents over the last window.
ScatteringRecord scatter(const Scenario& scenario, double k, const SweepOptions& options = {});

/// One simulation per k, run concurrently; records are sorted by k. A numeric
/// failure marks that k as failed (NaN values) without stopping the others.
/// Throws ConfigError unless the scenario uses the transparent source and a
/// static potential.
std::vector<ScatteringRecord> run_sweep(const Scenario& scenario, std::span<const double> k_values,
                                        const SweepOptions& options = {});

void write_sweep_csv(const std::filesystem::path& file, std::span<const ScatteringRecord> records);

/// from, from + step, ... up to `to` inclusive (with a small tolerance for rounding).
std::vector<double> k_grid(double from, double to, double step);

}  // namespace tdse
