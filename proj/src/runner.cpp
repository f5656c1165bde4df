#include "tdse/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "tdse/analytic.hpp"
#include "tdse/errors.hpp"

namespace tdse {

namespace {

using json = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

void append_number(std::string& line, double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  line.append(buf, res.ptr);
}

json describe(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return {{"type", "zero"}};
        } else if constexpr (std::is_same_v<T, SquareBarrier>) {
          return {{"type", "square_barrier"}, {"v0", p.v0}, {"a", p.a}, {"b", p.b}};
        } else if constexpr (std::is_same_v<T, OscillatingBarrier>) {
          return {{"type", "oscillating_barrier"}, {"v0", p.v0}, {"alpha", p.alpha},
                  {"omega", p.omega}, {"a", p.a}, {"b", p.b}};
        } else if constexpr (std::is_same_v<T, Absorber>) {
          return {{"type", p.side == Side::Right ? "absorber_right" : "absorber_left"},
                  {"c", p.c}, {"x_i", p.x_i}};
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return {{"type", "tabulated"}, {"points", p.samples.size()}};
        } else {
          json parts = json::array();
          for (const auto& part : p.parts) parts.push_back(describe(part));
          return {{"type", "composite"}, {"parts", parts}};
        }
      },
      spec.variant());
}

json describe(const Scenario& sc) {
  json mode;
  if (const SourceSpec* src = source_of(sc.mode)) {
    mode["type"] = std::holds_alternative<HardSourceMode>(sc.mode) ? "hard_source" : "transparent_source";
    mode["amplitude"] = {src->amplitude.real(), src->amplitude.imag()};
    mode["k"] = src->wavevector;
    mode["omega"] = src->omega();
    mode["x_source"] = sc.grid.position(src->s_index);
    mode["s_index"] = src->s_index;
    mode["dispersion"] = sc.dispersion == Dispersion::Lattice ? "lattice" : "continuum";
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, UniformFront>) {
            mode["front"] = {{"type", "uniform"}};
          } else if constexpr (std::is_same_v<T, EmptyFront>) {
            mode["front"] = {{"type", "empty"}};
          } else {
            mode["front"] = {{"type", "gaussian"}, {"x_g", f.x_g}, {"l_g", f.l_g}};
          }
        },
        src->front);
  } else {
    mode["type"] = "closed";
    if (sc.packet) {
      mode["packet"] = {{"center", sc.packet->center}, {"sigma", sc.packet->sigma}, {"k0", sc.packet->k0}};
    }
  }
  return {
      {"grid", {{"x_min", sc.grid.x0()}, {"x_max", sc.grid.x_max()}, {"dx", sc.grid.dx()},
                {"n_points", sc.grid.n_points()}}},
      {"time", {{"dt", sc.time.dt}, {"steps", sc.time.n_steps}}},
      {"mode", mode},
      {"potential", describe(sc.potential)},
      {"probes", sc.probes},
      {"snapshot_stride", sc.snapshot_stride},
  };
}

void write_manifest(const std::filesystem::path& file, const json& manifest) {
  auto out = open_output(file);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

std::string status_name(int code) {
  switch (code) {
    case kExitOk: return "ok";
    case kExitNumeric: return "numeric_failure";
    default: return "configuration_error";
  }
}

}  // namespace

std::string format_number(double value) {
  std::string s;
  append_number(s, value);
  return s;
}

std::string snapshot_filename(std::size_t step) { return "snap_" + std::to_string(step) + ".csv"; }

std::string probe_filename(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "current_x%g.csv", x);
  return buf;
}

void write_snapshot(const std::filesystem::path& file, const SimulationState& state,
                    std::span<const complex> potential) {
  const auto psi = state.field.values();
  if (potential.size() != psi.size()) throw std::invalid_argument("write_snapshot: potential size mismatch");
  const SpatialGrid& grid = state.field.grid();
  std::string text = "t,x,re,im,density,v_re,v_im\n";
  text.reserve(psi.size() * 140);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double re = psi[j].real();
    const double im = psi[j].imag();
    for (double v : {state.time, grid.position(j), re, im, re * re + im * im, potential[j].real()}) {
      append_number(text, v);
      text += ',';
    }
    append_number(text, potential[j].imag());
    text += '\n';
  }
  auto out = open_output(file);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

void write_current_series(const std::filesystem::path& file, const CurrentSeries& series) {
  std::string text = "t,j_probe\n";
  text.reserve(series.size() * 48);
  for (const auto& [t, j] : series.samples()) {
    append_number(text, t);
    text += ',';
    append_number(text, j);
    text += '\n';
  }
  auto out = open_output(file);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

Simulation simulate(const Scenario& scenario,
                    const std::function<void(const SimulationState&, std::span<const complex>)>& on_snapshot) {
  const auto probes = scenario.probe_indices();
  Propagator propagator(scenario.grid, scenario.time.dt, scenario.potential, scenario.mode);

  Simulation result{SimulationState{scenario.initial_field(), 0, 0.0}, {}, std::nullopt, {}};
  result.currents.reserve(probes.size());
  for (std::size_t j : probes) {
    result.currents.emplace_back(j, scenario.time.dt);
  }

  RunCallbacks callbacks;
  callbacks.on_sample = [&](const SimulationState& state) {
    for (auto& series : result.currents) series.append(state.time, current_at(state.field, series.probe_index()));
    result.final_state = state;
  };
  if (on_snapshot) {
    callbacks.on_snapshot = [&](const SimulationState& state) {
      on_snapshot(state, propagator.potential_at(state.time));
    };
  }
  try {
    run(propagator, result.final_state, scenario.time.n_steps, scenario.snapshot_stride, callbacks);
  } catch (const NumericError& e) {
    result.failed_step = e.step();
    result.error = e.what();
  }
  return result;
}

RunReport run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  const std::filesystem::path dir = out_dir.empty() ? scenario.output_dir : out_dir;
  std::filesystem::create_directories(dir);
  RunReport report;

  std::size_t last_snapshot = static_cast<std::size_t>(-1);
  auto snapshot = [&](const SimulationState& state, std::span<const complex> potential) {
    const auto file = dir / snapshot_filename(state.step_index);
    write_snapshot(file, state, potential);
    report.files.push_back(file);
    last_snapshot = state.step_index;
  };
  Simulation sim = simulate(scenario, snapshot);

  if (sim.failed_step) {
    report.exit_code = kExitNumeric;
    report.failed_step = sim.failed_step;
    report.error = sim.error;
  } else if (last_snapshot != sim.final_state.step_index) {
    Propagator p(scenario.grid, scenario.time.dt, scenario.potential, scenario.mode);
    snapshot(sim.final_state, p.potential_at(sim.final_state.time));
  }

  for (std::size_t i = 0; i < sim.currents.size(); ++i) {
    const auto file = dir / probe_filename(scenario.probes[i]);
    write_current_series(file, sim.currents[i]);
    report.files.push_back(file);
  }

  json manifest;
  manifest["command"] = "run";
  manifest["scenario"] = describe(scenario);
  manifest["status"] = status_name(report.exit_code);
  manifest["exit_code"] = report.exit_code;
  manifest["steps_completed"] = sim.final_state.step_index;
  manifest["failed_step"] = report.failed_step ? json(*report.failed_step) : json(nullptr);
  if (!report.error.empty()) manifest["error"] = report.error;
  json files = json::array();
  for (const auto& f : report.files) files.push_back(f.filename().string());
  manifest["files"] = files;
  const auto manifest_file = dir / "run_manifest.json";
  write_manifest(manifest_file, manifest);
  report.files.push_back(manifest_file);
  return report;
}

ScatteringProbes scattering_probes(const Scenario& scenario) {
  const SourceSpec* src = source_of(scenario.mode);
  if (!src) throw ConfigError("mode.type: scattering needs a source mode");
  const double x_s = scenario.grid.position(src->s_index);
  double right_edge = x_s;
  if (const auto barrier = find_barrier(scenario.potential)) right_edge = std::max(right_edge, barrier->b);

  const auto indices = scenario.probe_indices();
  std::optional<std::size_t> reflected;
  std::optional<std::size_t> transmitted;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const double x = scenario.probes[i];
    if (x < x_s && (!reflected || x > scenario.grid.position(*reflected))) reflected = indices[i];
    if (x > right_edge && (!transmitted || x < scenario.grid.position(*transmitted))) transmitted = indices[i];
  }
  if (!reflected) throw ConfigError("output.probes: need a probe left of the source to measure reflection");
  if (!transmitted) {
    throw ConfigError("output.probes: need a probe right of the barrier to measure transmission");
  }
  return {*reflected, *transmitted};
}

ScatteringRecord scatter(const Scenario& scenario, double k, const SweepOptions& options) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ScatteringRecord rec;
  rec.k = k;
  if (const auto barrier = find_barrier(scenario.potential)) {
    const auto ana = analytic::barrier_transmission(k, barrier->v0, barrier->b - barrier->a);
    rec.T_ana = ana.T;
    rec.R_ana = ana.R;
  } else {
    rec.T_ana = 1.0;
    rec.R_ana = 0.0;
  }

  Scenario sc = with_wavevector(scenario, k);
  const auto probes = scattering_probes(sc);
  sc.probes = {sc.grid.position(probes.reflected), sc.grid.position(probes.transmitted)};
  sc.snapshot_stride = std::max<std::size_t>(sc.time.n_steps, 1);

  const Simulation sim = simulate(sc);
  if (sim.failed_step) {
    rec.failed = true;
    rec.error = sim.error;
    rec.T_num = rec.R_num = nan;
    return rec;
  }
  const CurrentSeries& j_r = sim.currents[0];
  const CurrentSeries& j_t = sim.currents[1];
  if (j_t.size() < options.window) {
    rec.failed = true;
    rec.error = "run shorter than one steady-state window";
    rec.T_num = rec.R_num = nan;
    return rec;
  }
  const complex amplitude = source_of(sc.mode)->amplitude;
  const double incident = 2.0 * k * std::norm(amplitude);
  const std::size_t tail = j_t.size() - options.window;
  const auto tr = extract_rt(j_t.mean(tail, options.window), j_r.mean(tail, options.window), k, amplitude);
  rec.T_num = tr.T;
  rec.R_num = tr.R;

  const auto t_r = steady_state_time(j_r, options.window, options.tol, incident);
  const auto t_t = steady_state_time(j_t, options.window, options.tol, incident);
  if (t_r && t_t) rec.steady_time = std::max(*t_r, *t_t);
  return rec;
}

std::vector<ScatteringRecord> run_sweep(const Scenario& scenario, std::span<const double> k_values,
                                        const SweepOptions& options) {
  if (!std::holds_alternative<TransparentSourceMode>(scenario.mode)) {
    throw ConfigError("mode.type: a sweep needs transparent_source");
  }
  if (scenario.potential.is_time_dependent()) {
    throw ConfigError("potential.type: a sweep needs a static potential");
  }
  for (double k : k_values) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("sweep: every k must be positive");
  }
  (void)scattering_probes(scenario);

  std::vector<ScatteringRecord> records(k_values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < k_values.size(); i = next++) {
      try {
        records[i] = scatter(scenario, k_values[i], options);
      } catch (const std::exception& e) {
        ScatteringRecord failed;
        failed.k = k_values[i];
        failed.failed = true;
        failed.error = e.what();
        failed.T_num = failed.R_num = failed.T_ana = failed.R_ana = std::numeric_limits<double>::quiet_NaN();
        records[i] = failed;
      }
    }
  };
  unsigned n_threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, k_values.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  pool.clear();

  std::stable_sort(records.begin(), records.end(),
                   [](const ScatteringRecord& a, const ScatteringRecord& b) { return a.k < b.k; });
  return records;
}

void write_sweep_csv(const std::filesystem::path& file, std::span<const ScatteringRecord> records) {
  std::string text = "k,T_num,R_num,T_ana,R_ana,steady_time\n";
  for (const auto& r : records) {
    for (double v : {r.k, r.T_num, r.R_num, r.T_ana, r.R_ana}) {
      append_number(text, v);
      text += ',';
    }
    append_number(text, r.steady_time.value_or(std::numeric_limits<double>::quiet_NaN()));
    text += '\n';
  }
  auto out = open_output(file);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

std::vector<double> k_grid(double from, double to, double step) {
  if (!(step > 0.0)) throw ConfigError("--k-step must be positive");
  if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError("--k-from/--k-to must be finite");
  std::vector<double> ks;
  if (to < from) return ks;
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  ks.reserve(count);
  // from + i*step, rounded to 12 digits so 0.6 + 3*0.2 prints as 1.2.
  for (std::size_t i = 0; i < count; ++i) {
    const double k = from + static_cast<double>(i) * step;
    ks.push_back(std::round(k * 1e12) / 1e12);
  }
  return ks;
}

}  // namespace tdse
