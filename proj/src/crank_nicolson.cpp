#include "tdse/crank_nicolson.hpp"

#include <cmath>
#include <string>

#include "tdse/errors.hpp"
#include "tdse/tridiagonal.hpp"

namespace tdse {

namespace {

constexpr complex kI{0.0, 1.0};

void rhs_into(const StepCoefficients& c, std::span<const complex> psi, std::span<complex> out) {
  const complex a = std::conj(c.alpha);
  const std::size_t n = c.beta.size();  // interior count N-1
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1;
    const complex left = (j - 1 == 0) ? complex{} : psi[j - 1];
    const complex right = (j + 1 == n + 1) ? complex{} : psi[j + 1];
    out[i] = a * (right + left) + c.beta_bar[i] * psi[j];
  }
}

void add_source_corrections(std::span<complex> r, complex alpha, const SpatialGrid& grid,
                            const SourceSpec& source, double t_k, double t_k1) {
  const std::size_t s = source.s_index;
  const double x_s = grid.position(s);
  const double x_s1 = grid.position(s + 1);
  r[s - 1] += alpha * (source.incident(x_s1, t_k1) + source.incident(x_s1, t_k));
  r[s] += std::conj(alpha) * (source.incident(x_s, t_k1) + source.incident(x_s, t_k));
}

void check_finite(std::span<const complex> psi, std::size_t step) {
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (!std::isfinite(psi[j].real()) || !std::isfinite(psi[j].imag())) {
      throw NumericError("non-finite amplitude at step " + std::to_string(step) + ", lattice index " +
                             std::to_string(j) + " (unstable configuration?)",
                         step, j);
    }
  }
}

}  // namespace

StepCoefficients assemble(const SpatialGrid& grid, double dt, std::span<const complex> v_k,
                          std::span<const complex> v_k1) {
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (v_k.size() != grid.n_points() || v_k1.size() != grid.n_points()) {
    throw std::invalid_argument("assemble: potential samples do not match the grid");
  }
  const double dx2 = grid.dx() * grid.dx();
  StepCoefficients c;
  c.alpha = complex(0.0, -dt / (2.0 * dx2));
  const std::size_t n = grid.n_points() - 2;
  c.beta.resize(n);
  c.beta_bar.resize(n);
  const complex kinetic = kI * (dt / dx2);
  for (std::size_t i = 0; i < n; ++i) {
    const complex vsum = v_k1[i + 1] + v_k[i + 1];
    const complex pot = kI * (dt / 4.0) * vsum;
    c.beta[i] = 1.0 + kinetic + pot;
    c.beta_bar[i] = 1.0 - kinetic - pot;
  }
  return c;
}

std::vector<complex> build_rhs(const StepCoefficients& coeffs, const WaveField& field) {
  if (field.size() != coeffs.beta.size() + 2) {
    throw std::invalid_argument("build_rhs: field and coefficients disagree on the grid");
  }
  std::vector<complex> r(coeffs.beta.size());
  rhs_into(coeffs, field.values(), r);
  return r;
}

std::vector<complex> apply_source_corrections(std::vector<complex> r, const StepCoefficients& coeffs,
                                              const SpatialGrid& grid, const SourceSpec& source,
                                              double t_k, double t_k1) {
  validate_source(grid, source);
  if (r.size() != grid.n_points() - 2) {
    throw std::invalid_argument("apply_source_corrections: rhs length does not match the grid");
  }
  add_source_corrections(r, coeffs.alpha, grid, source, t_k, t_k1);
  return r;
}

const SourceSpec* source_of(const RunMode& mode) noexcept {
  if (const auto* h = std::get_if<HardSourceMode>(&mode)) return &h->source;
  if (const auto* t = std::get_if<TransparentSourceMode>(&mode)) return &t->source;
  return nullptr;
}

Propagator::Propagator(SpatialGrid grid, double dt, PotentialSpec potential, RunMode mode)
    : grid_(grid),
      dt_(dt),
      potential_(std::move(potential)),
      mode_(std::move(mode)),
      time_dependent_(potential_.is_time_dependent()) {
  if (!(dt_ > 0.0)) throw ConfigError("time.dt must be positive");
  if (const SourceSpec* src = source_of(mode_)) validate_source(grid_, *src);
  const std::size_t n = grid_.n_points();
  psi_.resize(n);
  rhs_.resize(n - 2);
  scratch_.resize(n - 2);
  solution_.resize(n - 2);
}

std::span<const complex> Propagator::potential_at(double t) {
  if (!time_dependent_) {
    if (v_k_.empty()) {
      v_k_ = sample_potential(potential_, grid_, 0.0);
      v_k_time_ = 0.0;
    }
    return v_k_;
  }
  if (!v_k1_.empty() && v_k1_time_ == t) return v_k1_;
  if (!v_k_.empty() && v_k_time_ == t) return v_k_;
  v_k_ = sample_potential(potential_, grid_, t);
  v_k_time_ = t;
  return v_k_;
}

void Propagator::refresh_coefficients(std::size_t k) {
  if (coeff_step_ == k) return;
  if (!time_dependent_) {
    if (coeff_step_ == static_cast<std::size_t>(-1)) {
      const auto v = potential_at(0.0);
      coeffs_ = assemble(grid_, dt_, v, v);
      coeff_step_ = 0;
    }
    return;
  }
  const double t_k = static_cast<double>(k) * dt_;
  const double t_k1 = static_cast<double>(k + 1) * dt_;
  // The previous step's upper level becomes this step's lower level.
  if (!v_k1_.empty() && v_k1_time_ == t_k) {
    std::swap(v_k_, v_k1_);
    v_k_time_ = t_k;
  } else {
    v_k_ = sample_potential(potential_, grid_, t_k);
    v_k_time_ = t_k;
  }
  v_k1_ = sample_potential(potential_, grid_, t_k1);
  v_k1_time_ = t_k1;
  coeffs_ = assemble(grid_, dt_, v_k_, v_k1_);
  coeff_step_ = k;
}

SimulationState Propagator::step(const SimulationState& state) {
  if (!(state.field.grid() == grid_)) {
    throw std::invalid_argument("Propagator::step: state lives on a different grid");
  }
  const std::size_t k = state.step_index;
  const std::size_t next = k + 1;
  const double t_k = static_cast<double>(k) * dt_;
  const double t_k1 = static_cast<double>(next) * dt_;
  const std::size_t last = grid_.last();

  refresh_coefficients(k);

  const auto values = state.field.values();
  std::copy(values.begin(), values.end(), psi_.begin());

  try {
    if (const auto* hard = std::get_if<HardSourceMode>(&mode_)) {
      const SourceSpec& src = hard->source;
      const std::size_t s = src.s_index;
      // Only j >= s exists; psi_s is the incident wave at both time levels.
      std::fill(psi_.begin(), psi_.begin() + static_cast<std::ptrdiff_t>(s), complex{});
      psi_[s] = src.incident(grid_.position(s), t_k);
      rhs_into(coeffs_, psi_, rhs_);
      const complex pinned_next = src.incident(grid_.position(s), t_k1);
      rhs_[s] -= coeffs_.alpha * pinned_next;

      const std::size_t offset = s;  // interior row of j = s + 1
      const std::size_t count = last - 1 - s;
      const std::span<const complex> beta(coeffs_.beta.data() + offset, count);
      const std::span<const complex> rhs(rhs_.data() + offset, count);
      thomas_solve_into(coeffs_.alpha, beta, rhs, std::span(scratch_.data(), count),
                        std::span(solution_.data(), count));
      for (std::size_t i = 0; i < count; ++i) psi_[s + 1 + i] = solution_[i];
      psi_[s] = pinned_next;
    } else {
      rhs_into(coeffs_, psi_, rhs_);
      if (const auto* tr = std::get_if<TransparentSourceMode>(&mode_)) {
        add_source_corrections(rhs_, coeffs_.alpha, grid_, tr->source, t_k, t_k1);
      }
      thomas_solve_into(coeffs_.alpha, coeffs_.beta, rhs_, scratch_, solution_);
      for (std::size_t i = 0; i < solution_.size(); ++i) psi_[i + 1] = solution_[i];
    }
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " at step " + std::to_string(next), next, e.index());
  }
  psi_[0] = complex{};
  psi_[last] = complex{};

  check_finite(psi_, next);
  return SimulationState{WaveField(grid_, psi_), next, t_k1};
}

SimulationState step(const SimulationState& state, const PotentialSpec& potential, const RunMode& mode,
                     const SpatialGrid& grid, double dt) {
  Propagator p(grid, dt, potential, mode);
  return p.step(state);
}

SimulationState run(Propagator& propagator, SimulationState initial, std::size_t n_steps,
                    std::size_t snapshot_stride, const RunCallbacks& callbacks) {
  if (snapshot_stride == 0) throw ConfigError("output.snapshot_stride must be >= 1");
  SimulationState state = std::move(initial);
  if (callbacks.on_snapshot) callbacks.on_snapshot(state);
  if (callbacks.on_sample) callbacks.on_sample(state);
  for (std::size_t i = 0; i < n_steps; ++i) {
    state = propagator.step(state);
    if (callbacks.on_sample) callbacks.on_sample(state);
    if (callbacks.on_snapshot && state.step_index % snapshot_stride == 0) callbacks.on_snapshot(state);
  }
  return state;
}

}  // namespace tdse
