#pragma once

// Declarative potentials V(x, t) = V_real(x, t) + i V_imag(x).

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "tdse/grid.hpp"

namespace tdse {

struct ZeroPotential {};

/// V0 on [a, b]. Edges carry V0/2 (Heaviside with H(0) = 1/2): a barrier whose
/// ends fall on lattice points then has an effective length of exactly b - a.
struct SquareBarrier {
  double v0;
  double a;
  double b;
};

/// V0 (1 + alpha cos(omega t)) on [a, b], same edge convention as SquareBarrier.
struct OscillatingBarrier {
  double v0;
  double alpha;
  double omega;
  double a;
  double b;
};

enum class Side { Right, Left };

/// Quadratic complex absorbing potential -i c (x - x_i)^2 beyond the onset x_i
/// (x > x_i for Side::Right, x < x_i for Side::Left).
struct Absorber {
  double c;
  double x_i;
  Side side;
};

/// Samples given on the lattice points of a grid.
struct Tabulated {
  SpatialGrid grid;
  std::vector<complex> samples;
};

class PotentialSpec;

/// Sum of parts.
struct Composite {
  std::vector<PotentialSpec> parts;
};

class PotentialSpec {
 public:
  using Variant =
      std::variant<ZeroPotential, SquareBarrier, OscillatingBarrier, Absorber, Tabulated, Composite>;

  static constexpr int kMaxDepth = 8;

  PotentialSpec() : v_(ZeroPotential{}) {}
  /// Validates the model's invariants; throws ConfigError on violation.
  PotentialSpec(Variant v);  // NOLINT(google-explicit-constructor)

  const Variant& variant() const noexcept { return v_; }

  bool is_time_dependent() const;
  /// True when any absorber of the given side is present.
  bool has_absorber(Side side) const;
  /// Nesting depth: 1 for a leaf, 1 + max(child) for a composite.
  int depth() const;

 private:
  Variant v_;
};

PotentialSpec operator+(const PotentialSpec& lhs, const PotentialSpec& rhs);

complex potential_value(const PotentialSpec& spec, double x, double t);

/// Pointwise samples V(x_j, t) on every lattice point.
std::vector<complex> sample_potential(const PotentialSpec& spec, const SpatialGrid& grid, double t);

}  // namespace tdse
