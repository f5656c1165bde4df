#include "tdse/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdse/errors.hpp"

namespace tdse {

namespace {

// Coordinates closer than this to a barrier edge are treated as on the edge;
// lattice positions x0 + j*dx are only exact to a rounding.
constexpr double kEdgeTolerance = 1e-9;

double window(double x, double a, double b) {
  if (std::abs(x - a) <= kEdgeTolerance || std::abs(x - b) <= kEdgeTolerance) return 0.5;
  return (x > a && x < b) ? 1.0 : 0.0;
}

void check_interval(double a, double b, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw ConfigError(std::string(what) + ": barrier needs a < b");
  }
}

struct Validator {
  void operator()(const ZeroPotential&) const {}
  void operator()(const SquareBarrier& p) const {
    check_interval(p.a, p.b, "square_barrier");
    if (!std::isfinite(p.v0)) throw ConfigError("square_barrier: v0 must be finite");
  }
  void operator()(const OscillatingBarrier& p) const {
    check_interval(p.a, p.b, "oscillating_barrier");
    if (!std::isfinite(p.v0) || !std::isfinite(p.alpha) || !std::isfinite(p.omega)) {
      throw ConfigError("oscillating_barrier: parameters must be finite");
    }
  }
  void operator()(const Absorber& p) const {
    if (!(p.c >= 0.0) || !std::isfinite(p.c)) throw ConfigError("absorber: c must be >= 0");
    if (!std::isfinite(p.x_i)) throw ConfigError("absorber: x_i must be finite");
  }
  void operator()(const Tabulated& p) const {
    if (p.samples.size() != p.grid.n_points()) {
      throw ConfigError("tabulated potential: sample count does not match its grid");
    }
    for (const auto& v : p.samples) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw ConfigError("tabulated potential: non-finite sample");
      }
      if (v.imag() > 0.0) throw ConfigError("tabulated potential: imaginary part must be <= 0");
    }
  }
  void operator()(const Composite&) const {}
};

struct Evaluator {
  double x;
  double t;
  complex operator()(const ZeroPotential&) const { return {}; }
  complex operator()(const SquareBarrier& p) const { return p.v0 * window(x, p.a, p.b); }
  complex operator()(const OscillatingBarrier& p) const {
    return p.v0 * (1.0 + p.alpha * std::cos(p.omega * t)) * window(x, p.a, p.b);
  }
  complex operator()(const Absorber& p) const {
    const double d = (p.side == Side::Right) ? x - p.x_i : p.x_i - x;
    if (!(d > 0.0)) return {};
    return {0.0, -p.c * d * d};
  }
  complex operator()(const Tabulated& p) const {
    if (!p.grid.on_lattice(x)) {
      throw ConfigError("tabulated potential evaluated off its grid at x = " + std::to_string(x));
    }
    return p.samples[p.grid.nearest_index(x)];
  }
  complex operator()(const Composite& p) const {
    complex sum{};
    for (const auto& part : p.parts) sum += std::visit(*this, part.variant());
    return sum;
  }
};

}  // namespace

PotentialSpec::PotentialSpec(Variant v) : v_(std::move(v)) {
  std::visit(Validator{}, v_);
  if (depth() > kMaxDepth) throw ConfigError("composite potential nested deeper than 8 levels");
}

bool PotentialSpec::is_time_dependent() const {
  if (std::holds_alternative<OscillatingBarrier>(v_)) {
    const auto& p = std::get<OscillatingBarrier>(v_);
    return p.alpha != 0.0 && p.omega != 0.0;
  }
  if (const auto* c = std::get_if<Composite>(&v_)) {
    return std::any_of(c->parts.begin(), c->parts.end(),
                       [](const PotentialSpec& p) { return p.is_time_dependent(); });
  }
  return false;
}

bool PotentialSpec::has_absorber(Side side) const {
  if (const auto* a = std::get_if<Absorber>(&v_)) return a->side == side && a->c > 0.0;
  if (const auto* c = std::get_if<Composite>(&v_)) {
    return std::any_of(c->parts.begin(), c->parts.end(),
                       [side](const PotentialSpec& p) { return p.has_absorber(side); });
  }
  return false;
}

int PotentialSpec::depth() const {
  const auto* c = std::get_if<Composite>(&v_);
  if (!c) return 1;
  int deepest = 0;
  for (const auto& p : c->parts) deepest = std::max(deepest, p.depth());
  return 1 + deepest;
}

PotentialSpec operator+(const PotentialSpec& lhs, const PotentialSpec& rhs) {
  if (std::holds_alternative<ZeroPotential>(lhs.variant())) return rhs;
  if (std::holds_alternative<ZeroPotential>(rhs.variant())) return lhs;
  // Flatten into an existing composite on the left so repeated sums stay shallow.
  if (const auto* c = std::get_if<Composite>(&lhs.variant())) {
    Composite merged = *c;
    merged.parts.push_back(rhs);
    return PotentialSpec(std::move(merged));
  }
  return PotentialSpec(Composite{{lhs, rhs}});
}

complex potential_value(const PotentialSpec& spec, double x, double t) {
  return std::visit(Evaluator{x, t}, spec.variant());
}

std::vector<complex> sample_potential(const PotentialSpec& spec, const SpatialGrid& grid, double t) {
  std::vector<complex> v(grid.n_points());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = potential_value(spec, grid.position(j), t);
  return v;
}

}  // namespace tdse
