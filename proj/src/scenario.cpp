#include "tdse/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tdse/errors.hpp"

namespace tdse {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"grid", {"x_min", "x_max", "dx"}},
      {"time", {"dt", "steps"}},
      {"mode",
       {"type", "amplitude_re", "amplitude_im", "k", "x_source", "front", "x_g", "l_g", "dispersion"}},
      {"packet", {"center", "sigma", "k0"}},
      {"potential", {"type", "v0", "a", "b", "alpha", "nu", "file"}},
      {"absorber_right", {"c", "x_i"}},
      {"absorber_left", {"c", "x_i"}},
      {"output", {"dir", "snapshot_stride", "probes"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  // from_chars rejects a leading '+', accept it for convenience.
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

/// Typed access to the parsed tree with key-qualified error messages.
class Document {
 public:
  explicit Document(pt::ptree tree) : tree_(std::move(tree)) {}

  bool has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return std::nullopt;
    const auto item = sec->second.find(key);
    if (item == sec->second.not_found()) return std::nullopt;
    return item->second.data();
  }

  double number(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v) throw ConfigError("missing required key " + section + "." + key);
    return parse_double(section + "." + key, *v);
  }
  double number(const std::string& section, const std::string& key, double fallback) const {
    const auto v = raw(section, key);
    return v ? parse_double(section + "." + key, *v) : fallback;
  }
  std::size_t count(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v) throw ConfigError("missing required key " + section + "." + key);
    return parse_count(section + "." + key, *v);
  }
  std::size_t count(const std::string& section, const std::string& key, std::size_t fallback) const {
    const auto v = raw(section, key);
    return v ? parse_count(section + "." + key, *v) : fallback;
  }
  std::string word(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v) throw ConfigError("missing required key " + section + "." + key);
    return trim(*v);
  }
  std::string word(const std::string& section, const std::string& key, const std::string& fallback) const {
    const auto v = raw(section, key);
    return v ? trim(*v) : fallback;
  }

  void reject_unknown() const {
    for (const auto& [section, body] : tree_) {
      const auto known = known_keys().find(section);
      if (known == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
      if (!body.data().empty()) throw ConfigError("unknown key " + section + " (top level)");
      for (const auto& [key, value] : body) {
        if (!known->second.contains(key)) throw ConfigError("unknown key " + section + "." + key);
      }
    }
  }

 private:
  pt::ptree tree_;
};

std::vector<double> parse_probe_list(const std::string& raw) {
  std::vector<double> probes;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) probes.push_back(parse_double("output.probes", item));
  if (probes.empty()) throw ConfigError("output.probes: expected at least one coordinate");
  return probes;
}

PotentialSpec read_tabulated(const std::filesystem::path& file, const SpatialGrid& grid) {
  std::ifstream in(file);
  if (!in) throw ConfigError("potential.file: cannot open " + file.string());
  std::string line;
  std::getline(in, line);
  if (trim(line) != "x,v_re,v_im") {
    throw ConfigError("potential.file: expected header 'x,v_re,v_im' in " + file.string());
  }
  std::vector<complex> samples(grid.n_points());
  std::vector<bool> seen(grid.n_points(), false);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream row(line);
    std::string x, re, im;
    std::getline(row, x, ',');
    std::getline(row, re, ',');
    std::getline(row, im, ',');
    const double xv = parse_double("potential.file x", x);
    if (!grid.on_lattice(xv)) {
      throw ConfigError("potential.file: x = " + trim(x) + " is not a lattice point of the grid");
    }
    const std::size_t j = grid.nearest_index(xv);
    samples[j] = complex(parse_double("potential.file v_re", re), parse_double("potential.file v_im", im));
    seen[j] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ConfigError("potential.file: every lattice point needs a sample");
  }
  return PotentialSpec(Tabulated{grid, std::move(samples)});
}

PotentialSpec read_potential(const Document& doc, const SpatialGrid& grid, const std::filesystem::path& base) {
  const std::string type = doc.word("potential", "type", "zero");
  if (type == "zero") return PotentialSpec();
  if (type == "square_barrier") {
    const double a = doc.number("potential", "a");
    const double b = doc.number("potential", "b");
    if (!(a < b)) throw ConfigError("potential.a: barrier needs a < b (range error)");
    return PotentialSpec(SquareBarrier{doc.number("potential", "v0"), a, b});
  }
  if (type == "oscillating_barrier") {
    const double a = doc.number("potential", "a");
    const double b = doc.number("potential", "b");
    if (!(a < b)) throw ConfigError("potential.a: barrier needs a < b (range error)");
    const double nu = doc.number("potential", "nu");
    return PotentialSpec(OscillatingBarrier{doc.number("potential", "v0"), doc.number("potential", "alpha"),
                                            2.0 * std::numbers::pi * nu, a, b});
  }
  if (type == "tabulated") {
    std::filesystem::path file = doc.word("potential", "file");
    if (file.is_relative()) file = base / file;
    return read_tabulated(file, grid);
  }
  throw ConfigError("potential.type: unknown potential '" + type + "'");
}

Absorber read_absorber(const Document& doc, const std::string& section, Side side, double default_onset) {
  const double c = doc.number(section, "c", defaults::kAbsorberStrength);
  if (!(c > 0.0)) throw ConfigError(section + ".c: absorber strength must be positive");
  return Absorber{c, doc.number(section, "x_i", default_onset), side};
}

}  // namespace

std::vector<std::size_t> Scenario::probe_indices() const {
  std::vector<std::size_t> indices;
  indices.reserve(probes.size());
  for (double x : probes) {
    std::size_t j = 0;
    try {
      j = grid.nearest_index(x);
    } catch (const ConfigError&) {
      throw ConfigError("output.probes: probe at x = " + std::to_string(x) + " lies outside the grid");
    }
    if (j == 0 || j >= grid.last()) {
      throw ConfigError("output.probes: probe at x = " + std::to_string(x) + " is not an interior point");
    }
    indices.push_back(j);
  }
  return indices;
}

WaveField Scenario::initial_field() const {
  if (const SourceSpec* src = source_of(mode)) return initial_injected_state(grid, *src);
  if (!packet) throw ConfigError("missing required key packet.center (closed mode needs a packet)");
  return gaussian_packet(grid, packet->center, packet->sigma, packet->k0);
}

void Scenario::validate() const {
  if (snapshot_stride < 1) throw ConfigError("output.snapshot_stride must be >= 1");
  (void)probe_indices();
  const SourceSpec* src = source_of(mode);
  if (!src) {
    if (!packet) throw ConfigError("missing required key packet.center (closed mode needs a packet)");
    (void)initial_field();
    return;
  }
  validate_source(grid, *src);
  if (!(src->wavevector > 0.0)) throw ConfigError("mode.k must be positive (incident wave travels right)");
  const double x_s = grid.position(src->s_index);
  if (!potential.has_absorber(Side::Right)) {
    throw ConfigError("absorber_right.c: source modes need an absorbing potential on the right");
  }
  if (std::holds_alternative<TransparentSourceMode>(mode) && !potential.has_absorber(Side::Left)) {
    throw ConfigError("absorber_left.c: the transparent source needs an absorbing potential on the left");
  }
  // The potential must vanish at and left of the source (only absorbers allowed there),
  // and absorbers must not reach the injection rows.
  for (std::size_t j = 0; j <= src->s_index + 1; ++j) {
    const complex v = potential_value(potential, grid.position(j), 0.0);
    if (v.real() != 0.0) {
      throw ConfigError("potential.a: the real potential must vanish at and left of the source (x <= " +
                        std::to_string(grid.position(src->s_index + 1)) + ")");
    }
  }
  for (std::size_t j = src->s_index - 1; j <= src->s_index + 2; ++j) {
    if (potential_value(potential, grid.position(j), 0.0).imag() != 0.0) {
      throw ConfigError("absorber x_i: absorbers must not reach the injection point x_s = " +
                        std::to_string(x_s));
    }
  }
}

Scenario parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax error: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const Document doc(std::move(tree));
  doc.reject_unknown();

  const double dt = doc.number("time", "dt");
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  const std::size_t steps = doc.count("time", "steps");

  const double x_min = doc.number("grid", "x_min", defaults::kXMin);
  const double x_max = doc.number("grid", "x_max", defaults::kXMax);
  const double dx = doc.number("grid", "dx", defaults::kDx);
  if (!(dx > 0.0)) throw ConfigError("grid.dx must be positive");
  if (!(x_max > x_min)) throw ConfigError("grid.x_max must exceed grid.x_min (range error)");
  const SpatialGrid grid = build_grid(x_min, x_max, dx);

  PotentialSpec potential = read_potential(doc, grid, base_dir);

  const std::string type = doc.word("mode", "type");
  RunMode mode = ClosedMode{};
  Dispersion dispersion = Dispersion::Continuum;
  std::optional<analytic::GaussianPacket> packet;

  if (type == "closed") {
    if (doc.has_section("packet")) {
      const double sigma = doc.number("packet", "sigma");
      if (!(sigma > 0.0)) throw ConfigError("packet.sigma must be positive");
      packet = analytic::GaussianPacket{doc.number("packet", "center"), sigma, doc.number("packet", "k0", 0.0)};
    } else {
      throw ConfigError("missing required key packet.center (closed mode needs a packet)");
    }
    if (doc.has_section("absorber_right")) {
      potential = potential + PotentialSpec(read_absorber(doc, "absorber_right", Side::Right,
                                                          defaults::kRightAbsorberOnset));
    }
    if (doc.has_section("absorber_left")) {
      potential = potential + PotentialSpec(read_absorber(doc, "absorber_left", Side::Left,
                                                          grid.x0() + defaults::kLeftAbsorberInset));
    }
  } else if (type == "hard_source" || type == "transparent_source") {
    SourceSpec src;
    src.amplitude = complex(doc.number("mode", "amplitude_re", 1.0), doc.number("mode", "amplitude_im", 0.0));
    if (src.amplitude == complex{}) throw ConfigError("mode.amplitude_re: amplitude must be nonzero");
    src.wavevector = doc.number("mode", "k");
    if (!(src.wavevector > 0.0)) throw ConfigError("mode.k must be positive (incident wave travels right)");
    const double x_source = doc.number("mode", "x_source");
    if (x_source <= grid.x0() || x_source >= grid.x_max()) {
      throw ConfigError("mode.x_source lies outside the grid");
    }
    src.s_index = grid.nearest_index(x_source);

    const std::string front = doc.word("mode", "front", "uniform");
    if (front == "uniform") {
      src.front = UniformFront{};
    } else if (front == "empty") {
      src.front = EmptyFront{};
    } else if (front == "gaussian") {
      const double l_g = doc.number("mode", "l_g");
      if (!(l_g > 0.0)) throw ConfigError("mode.l_g must be positive");
      const double x_g = doc.number("mode", "x_g");
      if (!(x_g > grid.position(src.s_index))) throw ConfigError("mode.x_g must lie right of mode.x_source");
      src.front = GaussianFront{x_g, l_g};
    } else {
      throw ConfigError("mode.front: unknown front '" + front + "'");
    }

    const std::string disp = doc.word("mode", "dispersion", "continuum");
    if (disp == "continuum") {
      dispersion = Dispersion::Continuum;
    } else if (disp == "lattice") {
      dispersion = Dispersion::Lattice;
      src.frequency = lattice_frequency(src.wavevector, dx, dt);
    } else {
      throw ConfigError("mode.dispersion: expected 'continuum' or 'lattice', got '" + disp + "'");
    }
    validate_source(grid, src);

    potential = potential + PotentialSpec(read_absorber(doc, "absorber_right", Side::Right,
                                                        defaults::kRightAbsorberOnset));
    if (type == "transparent_source") {
      potential = potential + PotentialSpec(read_absorber(doc, "absorber_left", Side::Left,
                                                          grid.x0() + defaults::kLeftAbsorberInset));
      mode = TransparentSourceMode{src};
    } else {
      if (doc.has_section("absorber_left")) {
        throw ConfigError("absorber_left: the hard source evolves only x >= x_source; no left absorber");
      }
      mode = HardSourceMode{src};
    }
  } else {
    throw ConfigError("mode.type: expected closed, hard_source or transparent_source, got '" + type + "'");
  }

  Scenario scenario{
      .grid = grid,
      .time = TimeGrid(dt, steps),
      .mode = std::move(mode),
      .potential = std::move(potential),
      .packet = packet,
      .snapshot_stride = doc.count("output", "snapshot_stride", defaults::kSnapshotStride),
      .probes = {},
      .output_dir = doc.word("output", "dir", "out"),
      .dispersion = dispersion,
  };
  if (scenario.snapshot_stride < 1) throw ConfigError("output.snapshot_stride must be >= 1");
  if (const auto probes = doc.raw("output", "probes")) {
    scenario.probes = parse_probe_list(*probes);
  } else {
    scenario.probes = {defaults::kReflectedProbe, defaults::kTransmittedProbe};
  }
  scenario.validate();
  return scenario;
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::optional<SquareBarrier> find_barrier(const PotentialSpec& potential) {
  const auto& v = potential.variant();
  if (const auto* sq = std::get_if<SquareBarrier>(&v)) return *sq;
  if (const auto* osc = std::get_if<OscillatingBarrier>(&v)) return SquareBarrier{osc->v0, osc->a, osc->b};
  if (const auto* c = std::get_if<Composite>(&v)) {
    for (const auto& part : c->parts) {
      if (auto found = find_barrier(part)) return found;
    }
  }
  return std::nullopt;
}

Scenario with_wavevector(const Scenario& scenario, double k) {
  Scenario copy = scenario;
  auto retarget = [&](SourceSpec& src) {
    src.wavevector = k;
    src.frequency.reset();
    if (scenario.dispersion == Dispersion::Lattice) {
      src.frequency = lattice_frequency(k, scenario.grid.dx(), scenario.time.dt);
    }
  };
  if (auto* h = std::get_if<HardSourceMode>(&copy.mode)) retarget(h->source);
  if (auto* t = std::get_if<TransparentSourceMode>(&copy.mode)) retarget(t->source);
  return copy;
}

}  // namespace tdse
