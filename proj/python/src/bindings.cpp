// Python bindings: tdse1d._core

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <limits>
#include <string>
#include <vector>

#include "tdse/analytic.hpp"
#include "tdse/errors.hpp"
#include "tdse/observables.hpp"
#include "tdse/runner.hpp"
#include "tdse/scenario.hpp"
#include "tdse/tridiagonal.hpp"

namespace py = pybind11;
using tdse::complex;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<complex, py::array::c_style | py::array::forcecast>;

template <class T>
py::array_t<T> to_array(std::span<const T> values) {
  // with a data pointer and no base object numpy copies the values
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(values.size())};
  const std::vector<py::ssize_t> strides{static_cast<py::ssize_t>(sizeof(T))};
  return py::array_t<T>(shape, strides, values.data());
}

std::span<const double> view(const RealArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

std::span<const complex> view(const ComplexArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

template <class F>
py::array_t<complex> map_x(const RealArray& x, F&& f) {
  const auto xs = view(x);
  std::vector<complex> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  return to_array<complex>(out);
}

py::dict series_dict(const tdse::CurrentSeries& s) {
  std::vector<double> t, j;
  t.reserve(s.size());
  j.reserve(s.size());
  for (const auto& [ti, ji] : s.samples()) {
    t.push_back(ti);
    j.push_back(ji);
  }
  py::dict d;
  d["t"] = to_array<double>(t);
  d["j"] = to_array<double>(j);
  return d;
}

tdse::WaveField field_from(const ComplexArray& psi, double x0, double dx) {
  const auto v = view(psi);
  return tdse::WaveField(tdse::SpatialGrid(x0, dx, v.size()), std::vector<complex>(v.begin(), v.end()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Crank-Nicolson solver for the 1D time-dependent Schrodinger equation";

  py::register_exception<tdse::ConfigError>(m, "ConfigError", PyExc_ValueError);
  // Kept as a bare handle: the module owns the type object for the interpreter's lifetime.
  static py::handle numeric_error =
      py::exception<tdse::NumericError>(m, "NumericError", PyExc_ArithmeticError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const tdse::NumericError& e) {
      py::object err = py::reinterpret_borrow<py::object>(numeric_error)(py::str(e.what()));
      err.attr("step") = e.step();
      err.attr("index") = e.index();
      PyErr_SetObject(numeric_error.ptr(), err.ptr());
    }
  });

  m.attr("EXIT_OK") = static_cast<int>(tdse::kExitOk);
  m.attr("EXIT_CONFIG") = static_cast<int>(tdse::kExitConfig);
  m.attr("EXIT_NUMERIC") = static_cast<int>(tdse::kExitNumeric);

  // --- analytic references ---------------------------------------------------

  m.def(
      "barrier_transmission",
      [](double k, double v0, double length) {
        const auto c = tdse::analytic::barrier_transmission(k, v0, length);
        return py::make_tuple(c.T, c.R);
      },
      py::arg("k"), py::arg("v0"), py::arg("length"),
      "Stationary (T, R) for a square barrier of height v0 and the given length.");

  m.def(
      "free_gaussian_field",
      [](const RealArray& x, double t, double center, double sigma, double k0) {
        const tdse::analytic::GaussianPacket p{center, sigma, k0};
        return map_x(x, [&](double xi) { return tdse::analytic::free_gaussian_field(p, xi, t); });
      },
      py::arg("x"), py::arg("t"), py::arg("center"), py::arg("sigma"), py::arg("k0"));

  m.def(
      "box_gaussian_field",
      [](const RealArray& x, double t, double a, double b, double center, double sigma, double k0,
         std::optional<std::size_t> n_images) {
        const tdse::analytic::GaussianPacket p{center, sigma, k0};
        const std::size_t m_img = n_images ? *n_images : tdse::analytic::images_needed(a, b, p, t);
        return map_x(x, [&](double xi) { return tdse::analytic::box_gaussian_field(a, b, p, xi, t, m_img); });
      },
      py::arg("x"), py::arg("t"), py::arg("a"), py::arg("b"), py::arg("center"), py::arg("sigma"),
      py::arg("k0"), py::arg("n_images") = py::none());

  m.def("lattice_frequency", &tdse::lattice_frequency, py::arg("k"), py::arg("dx"), py::arg("dt"));

  // --- numerics --------------------------------------------------------------

  m.def(
      "thomas_solve",
      [](complex alpha, const ComplexArray& beta, const ComplexArray& r) {
        const auto x = tdse::thomas_solve(alpha, view(beta), view(r));
        return to_array<complex>(x);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("r"),
      "Solve alpha x[j+1] + beta[j] x[j] + alpha x[j-1] = r[j] with zero ends.");

  m.def(
      "total_norm", [](const ComplexArray& psi, double dx) { return tdse::total_norm(field_from(psi, 0.0, dx)); },
      py::arg("psi"), py::arg("dx"));
  m.def(
      "current_at",
      [](const ComplexArray& psi, double dx, std::size_t j) { return tdse::current_at(field_from(psi, 0.0, dx), j); },
      py::arg("psi"), py::arg("dx"), py::arg("j"));

  // --- scenarios -------------------------------------------------------------

  py::class_<tdse::Scenario>(m, "Scenario")
      .def_property_readonly("x", [](const tdse::Scenario& s) { return to_array<double>(s.grid.positions()); })
      .def_property_readonly("dx", [](const tdse::Scenario& s) { return s.grid.dx(); })
      .def_property_readonly("dt", [](const tdse::Scenario& s) { return s.time.dt; })
      .def_property(
          "steps", [](const tdse::Scenario& s) { return s.time.n_steps; },
          [](tdse::Scenario& s, std::size_t n) { s.time.n_steps = n; })
      .def_property(
          "snapshot_stride", [](const tdse::Scenario& s) { return s.snapshot_stride; },
          [](tdse::Scenario& s, std::size_t n) {
            if (n == 0) throw tdse::ConfigError("output.snapshot_stride must be positive");
            s.snapshot_stride = n;
          })
      .def_property_readonly("probes", [](const tdse::Scenario& s) { return s.probes; })
      .def_property(
          "output_dir", [](const tdse::Scenario& s) { return s.output_dir; },
          [](tdse::Scenario& s, const std::filesystem::path& p) { s.output_dir = p; })
      .def_property_readonly("mode",
                             [](const tdse::Scenario& s) -> std::string {
                               if (std::holds_alternative<tdse::ClosedMode>(s.mode)) return "closed";
                               if (std::holds_alternative<tdse::HardSourceMode>(s.mode)) return "hard_source";
                               return "transparent_source";
                             })
      .def_property_readonly("wavevector",
                             [](const tdse::Scenario& s) -> std::optional<double> {
                               const auto* src = tdse::source_of(s.mode);
                               return src ? std::optional<double>(src->wavevector) : std::nullopt;
                             })
      .def("initial_field",
           [](const tdse::Scenario& s) { return to_array<complex>(s.initial_field().values()); })
      .def("with_wavevector", &tdse::with_wavevector, py::arg("k"))
      .def("validate", &tdse::Scenario::validate);

  m.def(
      "parse_config", [](const std::string& text, const std::filesystem::path& base) { return tdse::parse_config(text, base); },
      py::arg("text"), py::arg("base_dir") = std::filesystem::path("."));
  m.def("load_config", &tdse::load_config, py::arg("path"));

  m.def(
      "simulate",
      [](const tdse::Scenario& s) {
        tdse::Simulation sim = [&] {
          py::gil_scoped_release release;
          return tdse::simulate(s);
        }();
        py::dict d;
        d["psi"] = to_array<complex>(sim.final_state.field.values());
        d["step"] = sim.final_state.step_index;
        d["t"] = sim.final_state.time;
        py::list currents;
        for (const auto& c : sim.currents) currents.append(series_dict(c));
        d["currents"] = currents;
        d["failed_step"] = sim.failed_step ? py::cast(*sim.failed_step) : py::none();
        d["error"] = sim.error;
        return d;
      },
      py::arg("scenario"),
      "Step the scenario in memory; returns the final field and the probe currents.");

  m.def(
      "run",
      [](const tdse::Scenario& s, const std::filesystem::path& out_dir) {
        tdse::RunReport r = [&] {
          py::gil_scoped_release release;
          return tdse::run_scenario(s, out_dir);
        }();
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["failed_step"] = r.failed_step ? py::cast(*r.failed_step) : py::none();
        d["error"] = r.error;
        d["files"] = r.files;
        return d;
      },
      py::arg("scenario"), py::arg("out_dir") = std::filesystem::path(),
      "Run the scenario and write snapshots, probe currents and run_manifest.json.");

  m.def(
      "sweep",
      [](const tdse::Scenario& s, const RealArray& k_values, std::size_t window, double tol, unsigned threads,
         std::optional<std::filesystem::path> csv) {
        const auto ks = view(k_values);
        const std::vector<double> k_copy(ks.begin(), ks.end());
        const tdse::SweepOptions opts{window, tol, threads};
        std::vector<tdse::ScatteringRecord> recs;
        {
          py::gil_scoped_release release;
          recs = tdse::run_sweep(s, k_copy, opts);
          if (csv) tdse::write_sweep_csv(*csv, recs);
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> k, tn, rn, ta, ra, st;
        std::vector<bool> failed;
        for (const auto& r : recs) {
          k.push_back(r.k);
          tn.push_back(r.T_num);
          rn.push_back(r.R_num);
          ta.push_back(r.T_ana);
          ra.push_back(r.R_ana);
          st.push_back(r.steady_time.value_or(nan));
          failed.push_back(r.failed);
        }
        py::dict d;
        d["k"] = to_array<double>(k);
        d["T_num"] = to_array<double>(tn);
        d["R_num"] = to_array<double>(rn);
        d["T_ana"] = to_array<double>(ta);
        d["R_ana"] = to_array<double>(ra);
        d["steady_time"] = to_array<double>(st);
        d["failed"] = failed;
        return d;
      },
      py::arg("scenario"), py::arg("k_values"), py::arg("window") = 200, py::arg("tol") = 1e-3,
      py::arg("threads") = 0u, py::arg("csv") = py::none(),
      "Transmission sweep over k; optionally writes sweep.csv to `csv`.");

  m.def("k_grid", &tdse::k_grid, py::arg("start"), py::arg("stop"), py::arg("step"));
}
