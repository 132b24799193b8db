#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "tqs/analytics.hpp"
#include "tqs/cli.hpp"
#include "tqs/config_io.hpp"
#include "tqs/sweep.hpp"

namespace py = pybind11;
using namespace tqs;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

ParticleState launch(const ConfigFile& c, double alpha) {
  return point_source_state(c.sim.geometry, c.sim.v0, alpha);
}

py::dict contrast_dict(const Contrast& c) {
  py::dict d;
  d["n_maxima"] = c.n_maxima;
  d["peak_to_valley"] = c.peak_to_valley;
  d["maxima"] = c.maxima;
  d["minima"] = c.minima;
  return d;
}

Histogram histogram_from(py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast> counts, double origin,
                         double bin_width) {
  Histogram h(origin, bin_width, 0, static_cast<std::size_t>(counts.size()));
  const auto* p = counts.data();
  for (py::ssize_t i = 0; i < counts.size(); ++i)
    if (p[i]) h.add(origin + (static_cast<double>(i) + 0.5) * bin_width, p[i]);
  return h;
}

}  // namespace

PYBIND11_MODULE(_tqs, m) {
  m.doc() = "Discrete-time single-slit trajectory simulator";
  m.attr("__version__") = std::string(kToolVersion);

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<ConfigParseError> parse_error(m, "ConfigParseError", PyExc_ValueError);
  static py::exception<PropagationError> propagation_error(m, "PropagationError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const ConfigParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const PropagationError& e) {
      py::set_error(propagation_error, e.what());
    }
  });

  py::class_<ConfigFile>(m, "Config")
      .def(py::init<>(), "Reference configuration.")
      .def_static("from_text", [](const std::string& text) { return parse_config(text, "<text>"); }, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("to_text", &format_config)
      .def_property(
          "tau", [](const ConfigFile& c) { return c.sim.tau; }, [](ConfigFile& c, double v) { c.sim.tau = v; })
      .def_property(
          "v0", [](const ConfigFile& c) { return c.sim.v0; }, [](ConfigFile& c, double v) { c.sim.v0 = v; })
      .def_property(
          "mass", [](const ConfigFile& c) { return c.sim.mass; }, [](ConfigFile& c, double v) { c.sim.mass = v; })
      .def_property(
          "d", [](const ConfigFile& c) { return c.sim.geometry.d; },
          [](ConfigFile& c, double v) { c.sim.geometry.d = v; })
      .def_property(
          "l", [](const ConfigFile& c) { return c.sim.geometry.l; },
          [](ConfigFile& c, double v) { c.sim.geometry.l = v; })
      .def_property(
          "bin_width", [](const ConfigFile& c) { return c.run.bin_width; },
          [](ConfigFile& c, double v) { c.run.bin_width = v; })
      .def("violations",
           [](const ConfigFile& c) {
             std::vector<std::tuple<std::string, std::string, std::string>> out;
             for (const auto& v : check_config(c.sim)) out.emplace_back(to_string(v.kind), v.field, v.message);
             return out;
           })
      .def("__eq__", [](const ConfigFile& a, const ConfigFile& b) { return a == b; })
      .def("__repr__", [](const ConfigFile& c) { return "Config(tau=" + format_real(c.sim.tau) + ")"; });

  m.def(
      "simulate",
      [](const ConfigFile& c, unsigned workers) {
        const auto cfg = validate_config(c.sim);
        SimulationOptions o;
        o.bin_width = c.run.bin_width;
        o.origin = c.run.bin_origin;
        o.workers = workers;
        std::optional<SimulationResult> run;
        {
          py::gil_scoped_release release;
          run.emplace(simulate(cfg, o));
        }
        const auto& r = *run;
        std::vector<double> y;
        std::vector<std::uint64_t> index, steps;
        for (const auto& rec : r.batch.impacts) {
          y.push_back(rec.y_impact);
          index.push_back(rec.emission_index);
          steps.push_back(rec.steps_taken);
        }
        py::dict d;
        d["y"] = to_array(y);
        d["emission_index"] = to_array(index);
        d["steps"] = to_array(steps);
        d["emitted"] = r.batch.emitted;
        d["failures"] = r.batch.failures;
        d["counts"] = to_array(r.histogram.counts());
        d["origin"] = r.histogram.origin();
        d["bin_width"] = r.histogram.bin_width();
        return d;
      },
      py::arg("config"), py::arg("workers") = 1u,
      "Propagate every emitted particle; returns impacts and the histogram.");

  m.def(
      "contrast",
      [](py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast> counts, double origin,
         double bin_width, double smoothing) {
        return contrast_dict(contrast(histogram_from(counts, origin, bin_width), smoothing));
      },
      py::arg("counts"), py::arg("origin") = 0.0, py::arg("bin_width") = 0.025, py::arg("smoothing") = 1.0);

  m.def(
      "propagate",
      [](const ConfigFile& c, double alpha) {
        return propagate_to_detector(launch(c, alpha), validate_config(c.sim)).y_impact;
      },
      py::arg("config"), py::arg("alpha"), "Impact ordinate of a point-source particle launched at alpha (radians).");

  m.def(
      "trajectory",
      [](const ConfigFile& c, double alpha) {
        const auto t = record_trajectory(launch(c, alpha), validate_config(c.sim));
        py::array_t<double> a({static_cast<py::ssize_t>(t.points.size()), py::ssize_t{2}});
        auto v = a.mutable_unchecked<2>();
        for (std::size_t i = 0; i < t.points.size(); ++i) {
          v(static_cast<py::ssize_t>(i), 0) = t.points[i].x;
          v(static_cast<py::ssize_t>(i), 1) = t.points[i].y;
        }
        return a;
      },
      py::arg("config"), py::arg("alpha"));

  m.def(
      "classical_impact",
      [](const ConfigFile& c, double alpha) {
        return classical_reference(launch(c, alpha), c.sim.field, c.sim.geometry, c.sim.mass, c.sim.tau / 1024.0);
      },
      py::arg("config"), py::arg("alpha"));

  m.def("compute_n0", &compute_n0, py::arg("d"), py::arg("v0"), py::arg("tau"));
  m.def("is_black_region", &is_black_region, py::arg("d"), py::arg("v0"), py::arg("tau"),
        py::arg("rel_tol") = kLatticeRelTol);
  m.def(
      "deviation_origins",
      [](double b, double v0, double tau, int i_max) {
        const auto o = deviation_origins(b, v0, tau, i_max);
        py::dict d;
        d["n0"] = o.n0;
        d["step_length"] = o.step_length;
        d["a"] = o.a_pos;
        d["phi"] = o.phi_pos;
        return d;
      },
      py::arg("boundary"), py::arg("v0"), py::arg("tau"), py::arg("i_max"));
  m.def(
      "predict_minima",
      [](const ConfigFile& c, int i_max) { return predict_minima(validate_config(c.sim), i_max); },
      py::arg("config"), py::arg("i_max") = 3);

  m.def(
      "sweep",
      [](const ConfigFile& c, const std::string& parameter, const std::vector<double>& values, double smoothing,
         unsigned workers) {
        SweepOptions o;
        o.bin_width = c.run.bin_width;
        o.origin = c.run.bin_origin;
        o.smoothing_bins = smoothing;
        o.workers = workers;
        const SweepAxis axis{parse_sweep_parameter(parameter), values};
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = run_sweep(c.sim, axis, o);
        }
        py::list out;
        for (const auto& e : r.entries) {
          py::dict d;
          d["value"] = e.value;
          d["ok"] = e.ok;
          d["error"] = e.error;
          d["failures"] = e.failures;
          d["black_region"] = e.black_region;
          d["contrast"] = contrast_dict(e.contrast);
          d["counts"] = e.histogram ? py::object(to_array(e.histogram->counts())) : py::none();
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("parameter"), py::arg("values"), py::arg("smoothing") = 1.0,
      py::arg("workers") = 1u);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "tqs");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
