#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/harness.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/lp_decomp.hpp"
#include "mhdlab/snapshot.hpp"

namespace py = pybind11;
using namespace mhdlab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

SpectralField to_field(const Grid2D& g, const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != g.nx() || a.shape(1) != g.ny()) {
    throw std::invalid_argument("array shape does not match the grid");
  }
  PhysicalField p(g);
  std::memcpy(p.samples().data(), a.data(), g.physical_size() * sizeof(double));
  return p.to_spectral();
}

Array to_array(const SpectralField& f) {
  const PhysicalField p = f.to_physical();
  Array out({f.grid().nx(), f.grid().ny()});
  std::memcpy(out.mutable_data(), p.samples().data(), p.samples().size() * sizeof(double));
  return out;
}

State to_state(const Array& u, const Array& v, const Array& psi, double lx, double ly) {
  const Grid2D g(static_cast<int>(u.shape(0)), static_cast<int>(u.shape(1)), lx, ly);
  return State(to_field(g, u), to_field(g, v), to_field(g, psi), 1.0);
}

KernelId kernel_id(const std::string& name) {
  for (KernelId k : {KernelId::K0, KernelId::K1, KernelId::K0dot, KernelId::K1dot}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

py::dict fit_dict(const DecayFit& f) {
  py::dict d;
  d["exponent"] = f.exponent;
  d["stderr"] = f.standard_error;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["window"] = f.window;
  d["samples"] = f.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mhdlab, m) {
  m.doc() = "Damped MHD decay laboratory";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_ValueError);
  py::register_exception<SnapshotError>(m, "SnapshotError", PyExc_IOError);

  m.def("khat", [](const std::string& kind, double t, double xi) { return khat(kernel_id(kind), t, xi); },
        py::arg("kind"), py::arg("t"), py::arg("xi"));

  m.def("kernel_bound_violations", [](std::vector<double> ts, std::vector<double> xis) {
    const auto rep = check_kernel_bounds(ts, xis);
    return py::make_tuple(rep.failures(), rep.max_ratio);
  });

  m.def("bump", &bump);

  m.def(
      "decay_fit",
      [](std::vector<double> t, std::vector<double> values, double lo, double hi) {
        if (t.size() != values.size()) throw std::invalid_argument("length mismatch");
        std::vector<std::pair<double, double>> s;
        for (std::size_t i = 0; i < t.size(); ++i) s.emplace_back(t[i], values[i]);
        return fit_dict(decay_fit(s, {lo, hi}));
      },
      py::arg("t"), py::arg("values"), py::arg("lo"), py::arg("hi"));

  m.def("echo_config", [](const std::string& text) { return echo_config(parse_config(text)); });

  m.def(
      "run",
      [](const std::string& text) {
        const RunConfig cfg = parse_config(text);
        RunRecord rec;
        {
          py::gil_scoped_release release;
          rec = run(cfg);
        }
        py::dict out;
        std::vector<double> t;
        for (const auto& r : rec.reports) t.push_back(r.t);
        out["t"] = t;
        py::dict raw;
        for (const auto& key : norm_component_keys()) {
          std::vector<double> col;
          for (const auto& r : rec.reports) col.push_back(r.raw(key));
          raw[py::str(key)] = col;
        }
        out["raw"] = raw;
        out["aborted"] = rec.aborted;
        out["last_healthy_t"] = rec.last_healthy_t;
        out["max_step_residual"] = rec.max_step_residual;
        out["max_divergence"] = rec.max_divergence;
        return out;
      },
      py::arg("config_text"));

  m.def("read_snapshot", [](const std::string& path) {
    const State s = read_snapshot(path);
    return py::make_tuple(to_array(s.u), to_array(s.v), to_array(s.psi), s.grid().lx(),
                          s.grid().ly());
  });

  m.def("write_snapshot", [](const std::string& path, const Array& u, const Array& v,
                             const Array& psi, double lx, double ly) {
    write_snapshot(path, to_state(u, v, psi, lx, ly));
  });

  m.def("pressure", [](const Array& u, const Array& v, const Array& psi, double lx, double ly) {
    return to_array(pressure_recover(to_state(u, v, psi, lx, ly)));
  });

  m.def("energy", [](const Array& u, const Array& v, const Array& psi, double lx, double ly) {
    return energy(to_state(u, v, psi, lx, ly));
  });
}
