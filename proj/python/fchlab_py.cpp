#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <limits>
#include <sstream>

#include "fchlab/characteristics.hpp"
#include "fchlab/config.hpp"
#include "fchlab/grid_spectral.hpp"
#include "fchlab/invariants_audit.hpp"
#include "fchlab/kernel.hpp"
#include "fchlab/littlewood_paley.hpp"
#include "fchlab/picard.hpp"
#include "fchlab/presets.hpp"
#include "fchlab/report_io.hpp"
#include "fchlab/snapshot.hpp"

namespace py = pybind11;
using namespace fch;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Array& a, double length) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array of samples");
  const double* p = a.data();
  return Field(PeriodicGrid(static_cast<std::size_t>(a.shape(0)), length), std::vector<double>(p, p + a.shape(0)));
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }
Array to_array(const Field& f) { return to_array(f.values()); }

Array to_matrix(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Array out({rows.size(), cols});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < cols; ++k) w(i, k) = rows[i][k];
  return out;
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["name"] = v.name;
  d["passed"] = v.passed;
  d["measured"] = v.measured;
  d["tolerance"] = v.tolerance;
  d["notice"] = v.notice;
  d["details"] = v.details;
  return d;
}

py::dict diagnostics_dict(const RunReport& run) {
  std::vector<double> t, l1, im, en, mn, mx, uxmin, uxmax, odd;
  for (const auto& r : run.diagnostics) {
    t.push_back(r.t);
    l1.push_back(r.l1_m);
    im.push_back(r.int_m);
    en.push_back(r.energy_um);
    mn.push_back(r.min_m);
    mx.push_back(r.max_m);
    uxmin.push_back(r.min_ux);
    uxmax.push_back(r.max_ux);
    odd.push_back(r.odd_defect);
  }
  py::dict d;
  d["t"] = to_array(t);
  d["l1_m"] = to_array(l1);
  d["int_m"] = to_array(im);
  d["energy_um"] = to_array(en);
  d["min_m"] = to_array(mn);
  d["max_m"] = to_array(mx);
  d["min_ux"] = to_array(uxmin);
  d["max_ux"] = to_array(uxmax);
  d["odd_defect"] = to_array(odd);
  return d;
}

py::dict run_dict(const RunReport& run) {
  py::dict d;
  d["diagnostics"] = diagnostics_dict(run);
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  for (const auto& s : run.trajectory) {
    times.push_back(s.t);
    states.push_back(s.m.values());
  }
  d["times"] = to_array(times);
  d["trajectory"] = to_matrix(states);
  d["final_t"] = run.last_state().t;
  d["final_m"] = to_array(run.last_state().m);
  py::list events;
  for (const auto& e : run.events) {
    py::dict ev;
    ev["t"] = e.t;
    ev["x"] = e.x;
    ev["value"] = e.value;
    ev["reason"] = e.reason;
    events.append(ev);
  }
  d["events"] = events;
  d["blew_up"] = run.blew_up();
  d["steps"] = run.steps;
  return d;
}

SimConfig sim_config(double a, double length, double horizon, double diagnostics_every, bool dealias,
                     double blowup_threshold, double fixed_dt, std::size_t n) {
  SimConfig c;
  c.a = a;
  c.length = length;
  c.n = n;
  c.horizon = horizon;
  c.diagnostics_every = diagnostics_every;
  c.snapshot_every = horizon;
  c.dealias = dealias;
  c.blowup_threshold = blowup_threshold;
  c.fixed_dt = fixed_dt;
  return c;
}

}  // namespace

PYBIND11_MODULE(_fchlab, m) {
  m.doc() = "Fractional-inertia Camassa-Holm numerics";

  py::register_exception<NonFiniteError>(m, "NonFiniteError", PyExc_FloatingPointError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SnapshotError>(m, "SnapshotError", PyExc_ValueError);

  m.def("helmholtz_apply", [](const Array& f, double length, double a) {
    return to_array(helmholtz_apply(to_field(f, length), a));
  }, py::arg("samples"), py::arg("length"), py::arg("a"), "(1 - d_xx)^a on the periodic grid.");
  m.def("helmholtz_invert", [](const Array& f, double length, double a) {
    return to_array(helmholtz_invert(to_field(f, length), a));
  }, py::arg("samples"), py::arg("length"), py::arg("a"));
  m.def("derivative", [](const Array& f, double length, int order) {
    return to_array(derivative(to_field(f, length), order));
  }, py::arg("samples"), py::arg("length"), py::arg("order") = 1);
  m.def("dealias", [](const Array& f, double length) { return to_array(dealias(to_field(f, length))); },
        py::arg("samples"), py::arg("length"));
  m.def("interpolate", [](const Array& f, double length, const std::vector<double>& points) {
    return to_array(interpolate(to_field(f, length), points));
  }, py::arg("samples"), py::arg("length"), py::arg("points"));
  m.def("grid_x", [](std::size_t n, double length) {
    const PeriodicGrid g(n, length);
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = g.signed_x(j);
    return to_array(x);
  }, py::arg("n"), py::arg("length"), "Signed sample coordinates in [-L/2, L/2), FFT order.");

  m.def("green_kernel", [](double a, double x, double period) {
    QuadSpec q;
    q.period = period;
    const auto v = green_kernel_with_derivative(a, x, q);
    return py::make_tuple(v.value, v.derivative);
  }, py::arg("a"), py::arg("x"), py::arg("period") = std::numeric_limits<double>::infinity(),
     "(G_a(x), G_a'(x)).");
  m.def("kernel_derivative_sup", [](double a, double period) { return kernel_derivative_sup(a, period); },
        py::arg("a"), py::arg("period") = std::numeric_limits<double>::infinity());
  m.def("kernel_convolve", [](const Array& f, double length, double a) {
    return to_array(kernel_convolve(to_field(f, length), a));
  }, py::arg("samples"), py::arg("length"), py::arg("a"));

  m.def("lp_blocks", [](const Array& f, double length) {
    const Field u = to_field(f, length);
    std::vector<std::vector<double>> rows;
    for (const auto& b : blocks(u, build_partition(u.grid()))) rows.push_back(b.values());
    return to_matrix(rows);
  }, py::arg("samples"), py::arg("length"), "Row i holds the dyadic block j = i - 1.");
  m.def("besov_norm", [](const Array& f, double length, double s, double p, double r) {
    return besov_norm(to_field(f, length), BesovParams{s, p, r});
  }, py::arg("samples"), py::arg("length"), py::arg("s"), py::arg("p") = 2.0, py::arg("r") = 2.0);
  m.def("paraproduct", [](const Array& u, const Array& v, double length) {
    const Field fu = to_field(u, length);
    return to_array(paraproduct(fu, to_field(v, length), build_partition(fu.grid())));
  }, py::arg("u"), py::arg("v"), py::arg("length"));
  m.def("remainder", [](const Array& u, const Array& v, double length) {
    const Field fu = to_field(u, length);
    return to_array(remainder(fu, to_field(v, length), build_partition(fu.grid())));
  }, py::arg("u"), py::arg("v"), py::arg("length"));

  m.def("rhs", [](const Array& mm, double length, double a, bool dealias_on) {
    return to_array(rhs(to_field(mm, length), a, dealias_on));
  }, py::arg("m"), py::arg("length"), py::arg("a"), py::arg("dealias") = true);
  m.def("source_term", [](const Array& u, double length, double a) {
    return to_array(source_term(to_field(u, length), a));
  }, py::arg("u"), py::arg("length"), py::arg("a"));

  m.def("simulate", [](const Array& m0, double length, double a, double horizon, double diagnostics_every,
                       bool dealias_on, double blowup_threshold, double fixed_dt) {
    const SimConfig c = sim_config(a, length, horizon, diagnostics_every, dealias_on, blowup_threshold, fixed_dt,
                                   static_cast<std::size_t>(m0.shape(0)));
    RunReport run;
    {
      py::gil_scoped_release release;
      run = simulate(to_field(m0, length), c);
    }
    return run_dict(run);
  }, py::arg("m0"), py::arg("length"), py::arg("a"), py::arg("horizon"), py::arg("diagnostics_every") = 0.05,
     py::arg("dealias") = true, py::arg("blowup_threshold") = 1e3, py::arg("fixed_dt") = 0.0);

  m.def("picard", [](const Array& u0, double length, double a, double horizon, int iterations, double dt) {
    PicardConfig c;
    c.a = a;
    c.length = length;
    c.n = static_cast<std::size_t>(u0.shape(0));
    c.horizon = horizon;
    c.iterations = iterations;
    c.dt = dt;
    const PicardResult r = iterate(to_field(u0, length), c);
    py::dict d;
    d["differences"] = to_array(r.differences);
    d["ratios"] = to_array(r.ratios);
    d["tail_ratio"] = r.tail_ratio;
    d["geometric"] = r.geometric;
    d["diverged"] = r.diverged;
    d["fitted_constant"] = r.fitted_constant;
    d["existence_window"] = r.existence_window;
    d["final"] = to_array(r.final_state());
    return d;
  }, py::arg("u0"), py::arg("length"), py::arg("a"), py::arg("horizon") = 1.0, py::arg("iterations") = 12,
     py::arg("dt") = 0.01);

  m.def("characteristics", [](const Array& m0, double length, double a, double horizon,
                              double diagnostics_every, std::size_t stride) {
    const SimConfig c = sim_config(a, length, horizon, diagnostics_every, true, 1e3, 0.0,
                                   static_cast<std::size_t>(m0.shape(0)));
    const RunReport run = simulate(to_field(m0, length), c);
    const FlowMap flow = flow_map(transport_series(run.trajectory, a, c.dealias), grid_labels(c.grid(), stride),
                                  diagnostics_every / 2);
    py::dict d;
    d["times"] = to_array(flow.times);
    d["labels"] = to_array(flow.labels);
    d["q"] = to_matrix(flow.q);
    d["q_xi"] = to_matrix(flow.q_xi);
    d["monotone"] = flow.monotone();
    d["lagrangian_defect"] = to_array(lagrangian_invariant(flow, run.trajectory, run.trajectory.front().m));
    return d;
  }, py::arg("m0"), py::arg("length"), py::arg("a"), py::arg("horizon"), py::arg("diagnostics_every") = 0.05,
     py::arg("stride") = 1);

  m.def("probe", [](const Array& u0, double length, double a, double horizon, double eps, int trials,
                    std::uint64_t seed) {
    SimConfig c = sim_config(a, length, horizon, 0.1, true, 1e3, 0.0, static_cast<std::size_t>(u0.shape(0)));
    ProbeOptions opt;
    opt.seed = seed;
    const ProbeReport r = continuous_dependence_probe(to_field(u0, length), eps, c, trials, opt);
    py::dict d;
    d["amplification_besov"] = r.amplification_besov;
    d["amplification_l2"] = r.amplification_l2;
    d["aborted"] = r.aborted;
    d["notice"] = r.notice;
    return d;
  }, py::arg("u0"), py::arg("length"), py::arg("a"), py::arg("horizon"), py::arg("eps") = 1e-4,
     py::arg("trials") = 3, py::arg("seed") = 7);

  m.def("preset_names", &preset_names);
  m.def("preset_initial_momentum", [](const std::string& name) {
    return to_array(preset_initial_momentum(preset_config(name).sim));
  }, py::arg("name"));
  m.def("run_preset", [](const std::string& name, const std::string& overrides, const std::string& out_dir) {
    RunConfig c = preset_config(name);
    if (!overrides.empty()) {
      // Keep the preset's values for every key the overrides do not mention.
      const auto keys = parse_config(overrides).keys;
      std::string merged;
      std::istringstream base(format_config(c));
      for (std::string line; std::getline(base, line);) {
        const auto eq = line.find('=');
        const std::string key = eq == std::string::npos ? "" : line.substr(0, eq);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) merged += line + "\n";
      }
      c = parse_config(merged + overrides);
    }
    PipelineResult res = [&] {
      py::gil_scoped_release release;
      return run_pipeline(c);
    }();
    if (!out_dir.empty()) write_report(out_dir, res);
    py::dict d;
    d["preset"] = name;
    d["audits_passed"] = res.audits_passed();
    d["unexpected_blowup"] = res.unexpected_blowup();
    py::list vs;
    for (const auto& v : res.verdicts) vs.append(verdict_dict(v));
    d["verdicts"] = vs;
    d["run"] = run_dict(res.run);
    return d;
  }, py::arg("name"), py::arg("overrides") = "", py::arg("out_dir") = "",
     "Run a named experiment; `overrides` is key=value text appended to its defaults.");

  m.def("config_help", &config_help);
  m.def("format_snapshot", [](const Array& f, double length, double a, double t) {
    return format_snapshot(to_field(f, length), a, t);
  }, py::arg("samples"), py::arg("length"), py::arg("a"), py::arg("t"));
  m.def("parse_snapshot", [](const std::string& text) {
    const Snapshot s = parse_snapshot(text);
    py::dict d;
    d["samples"] = to_array(s.field);
    d["length"] = s.field.grid().length();
    d["a"] = s.a;
    d["t"] = s.t;
    return d;
  }, py::arg("text"));
}
