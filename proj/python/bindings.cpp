#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "critwave/diagnostics.hpp"
#include "critwave/experiments.hpp"
#include "critwave/multipliers.hpp"
#include "critwave/reference.hpp"
#include "critwave/wave_dynamics.hpp"

namespace py = pybind11;
using namespace critwave;

namespace {

py::dict trace_dict(const EnergyTrace& tr) {
  py::dict d;
  d["t"] = tr.time;
  d["E"] = tr.energy;
  d["E1"] = tr.higher_energy;
  d["ut_l2sq"] = tr.ut_l2sq;
  d["diss_integral"] = tr.dissipation;
  d["l10"] = tr.l10;
  d["l12"] = tr.l12;
  d["sm_defect"] = tr.sm_defect;
  return d;
}

SpectralField field_1d(const std::vector<double>& coeffs, double length) {
  auto d = std::make_shared<const BoxDomain>(1, std::vector<double>{length}, static_cast<int>(coeffs.size()));
  return SpectralField(d, coeffs);
}

std::vector<double> to_vector(const SpectralField& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudospectral simulator for the energy-damped quintic wave equation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<HashMismatch>(m, "HashMismatch", PyExc_RuntimeError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  m.def("config_hash", [](const std::string& text) { return config_hash(parse_experiment_config(text)); },
        py::arg("config_text"));
  m.def("canonical_config", [](const std::string& text) { return canonical_config(parse_experiment_config(text)); },
        py::arg("config_text"));

  m.def(
      "simulate",
      [](const std::string& text) {
        const ExperimentConfig cfg = parse_experiment_config(text);
        std::optional<RunOutput> run;
        {
          py::gil_scoped_release release;
          run.emplace(run_experiment(cfg));
        }
        const RunOutput& r = *run;
        py::dict out;
        out["trace"] = trace_dict(r.result.trace);
        out["summary"] = py::module_::import("json").attr("loads")(summary_json(r.summary));
        out["final_u"] = to_vector(r.result.final_state.u);
        out["final_v"] = to_vector(r.result.final_state.v);
        return out;
      },
      py::arg("config_text"), "Run a config given as text; returns trace columns, summary and final coefficients.");

  m.def(
      "run_simulate",
      [](const std::string& text, const std::filesystem::path& out) {
        return summary_json(run_simulate(parse_experiment_config(text), out));
      },
      py::arg("config_text"), py::arg("out_dir"));

  m.def(
      "oracle_check",
      [](const std::string& text) {
        const auto r = run_oracle_check(parse_experiment_config(text));
        return py::make_tuple(r.deviation, r.pass);
      },
      py::arg("config_text"));

  m.def(
      "multiplier_suite",
      [](int dim, int modes, std::vector<double> levels, std::uint64_t seed) {
        AnalysisSpec a;
        a.multiplier_levels = std::move(levels);
        const auto rep = run_multiplier_suite(BoxDomain::make(dim, modes), a, seed);
        py::dict checks;
        for (const auto& c : rep.checks) checks[py::str(c.name)] = py::make_tuple(c.pass, c.measured);
        return checks;
      },
      py::arg("dim"), py::arg("modes"), py::arg("levels"), py::arg("seed") = 0);

  m.def("cutoff_profile", &cutoff_profile, py::arg("s"));
  m.def("damped_kinetic", &damped_kinetic, py::arg("potential"), py::arg("kinetic0"), py::arg("dt"));
  m.def("linear_lower_bound", &linear_lower_bound, py::arg("e0"), py::arg("t"));
  m.def("nakao_envelope", &nakao_envelope, py::arg("e0"), py::arg("c1"), py::arg("n"));

  m.def(
      "decay_fit",
      [](const std::vector<double>& t, const std::vector<double>& e, double t0, double t1) {
        const auto f = decay_fit(t, e, t0, t1);
        return py::make_tuple(f.exponent, f.constant);
      },
      py::arg("times"), py::arg("energies"), py::arg("t_begin"), py::arg("t_end"));

  m.def(
      "bootstrap_trap",
      [](double a0, double c) {
        const auto b = bootstrap_trap(a0, c);
        return py::make_tuple(b.trapped, b.ceiling, b.threshold);
      },
      py::arg("a0"), py::arg("c"));

  m.def(
      "quintic_projection",
      [](const std::vector<double>& coeffs, double length) {
        return to_vector(quintic_term(field_1d(coeffs, length), MultiplierSpec::identity()));
      },
      py::arg("coeffs"), py::arg("length"), "<u^5, phi_j> on a 1D box via the padded transform");
  m.def(
      "exact_quintic_projection",
      [](const std::vector<double>& coeffs, double length) {
        return to_vector(exact_quintic_1d(field_1d(coeffs, length)));
      },
      py::arg("coeffs"), py::arg("length"), "<u^5, phi_j> on a 1D box via trigonometric expansion");
}
