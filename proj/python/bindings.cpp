#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ringpair/commands.hpp"
#include "ringpair/schmidt.hpp"

namespace py = pybind11;
using namespace ringpair;

namespace {

std::vector<double> abs_values(const ComplexSpectrum& s)
{
    std::vector<double> out;
    out.reserve(s.values.size());
    for (const auto& v : s.values)
        out.push_back(std::abs(v));
    return out;
}

py::dict evaluation_dict(const PointEvaluation& e)
{
    py::dict d;
    d["purity"] = e.purity ? py::cast(*e.purity) : py::none();
    d["relative_rate"] = e.relative_rate;
    d["error"] = e.error ? py::cast(*e.error) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_ringpair, m)
{
    m.doc() = "Joint spectra and heralded-photon purity of pulsed ring resonator pair sources";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<NumericalGuardError>(m, "NumericalGuardError", PyExc_ArithmeticError);

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def(py::init<double, std::size_t, double>(), py::arg("half_width"), py::arg("n_points"),
             py::arg("center_offset") = 0.0)
        .def_static("from_spacing", &FrequencyGrid::from_spacing)
        .def_property_readonly("size", &FrequencyGrid::size)
        .def_property_readonly("spacing", &FrequencyGrid::spacing)
        .def_property_readonly("first", &FrequencyGrid::first)
        .def_property_readonly("last", &FrequencyGrid::last)
        .def("points", &FrequencyGrid::points)
        .def("__len__", &FrequencyGrid::size);

    py::class_<Resonance>(m, "Resonance")
        .def(py::init([](double omega0, double q_loaded, double detuning) {
                 return Resonance{omega0, q_loaded, detuning};
             }),
             py::arg("omega0") = 1e5, py::arg("q_loaded") = 1e5, py::arg("detuning") = 0.0)
        .def_readwrite("omega0", &Resonance::omega0)
        .def_readwrite("q_loaded", &Resonance::q_loaded)
        .def_readwrite("detuning", &Resonance::detuning)
        .def_property_readonly("linewidth", &Resonance::linewidth);

    py::class_<PumpSpec>(m, "PumpSpec")
        .def_static("single", &PumpSpec::single, py::arg("tau_p"))
        .def_static("dual", &PumpSpec::dual, py::arg("tau_p"), py::arg("eta"), py::arg("delta_tau"),
                    py::arg("phi") = std::numbers::pi)
        .def_static("target", &PumpSpec::target, py::arg("sigma"), py::arg("tau_p") = 0.0)
        .def_property_readonly("shape", [](const PumpSpec& p) { return std::string(to_string(p.shape)); })
        .def_readwrite("tau_p", &PumpSpec::tau_p)
        .def_readwrite("eta", &PumpSpec::eta)
        .def_readwrite("delta_tau", &PumpSpec::delta_tau)
        .def_readwrite("phi", &PumpSpec::phi)
        .def_readwrite("sigma", &PumpSpec::sigma);

    py::class_<RingSource>(m, "RingSource")
        .def_static("standard", &RingSource::standard, py::arg("pump"), py::arg("q_loaded") = 1e5)
        .def("shifted", &RingSource::shifted)
        .def("single_pulse_reference", &RingSource::single_pulse_reference)
        .def_readwrite("pump_res", &RingSource::pump_res)
        .def_readwrite("signal_res", &RingSource::signal_res)
        .def_readwrite("idler_res", &RingSource::idler_res)
        .def_readwrite("pump", &RingSource::pump)
        .def_readwrite("pulse_energy", &RingSource::pulse_energy);

    py::class_<JointSpectralAmplitude>(m, "JointSpectralAmplitude")
        .def_property_readonly("idler_grid", &JointSpectralAmplitude::idler_grid)
        .def_property_readonly("signal_grid", &JointSpectralAmplitude::signal_grid)
        .def_property_readonly("values", &JointSpectralAmplitude::values)
        .def_property_readonly("norm_sq", &JointSpectralAmplitude::norm_sq);

    py::class_<SchmidtSpectrum>(m, "SchmidtSpectrum")
        .def_readonly("coefficients", &SchmidtSpectrum::coefficients)
        .def_readonly("purity", &SchmidtSpectrum::purity)
        .def_readonly("schmidt_number", &SchmidtSpectrum::schmidt_number)
        .def_readonly("rate_sum", &SchmidtSpectrum::rate_sum);

    m.def(
        "pump_envelope_abs",
        [](const FrequencyGrid& g, const RingSource& s) { return abs_values(incident_envelope(s, g)); },
        py::arg("grid"), py::arg("source"), "|alpha_p| of the scaled incident pump");
    m.def(
        "in_resonator_abs",
        [](const FrequencyGrid& g, const RingSource& s) {
            return abs_values(in_resonator_field(incident_envelope(s, g), s.pump_res));
        },
        py::arg("grid"), py::arg("source"));
    m.def(
        "build_jsa",
        [](const RingSource& s, const FrequencyGrid& idler, const FrequencyGrid& signal) {
            return build_jsa(s, idler, signal);
        },
        py::arg("source"), py::arg("idler_grid"), py::arg("signal_grid"));
    m.def("jsi", &jsi);
    m.def("purity", &purity);
    m.def("relative_rate", &relative_rate);
    m.def(
        "schmidt_spectrum", [](const JointSpectralAmplitude& j) { return schmidt_spectrum(j); }, py::arg("jsa"));

    m.def(
        "evaluate",
        [](const PumpSpec& pump, std::size_t jsa_points, double q_loaded) {
            EvaluationSettings settings;
            settings.jsa_points = jsa_points;
            return evaluation_dict(PumpEvaluator(RingSource::standard(pump, q_loaded), settings).evaluate(pump));
        },
        py::arg("pump"), py::arg("jsa_points") = 128, py::arg("q_loaded") = 1e5,
        "Purity and R/R_0 of a pump on three identical resonances");

    m.def(
        "optimize",
        [](double tau_p, std::vector<double> floors, double phi) {
            const auto reports = optimize_rate_floors(tau_p, floors, phi);
            py::list out;
            for (const auto& r : reports)
                out.append(py::dict(py::arg("rate_floor") = r.rate_floor, py::arg("feasible") = r.feasible,
                                    py::arg("eta") = r.best_eta, py::arg("delta_tau") = r.best_delta_tau,
                                    py::arg("purity") = r.best_purity,
                                    py::arg("relative_rate") = r.achieved_rate_ratio));
            return out;
        },
        py::arg("tau_p"), py::arg("rate_floors"), py::arg("phi") = std::numbers::pi);

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_text, const std::string& out_dir) {
            const RunConfig cfg = RunConfig::parse(config_text, "<python>");
            CommandOptions opts;
            opts.out_dir = out_dir;
            CommandResult r;
            if (command == "spectrum")
                r = cmd_spectrum(cfg, opts);
            else if (command == "jsi")
                r = cmd_jsi(cfg, opts);
            else if (command == "sweep")
                r = cmd_sweep(cfg, opts);
            else if (command == "optimize")
                r = cmd_optimize(cfg, opts);
            else if (command == "sensitivity")
                r = cmd_sensitivity(cfg, opts);
            else
                throw ConfigError("unknown command: " + command);
            return py::make_tuple(r.exit_code, r.files, r.summary.dump());
        },
        py::arg("command"), py::arg("config_text"), py::arg("out_dir"),
        "Runs a CLI command; returns (exit_code, files, summary JSON text)");
}
