#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "optocool/cli.hpp"
#include "optocool/cooling.hpp"
#include "optocool/errors.hpp"
#include "optocool/format.hpp"
#include "optocool/linear_model.hpp"
#include "optocool/rates.hpp"
#include "optocool/report.hpp"
#include "optocool/spectra.hpp"
#include "optocool/steady_state.hpp"
#include "optocool/trajectory.hpp"

namespace py = pybind11;
using namespace optocool;

namespace {

// Reports cross the boundary as plain dicts.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Double-cavity-mode optomechanical cooling under laser phase noise";

    // The message starts with the error kind, e.g. "Unstable: ...".
    py::register_exception<Error>(m, "OptocoolError", PyExc_RuntimeError);

    py::enum_<Sideband>(m, "Sideband").value("BLUE", Sideband::Blue).value("RED", Sideband::Red);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega_m, double gamma_1, double gamma_2, double Omega_c, double temperature,
                         double eta, std::optional<double> quality_factor, std::optional<double> gamma_m) {
                 SystemParamsInput in;
                 in.omega_m = omega_m;
                 in.gamma_1 = gamma_1;
                 in.gamma_2 = gamma_2;
                 in.Omega_c = Omega_c;
                 in.temperature = temperature;
                 in.eta = eta;
                 in.quality_factor = quality_factor;
                 in.gamma_m = gamma_m;
                 return validate_params(in);
             }),
             py::arg("omega_m"), py::arg("gamma_1"), py::arg("gamma_2"), py::arg("Omega_c"), py::arg("temperature"),
             py::arg("eta"), py::arg("quality_factor") = py::none(), py::arg("gamma_m") = py::none())
        .def_readonly("omega_m", &SystemParams::omega_m)
        .def_readonly("gamma_1", &SystemParams::gamma_1)
        .def_readonly("gamma_2", &SystemParams::gamma_2)
        .def_readonly("gamma_m", &SystemParams::gamma_m)
        .def_readonly("quality_factor", &SystemParams::quality_factor)
        .def_readonly("eta", &SystemParams::eta)
        .def_readonly("Omega_c", &SystemParams::Omega_c)
        .def_readonly("temperature", &SystemParams::temperature)
        .def("n_mi", &SystemParams::n_mi)
        .def("to_dict", [](const SystemParams& p) { return to_py(to_json(p)); });

    py::class_<NoiseModel>(m, "NoiseModel")
        .def_static("white", &NoiseModel::white, py::arg("Gamma_l"))
        .def_static("finite_correlation", &NoiseModel::finite_correlation, py::arg("Gamma_l"), py::arg("gamma_c"))
        .def_readonly("Gamma_l", &NoiseModel::Gamma_l)
        .def_readonly("gamma_c", &NoiseModel::gamma_c)
        .def_property_readonly("kind", [](const NoiseModel& n) { return std::string(to_string(n.kind)); });

    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("alpha_1", &SteadyState::alpha_1)
        .def_readonly("alpha_2", &SteadyState::alpha_2)
        .def_readonly("beta", &SteadyState::beta)
        .def_readonly("Delta_L", &SteadyState::Delta_L)
        .def_readonly("residual", &SteadyState::residual)
        .def("to_dict", [](const SteadyState& s) { return to_py(to_json(s)); });

    py::class_<MeasurementParams>(m, "MeasurementParams")
        .def(py::init([](double omega_3, double gamma_3p, double Omega_d, Sideband sideband, double gamma_mp,
                         double n_mf) {
                 MeasurementParams mp{omega_3, gamma_3p, Omega_d, sideband, gamma_mp, n_mf};
                 return validate_measurement(mp);
             }),
             py::arg("omega_3"), py::arg("gamma_3p"), py::arg("Omega_d"), py::arg("sideband"), py::arg("gamma_mp"),
             py::arg("n_mf"))
        .def_readonly("gamma_3p", &MeasurementParams::gamma_3p)
        .def_readonly("gamma_mp", &MeasurementParams::gamma_mp)
        .def_readonly("n_mf", &MeasurementParams::n_mf)
        .def_readonly("sideband", &MeasurementParams::sideband);

    m.def("solve_steady_state", [](const SystemParams& p) { return solve_classical_steady_state(p); });
    m.def("approximate_steady_state", &approximate_steady_state);
    m.def("cooling_report",
          [](const SystemParams& p, const NoiseModel& noise) { return to_py(to_json(cooling_report(p, noise))); });
    m.def("phase_noise_phonons", &phase_noise_phonons);
    m.def("gamma_tilde", &gamma_tilde);
    m.def("q_limit", &q_limit, py::arg("temperature"), py::arg("omega_m"), py::arg("quality_factor"));
    m.def("thermal_occupation", &thermal_occupation, py::arg("temperature"), py::arg("omega_m"));

    m.def("measurement_alpha_3", [](const SystemParams& p, const MeasurementParams& mp) {
        return measurement_steady_state(p, mp).alpha_3;
    });
    m.def(
        "output_spectrum",
        [](const SystemParams& p, const MeasurementParams& mp, cplx alpha_3, std::optional<std::vector<double>> grid,
           bool full) {
            const auto g = grid ? *grid : default_omega_grid(mp);
            const auto s = full ? output_spectrum_full(p, mp, alpha_3, g) : output_spectrum(p, mp, alpha_3, g);
            py::dict d;
            d["omega"] = s.omega_grid;
            d["psd"] = s.psd;
            d["peak_intensity"] = s.peak_intensity;
            return d;
        },
        py::arg("params"), py::arg("measurement"), py::arg("alpha_3"), py::arg("omega_grid") = py::none(),
        py::arg("full") = false);
    m.def("sideband_ratio", &sideband_ratio);
    m.def(
        "infer_phonon",
        [](double I_r, double I_b, double sigma_r, double sigma_b) {
            return to_py(to_json(infer_phonon(I_r, I_b, sigma_r, sigma_b)));
        },
        py::arg("I_r"), py::arg("I_b"), py::arg("sigma_r") = 0.0, py::arg("sigma_b") = 0.0);

    m.def(
        "ensemble_phonon",
        [](const SystemParams& p, const NoiseModel& noise, std::size_t n_traj, std::uint64_t seed) {
            const auto model = build_cooling_model(p, solve_classical_steady_state(p), noise);
            EnsembleOptions eo;
            eo.n_traj = n_traj;
            eo.seed = seed;
            return to_py(to_json(ensemble_phonon(model, eo)));
        },
        py::arg("params"), py::arg("noise"), py::arg("n_traj") = 100, py::arg("seed") = 42);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "optocool");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
