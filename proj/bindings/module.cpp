#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "napde/analysis.hpp"
#include "napde/opsandbox.hpp"
#include "napde/presets.hpp"
#include "napde/runner.hpp"

namespace py = pybind11;
using namespace napde;

namespace {

ProblemSpec spec_for(const std::string& preset_name, double T) {
    ProblemSpec spec = preset(preset_name);
    spec.horizon = T;
    return spec;
}

Scheme scheme_for(const std::string& name, double tau) {
    if (name != "implicit-euler" && name != "crank-nicolson")
        throw SemanticError("unknown scheme '" + name + "'");
    return Scheme{name == "crank-nicolson" ? SchemeKind::CrankNicolson
                                           : SchemeKind::ImplicitEuler,
                  tau};
}

} // namespace

PYBIND11_MODULE(_napde, m) {
    m.doc() = "solver and verification workbench for 1-d parabolic systems";

    py::register_exception<Error>(m, "NapdeError");

    m.def("preset_names", &preset_names);

    m.def(
        "validate",
        [](const std::string& preset_name) {
            const ValidationReport r = validate_spec(preset(preset_name));
            py::dict d;
            d["pass"] = r.pass;
            d["first_failure"] = r.first_failure;
            d["m1"] = r.m1;
            d["M1"] = r.M1;
            d["m2"] = r.m2;
            d["M2"] = r.M2;
            d["kappa1"] = r.kappa1;
            d["kappa2"] = r.kappa2;
            return d;
        },
        py::arg("preset"));

    m.def(
        "solve",
        [](const std::string& preset_name, int N, double tau, double T,
           const std::string& scheme) {
            const ProblemSpec spec = spec_for(preset_name, T);
            const DiscreteSpace space = build_space(build_mesh(N), spec);
            auto x0 = [&](double z) {
                return Vector(spec.G * Vector::Constant(spec.k, std::sin(M_PI * z)));
            };
            const Trajectory traj =
                solve_ivp(space, spec, scheme_for(scheme, tau), x0, spec.f);
            py::dict d;
            d["t"] = traj.times;
            d["norm_h"] = traj.norm_h;
            d["norm_v"] = traj.norm_v;
            d["energy"] = traj.energy;
            return d;
        },
        py::arg("preset"), py::arg("N") = 100, py::arg("tau") = 1e-3, py::arg("T") = 1.0,
        py::arg("scheme") = "implicit-euler");

    m.def(
        "garding_margin",
        [](const std::string& preset_name, int N, double t) {
            const ProblemSpec spec = preset(preset_name);
            const ValidationReport rep = validate_spec(spec);
            const EllipticityEstimate est =
                ellipticity_constants(rep, rep.p1_sup, 1.0, 2.0 / rep.m2);
            const DiscreteSpace space = build_space(build_mesh(N), spec);
            const GardingResult g = garding_check(space, spec, t, est.omega, est.alpha);
            py::dict d;
            d["margin"] = g.margin;
            d["threshold"] = g.threshold;
            d["pass"] = g.pass;
            d["omega"] = est.omega;
            d["alpha"] = est.alpha;
            return d;
        },
        py::arg("preset"), py::arg("N") = 32, py::arg("t") = 0.0);

    m.def(
        "transform_gap",
        [](int N, std::uint64_t seed, bool with_C, double tol) {
            const ops::TransformReport r =
                ops::right_left_equivalence(ops::random_problem(N, seed, with_C), tol);
            py::dict d;
            d["max_gap"] = r.max_gap;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("N") = 8, py::arg("seed") = 1, py::arg("with_C") = false,
        py::arg("tol") = 1e-6);

    m.def(
        "run_config",
        [](const std::string& text) {
            const cli::RunResult r = cli::run(parse_config_text(text));
            py::dict d;
            d["exit_code"] = r.exit_code;
            d["summary"] = r.summary;
            d["first_failure"] = r.first_failure;
            return d;
        },
        py::arg("config_text"));
}
