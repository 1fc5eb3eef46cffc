#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlbif/c_curves.hpp"
#include "nlbif/chafee_infante.hpp"
#include "nlbif/errors.hpp"
#include "nlbif/nonlocal_equilibria.hpp"
#include "nlbif/pde_sim.hpp"
#include "nlbif/runner.hpp"
#include "nlbif/spectral.hpp"
#include "nlbif/time_maps.hpp"

namespace py = pybind11;
using namespace nlbif;

namespace {

Sign parse_sign(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    throw DomainError("sign must be '+' or '-'");
}

py::dict point_dict(const BranchPoint& p) {
    py::dict d;
    d["j"] = p.j;
    d["sign"] = to_symbol(p.sign);
    d["nu"] = p.nu;
    d["r"] = p.r;
    d["E"] = p.E;
    d["lambda"] = p.lambda;
    d["c"] = p.c;
    d["dc"] = p.dc;
    d["hyperbolic"] = p.hyperbolic;
    d["morse_index"] = p.morse_index;
    d["criterion_gap"] = p.criterion_gap;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Equilibria, bifurcations and dynamics of a nonlocal quasilinear parabolic problem";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<HorizonError>(m, "HorizonError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def_static("odd_cubic", &Nonlinearity::odd_cubic, py::arg("beta") = 1.0)
        .def_static("split_cubic", &Nonlinearity::split_cubic, py::arg("beta_plus") = 1.0, py::arg("beta_minus") = 0.25)
        .def("f", &Nonlinearity::f)
        .def("F", &Nonlinearity::F)
        .def_property_readonly("z_plus", &Nonlinearity::z_plus)
        .def_property_readonly("z_minus", &Nonlinearity::z_minus)
        .def_property_readonly("is_odd", &Nonlinearity::is_odd)
        .def_property_readonly("name", &Nonlinearity::name);

    py::class_<Diffusion>(m, "Diffusion")
        .def_static("constant", &Diffusion::constant, py::arg("value"), py::arg("r_max") = 50.0)
        .def_static("bump", &Diffusion::bump, py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("r0"),
                    py::arg("r_max") = 50.0)
        .def_static(
            "from_knots",
            [](const std::vector<std::tuple<double, double, double>>& knots, double r_max) {
                std::vector<DiffusionKnot> k;
                for (const auto& [r, a, da] : knots) k.push_back({r, a, da});
                return Diffusion::from_knots(k, r_max);
            },
            py::arg("knots"), py::arg("r_max") = 50.0)
        .def("a", &Diffusion::a)
        .def("da", &Diffusion::da)
        .def("A", &Diffusion::A)
        .def_property_readonly("m", &Diffusion::m)
        .def_property_readonly("M", &Diffusion::M);

    m.def(
        "tau", [](const Nonlinearity& f, double E, double lambda, const std::string& s) { return tau(f, E, lambda, parse_sign(s)); },
        py::arg("f"), py::arg("E"), py::arg("lambda_"), py::arg("sign") = "+", "Length of one arch at energy E.");

    m.def(
        "solve_energy",
        [](const Nonlinearity& f, double lambda, int j, const std::string& s) { return solve_energy(f, lambda, j, parse_sign(s)); },
        py::arg("f"), py::arg("lambda_"), py::arg("j"), py::arg("sign") = "+");

    m.def(
        "local_equilibrium",
        [](const Nonlinearity& f, double lambda, int j, const std::string& s, int n) {
            const EquilibriumCI eq = local_equilibrium(f, lambda, j, parse_sign(s), n);
            py::dict d;
            d["E"] = eq.E;
            d["r"] = eq.r;
            d["r_arch"] = eq.r_arch;
            d["x"] = eq.x;
            d["phi"] = eq.phi;
            d["phi_x"] = eq.phi_x;
            d["sign_changes"] = interior_sign_changes(eq.phi);
            d["energy_identity_deviation"] = energy_identity_deviation(eq, f);
            return d;
        },
        py::arg("f"), py::arg("lambda_"), py::arg("j"), py::arg("sign") = "+", py::arg("n") = 4096);

    py::class_<CCurve>(m, "CCurve")
        .def(py::init([](const Nonlinearity& f, int j, const std::string& s, double r_max, int samples) {
                 CCurveOptions o;
                 o.r_max = r_max;
                 o.samples = samples;
                 return CCurve(f, j, parse_sign(s), o);
             }),
             py::arg("f"), py::arg("j"), py::arg("sign") = "+", py::arg("r_max") = 50.0, py::arg("samples") = 200)
        .def("__call__", &CCurve::value)
        .def("derivative", &CCurve::derivative)
        .def("exact_value", &CCurve::exact_value)
        .def_property_readonly("r_end", &CCurve::r_end)
        .def_property_readonly("clamped", &CCurve::clamped)
        .def_property_readonly("r", [](const CCurve& c) {
            std::vector<double> r;
            for (const auto& s : c.samples()) r.push_back(s.r);
            return r;
        })
        .def_property_readonly("c", [](const CCurve& c) {
            std::vector<double> v;
            for (const auto& s : c.samples()) v.push_back(s.c);
            return v;
        });

    py::class_<CCurveOptions>(m, "CCurveOptions")
        .def(py::init<>())
        .def_readwrite("r_max", &CCurveOptions::r_max)
        .def_readwrite("samples", &CCurveOptions::samples)
        .def_readwrite("jobs", &CCurveOptions::jobs);
    m.def("build_curves", &build_curves, py::arg("f"), py::arg("j_max"), py::arg("opts") = CCurveOptions{});

    m.def(
        "find_equilibria",
        [](const Diffusion& a, const std::vector<CCurve>& curves, double nu) {
            const EquilibriumSet set = find_equilibria(a, curves, nu);
            py::dict d;
            d["nu"] = nu;
            d["count"] = set.count();
            d["zero_morse_index"] = set.zero.morse_index;
            py::list pts;
            for (const auto& p : set.points) pts.append(point_dict(p));
            d["points"] = pts;
            d["warnings"] = set.horizon_warnings;
            return d;
        },
        py::arg("a"), py::arg("curves"), py::arg("nu"));

    m.def(
        "sweep",
        [](const Diffusion& a, const std::vector<CCurve>& curves, const std::vector<double>& grid) {
            const BifurcationDiagram dg = sweep(a, curves, grid);
            py::list events;
            for (const auto& e : dg.events) {
                py::dict d;
                d["kind"] = to_string(e.kind);
                d["nu"] = e.nu;
                d["r"] = e.r;
                d["j"] = e.j;
                d["sign"] = to_symbol(e.sign);
                d["direction"] = to_string(e.direction);
                events.append(d);
            }
            py::list counts;
            for (const auto& c : dg.counts) counts.append(py::make_tuple(c.nu, c.predicted, c.direct));
            py::dict out;
            out["events"] = events;
            out["counts"] = counts;
            out["counts_consistent"] = dg.counts_consistent();
            return out;
        },
        py::arg("a"), py::arg("curves"), py::arg("nu_grid"));

    m.def(
        "spectral_index",
        [](const Nonlinearity& f, const Diffusion& a, const std::vector<CCurve>& curves, double nu, int j,
           const std::string& s, int n) {
            const EquilibriumSet set = find_equilibria(a, curves, nu);
            const Sign sign = parse_sign(s);
            for (const auto& p : set.points) {
                if (p.j != j || p.sign != sign) continue;
                const auto psi = reconstruct_profile(f, p.lambda, p.j, p.sign, p.E, n + 1).phi;
                const PositiveCount pc = positive_count(assemble(f, a, psi, nu, p.r, OperatorMode::nonlocal_paper));
                return py::make_tuple(pc.count, p.morse_index);
            }
            throw DomainError("no equilibrium of that class at this nu");
        },
        py::arg("f"), py::arg("a"), py::arg("curves"), py::arg("nu"), py::arg("j"), py::arg("sign") = "+",
        py::arg("n") = 2001, "(spectral positive count, derivative-criterion index) of the first matching equilibrium.");

    m.def(
        "simulate",
        [](const Nonlinearity& f, const Diffusion& a, double nu, const std::vector<double>& u0, double t_end,
           const std::string& form) {
            const Model model{f, a, nu};
            const TrajectoryLog log =
                evolve(u0, model, form == "semilinear" ? Form::semilinear : Form::quasilinear, t_end, {});
            py::dict d;
            d["u"] = log.final_state.u;
            d["t"] = log.final_state.t;
            std::vector<double> V;
            for (const auto& e : log.entries) V.push_back(e.V);
            d["V"] = V;
            d["lyapunov_monotone"] = log.lyapunov_monotone;
            return d;
        },
        py::arg("f"), py::arg("a"), py::arg("nu"), py::arg("u0"), py::arg("t_end"), py::arg("form") = "quasilinear",
        "Evolves grid values u0 (ends included) and returns the final state and logged V.");

    m.def(
        "run",
        [](const std::string& config, const std::string& out, int jobs, double tol_scale) {
            std::ostringstream log;
            const RunResult r = run_file(config, {out, jobs, tol_scale}, log);
            return py::make_tuple(r.status, r.artifacts, log.str());
        },
        py::arg("config"), py::arg("out") = "", py::arg("jobs") = 1, py::arg("tol_scale") = 1.0,
        "Runs a JSON configuration; returns (status, artifacts, log).");
}
