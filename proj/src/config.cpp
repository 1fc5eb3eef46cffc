#include "nlbif/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlbif/errors.hpp"

namespace nlbif {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

double number(const json& obj, const char* key, double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(std::string("missing numeric field '") + key + "'");
        return fallback;
    }
    if (!obj.at(key).is_number()) fail(std::string("field '") + key + "' must be a number");
    return obj.at(key).get<double>();
}

int integer(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
    return obj.at(key).get<int>();
}

std::string text(const json& obj, const char* key, const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(std::string("missing string field '") + key + "'");
        return fallback;
    }
    if (!obj.at(key).is_string()) fail(std::string("field '") + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

std::vector<double> number_list(const json& v, const char* what) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) fail(std::string(what) + " entries must be numbers");
            out.push_back(x.get<double>());
        }
    } else if (v.is_object()) {
        const double start = number(v, "start", 0.0, true);
        const double stop = number(v, "stop", 0.0, true);
        const int count = integer(v, "count", 0);
        if (count < 2) fail(std::string(what) + ".count must be at least 2");
        for (int i = 0; i < count; ++i) out.push_back(start + (stop - start) * i / (count - 1));
    } else {
        fail(std::string(what) + " must be a number, a list or {start, stop, count}");
    }
    return out;
}

NonlinearitySpec parse_nonlinearity(const json& v) {
    if (!v.is_object()) fail("'nonlinearity' must be an object");
    NonlinearitySpec s;
    s.family = text(v, "family", "", true);
    if (s.family == "odd_cubic") {
        s.beta = number(v, "beta", 1.0);
    } else if (s.family == "split_cubic") {
        s.beta_plus = number(v, "beta_plus", 1.0);
        s.beta_minus = number(v, "beta_minus", 0.25);
    } else {
        fail("unknown nonlinearity family '" + s.family + "' (odd_cubic | split_cubic)");
    }
    return s;
}

DiffusionSpec parse_diffusion(const json& v) {
    if (!v.is_object()) fail("'diffusion' must be an object");
    DiffusionSpec s;
    s.family = text(v, "family", "", true);
    if (s.family == "constant") {
        s.value = number(v, "value", 1.0, true);
    } else if (s.family == "bump") {
        s.alpha = number(v, "alpha", 0.0, true);
        s.beta = number(v, "beta", 0.0, true);
        s.gamma = number(v, "gamma", 0.0, true);
        s.r0 = number(v, "r0", 0.0, true);
    } else if (s.family == "knots") {
        if (!v.contains("knots") || !v.at("knots").is_array() || v.at("knots").empty()) {
            fail("diffusion family 'knots' needs a non-empty 'knots' array of [r, a, da]");
        }
        for (const auto& k : v.at("knots")) {
            if (!k.is_array() || k.size() != 3 || !k[0].is_number() || !k[1].is_number() || !k[2].is_number()) {
                fail("each knot must be [r, a, da]");
            }
            s.knots.push_back({k[0].get<double>(), k[1].get<double>(), k[2].get<double>()});
        }
    } else {
        fail("unknown diffusion family '" + s.family + "' (constant | bump | knots)");
    }
    return s;
}

} // namespace

Tolerances Tolerances::scaled(double factor) const {
    Tolerances t = *this;
    t.interp_tol *= factor;
    t.tol_gap_rel *= factor;
    t.tangency_tol *= factor;
    t.quad_rel_tol *= factor;
    t.endpoint_tol *= factor;
    return t;
}

const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks{"validate", "ccurves",  "equilibria", "sweep",
                                                "spectrum", "simulate", "verify-all"};
    return tasks;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) fail("top level must be an object");
    RunConfig cfg;
    if (!doc.contains("nonlinearity")) fail("missing 'nonlinearity' specification");
    if (!doc.contains("diffusion")) fail("missing 'diffusion' specification");
    cfg.nonlinearity = parse_nonlinearity(doc.at("nonlinearity"));
    cfg.diffusion = parse_diffusion(doc.at("diffusion"));
    cfg.j_max = integer(doc, "j_max", 4);
    if (cfg.j_max < 1) fail("'j_max' must be positive");
    cfg.r_max = number(doc, "r_max", 50.0);
    if (!(cfg.r_max > 0.0)) fail("'r_max' must be positive");
    if (doc.contains("nu")) cfg.nu = number_list(doc.at("nu"), "nu");
    if (doc.contains("nu_grid")) cfg.nu_grid = number_list(doc.at("nu_grid"), "nu_grid");
    for (double x : cfg.nu) {
        if (!(x > 0.0)) fail("'nu' values must be positive");
    }
    for (std::size_t i = 0; i < cfg.nu_grid.size(); ++i) {
        if (!(cfg.nu_grid[i] > 0.0) || (i > 0 && !(cfg.nu_grid[i] > cfg.nu_grid[i - 1]))) {
            fail("'nu_grid' must be positive and strictly increasing");
        }
    }
    cfg.output_dir = text(doc, "output_dir", "out");

    if (!doc.contains("tasks") || !doc.at("tasks").is_array() || doc.at("tasks").empty()) {
        fail("'tasks' must be a non-empty list");
    }
    for (const auto& t : doc.at("tasks")) {
        if (!t.is_string()) fail("task names must be strings");
        const std::string name = t.get<std::string>();
        const auto& known = known_tasks();
        if (std::find(known.begin(), known.end(), name) == known.end()) fail("unknown task '" + name + "'");
        if (std::find(cfg.tasks.begin(), cfg.tasks.end(), name) == cfg.tasks.end()) cfg.tasks.push_back(name);
    }
    auto wants = [&](const char* name) { return std::find(cfg.tasks.begin(), cfg.tasks.end(), name) != cfg.tasks.end(); };
    if (wants("sweep") && cfg.nu_grid.size() < 2) fail("task 'sweep' needs a 'nu_grid' with at least two values");
    for (const char* t : {"equilibria", "spectrum", "simulate"}) {
        if (wants(t) && cfg.nu.empty()) fail(std::string("task '") + t + "' needs 'nu'");
    }

    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        if (!t.is_object()) fail("'tolerances' must be an object");
        cfg.tolerances.interp_tol = number(t, "interp_tol", cfg.tolerances.interp_tol);
        cfg.tolerances.tol_gap_rel = number(t, "tol_gap_rel", cfg.tolerances.tol_gap_rel);
        cfg.tolerances.tangency_tol = number(t, "tangency_tol", cfg.tolerances.tangency_tol);
        cfg.tolerances.quad_rel_tol = number(t, "quad_rel_tol", cfg.tolerances.quad_rel_tol);
        cfg.tolerances.energy_cutoff = number(t, "energy_cutoff", cfg.tolerances.energy_cutoff);
        cfg.tolerances.endpoint_tol = number(t, "endpoint_tol", cfg.tolerances.endpoint_tol);
    }
    if (doc.contains("ccurves")) cfg.ccurve_samples = integer(doc.at("ccurves"), "samples", cfg.ccurve_samples);
    if (doc.contains("spectrum")) cfg.spectrum_n = integer(doc.at("spectrum"), "n", cfg.spectrum_n);
    if (doc.contains("profiles")) cfg.profile_n = integer(doc.at("profiles"), "n", cfg.profile_n);
    if (cfg.ccurve_samples < 2 || cfg.spectrum_n < 3 || cfg.profile_n < 8) fail("grid sizes too small");

    if (doc.contains("simulate")) {
        const json& s = doc.at("simulate");
        if (!s.is_object()) fail("'simulate' must be an object");
        cfg.simulate.n = integer(s, "n", cfg.simulate.n);
        cfg.simulate.t_end = number(s, "t_end", cfg.simulate.t_end);
        cfg.simulate.dt0 = number(s, "dt0", cfg.simulate.dt0);
        cfg.simulate.form = text(s, "form", cfg.simulate.form);
        if (cfg.simulate.form != "quasilinear" && cfg.simulate.form != "semilinear") {
            fail("simulate.form must be 'quasilinear' or 'semilinear'");
        }
        if (s.contains("initial")) {
            if (!s.at("initial").is_array()) fail("simulate.initial must be a list");
            for (const auto& ic : s.at("initial")) {
                InitialCondition c;
                c.name = text(ic, "name", "", true);
                if (!ic.contains("modes") || !ic.at("modes").is_array()) fail("initial condition needs 'modes'");
                for (const auto& m : ic.at("modes")) {
                    if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number()) {
                        fail("each mode must be [k, amplitude]");
                    }
                    c.modes.emplace_back(m[0].get<int>(), m[1].get<double>());
                }
                c.noise = number(ic, "noise", 0.0);
                c.seed = static_cast<unsigned>(integer(ic, "seed", 1));
                cfg.simulate.initial.push_back(c);
            }
        }
    }
    if (cfg.simulate.initial.empty()) {
        cfg.simulate.initial.push_back({"sin1", {{1, 0.1}}, 0.0, 1});
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

Nonlinearity make_nonlinearity(const NonlinearitySpec& spec) {
    if (spec.family == "odd_cubic") return Nonlinearity::odd_cubic(spec.beta);
    if (spec.family == "split_cubic") return Nonlinearity::split_cubic(spec.beta_plus, spec.beta_minus);
    throw ConfigError("unknown nonlinearity family '" + spec.family + "'");
}

Diffusion make_diffusion(const DiffusionSpec& spec, double r_max) {
    if (spec.family == "constant") return Diffusion::constant(spec.value, r_max);
    if (spec.family == "bump") return Diffusion::bump(spec.alpha, spec.beta, spec.gamma, spec.r0, r_max);
    if (spec.family == "knots") return Diffusion::from_knots(spec.knots, r_max);
    throw ConfigError("unknown diffusion family '" + spec.family + "'");
}

} // namespace nlbif
