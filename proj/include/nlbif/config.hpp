#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nlbif/model_functions.hpp"

namespace nlbif {

struct NonlinearitySpec {
    std::string family = "odd_cubic";  ///< odd_cubic | split_cubic
    double beta = 1.0;
    double beta_plus = 1.0;
    double beta_minus = 0.25;
};

struct DiffusionSpec {
    std::string family;  ///< constant | bump | knots
    double value = 1.0;
    double alpha = 1.0, beta = 0.0, gamma = 1.0, r0 = 0.0;
    std::vector<DiffusionKnot> knots;
};

struct Tolerances {
    double interp_tol = 1e-7;
    double tol_gap_rel = 1e-6;
    double tangency_tol = 1e-9;
    double quad_rel_tol = 1e-11;
    double energy_cutoff = 1e-6;
    double endpoint_tol = 1e-7;

    /// Multiplies every tolerance except the energy cutoff.
    Tolerances scaled(double factor) const;
};

struct InitialCondition {
    std::string name;
    std::vector<std::pair<int, double>> modes;  ///< u0 = sum amp sin(k x)
    double noise = 0.0;                          ///< seeded perturbation amplitude
    unsigned seed = 1;
};

struct SimulateSpec {
    int n = 1024;
    double t_end = 40.0;
    double dt0 = 1e-3;
    std::string form = "quasilinear";
    std::vector<InitialCondition> initial;
};

struct RunConfig {
    NonlinearitySpec nonlinearity;
    DiffusionSpec diffusion;
    int j_max = 4;
    double r_max = 50.0;
    std::vector<double> nu;       ///< single values for equilibria / spectrum / simulate
    std::vector<double> nu_grid;  ///< sweep grid
    std::vector<std::string> tasks;
    std::string output_dir = "out";
    Tolerances tolerances;
    int ccurve_samples = 200;
    int spectrum_n = 2001;
    int profile_n = 4096;
    SimulateSpec simulate;
};

/// Parses and checks a configuration; throws ConfigError on any problem.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

Nonlinearity make_nonlinearity(const NonlinearitySpec& spec);
Diffusion make_diffusion(const DiffusionSpec& spec, double r_max);

/// Task names in execution order.
const std::vector<std::string>& known_tasks();

} // namespace nlbif
