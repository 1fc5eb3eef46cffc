#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlbif/model_functions.hpp"

namespace nlbif {

enum class Form {
    quasilinear,  ///< u_t = a(||u_x||^2) u_xx + nu f(u)
    semilinear,   ///< w_tau = w_xx + nu f(w) / a(||w_x||^2)
};

const char* to_string(Form f);

struct Model {
    Nonlinearity f;
    Diffusion a;
    double nu = 1.0;
};

/// Grid values on n interior points plus the two Dirichlet ends (u.front() = u.back() = 0).
struct SimState {
    std::vector<double> u;
    double t = 0.0;
    double dt = 1e-3;
    double grad_sq = 0.0;  ///< ||u_x||^2 by forward differences
    double V = 0.0;

    int interior() const { return static_cast<int>(u.size()) - 2; }
    double h() const;
};

/// sum_i ((u_{i+1} - u_i)/h)^2 h over all n + 1 cells. With this norm the scheme is an
/// exact discrete gradient flow of V.
double discrete_gradient_energy(const std::vector<double>& u);

/// g sampled at the n interior points of [0, pi] with zero ends.
std::vector<double> sample_on_grid(const std::function<double(double)>& g, int n);

SimState make_state(const Model& model, std::vector<double> u, double dt = 1e-3);

/// V(u) = A(||u_x||^2)/2 - nu h sum F(u_i).
double lyapunov(const SimState& state, const Model& model);
double lyapunov(const std::vector<double>& u, const Model& model);

/// One IMEX step: diffusion implicit with the coefficient frozen at the start of the step,
/// reaction explicit; a single tridiagonal solve.
SimState step(const SimState& state, const Model& model, Form form, double dt);

/// h-weighted l2 norm of the right-hand side of the chosen form.
double residual(const std::vector<double>& u, const Model& model, Form form);

/// Discrete H^1 seminorm of u - v and max |u - v|.
double h1_distance(const std::vector<double>& u, const std::vector<double>& v);
double max_distance(const std::vector<double>& u, const std::vector<double>& v);

struct KnownEquilibrium {
    std::string id;
    std::vector<double> u;  ///< same grid as the simulation
    int morse_index = -1;
};

struct LogEntry {
    double t = 0.0;
    double V = 0.0;
    double dt = 0.0;
    double residual = 0.0;
    double dist_max = 0.0;  ///< to the nearest known equilibrium
    double dist_h1 = 0.0;
    std::string nearest;
};

struct EvolveOptions {
    double dt0 = 1e-3;
    double tol_V_rel = 1e-8;  ///< accepted when V_new <= V_old + tol (1 + |V_old|)
    double dt_min = 1e-12;
    int log_every = 100;
    double converge_h1 = 1e-4;
    double converge_residual = 1e-6;
    bool stop_on_convergence = true;
};

struct TrajectoryLog {
    std::vector<LogEntry> entries;
    std::string terminal = "unresolved";
    bool converged = false;
    int accepted_steps = 0;
    int rejected_steps = 0;
    double max_V_increase = 0.0;  ///< largest accepted V_new - V_old (negative means strict decrease)
    bool lyapunov_monotone = true;
    SimState final_state;
};

TrajectoryLog evolve(const std::vector<double>& u0, const Model& model, Form form, double t_end,
                     const std::vector<KnownEquilibrium>& equilibria, const EvolveOptions& opts = {});

} // namespace nlbif
