#include "nlbif/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlbif/errors.hpp"

namespace nlbif {

const char* to_string(Form f) { return f == Form::quasilinear ? "quasilinear" : "semilinear"; }

namespace {

double grid_step(std::size_t points) { return std::numbers::pi / static_cast<double>(points - 1); }

void check_grid(const std::vector<double>& u) {
    if (u.size() < 3) throw DomainError("simulation grid needs at least one interior point");
}

// Solves (1 + 2 s) x_i - s (x_{i-1} + x_{i+1}) = rhs_i with zero ends (Thomas algorithm).
void solve_implicit(std::vector<double>& x, const std::vector<double>& rhs, double s) {
    const std::size_t n = rhs.size() - 2;
    std::vector<double> c(n), d(n);
    const double diag = 1.0 + 2.0 * s;
    double denom = diag;
    c[0] = -s / denom;
    d[0] = rhs[1] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag + s * c[i - 1];
        if (denom == 0.0) throw ConvergenceError("step: tridiagonal solver breakdown");
        c[i] = -s / denom;
        d[i] = (rhs[i + 1] + s * d[i - 1]) / denom;
    }
    x.assign(n + 2, 0.0);
    x[n] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i + 1] = d[i] - c[i] * x[i + 2];
}

} // namespace

double SimState::h() const { return grid_step(u.size()); }

double discrete_gradient_energy(const std::vector<double>& u) {
    check_grid(u);
    const double h = grid_step(u.size());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double d = u[i + 1] - u[i];
        sum += d * d;
    }
    return sum / h;
}

std::vector<double> sample_on_grid(const std::function<double(double)>& g, int n) {
    if (n < 1) throw DomainError("sample_on_grid: need at least one interior point");
    std::vector<double> u(n + 2, 0.0);
    const double h = std::numbers::pi / (n + 1);
    for (int i = 1; i <= n; ++i) u[i] = g(i * h);
    return u;
}

double lyapunov(const std::vector<double>& u, const Model& model) {
    check_grid(u);
    const double h = grid_step(u.size());
    double reaction = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) reaction += model.f.F(u[i]);
    return 0.5 * model.a.A(discrete_gradient_energy(u)) - model.nu * h * reaction;
}

double lyapunov(const SimState& state, const Model& model) { return lyapunov(state.u, model); }

SimState make_state(const Model& model, std::vector<double> u, double dt) {
    check_grid(u);
    u.front() = 0.0;
    u.back() = 0.0;
    SimState s;
    s.u = std::move(u);
    s.dt = dt;
    s.grad_sq = discrete_gradient_energy(s.u);
    s.V = lyapunov(s.u, model);
    return s;
}

SimState step(const SimState& state, const Model& model, Form form, double dt) {
    const double h = state.h();
    const double a = model.a.a(state.grad_sq);
    const double kappa = form == Form::quasilinear ? a : 1.0;
    const double reaction_scale = form == Form::quasilinear ? model.nu : model.nu / a;
    std::vector<double> rhs(state.u.size(), 0.0);
    for (std::size_t i = 1; i + 1 < rhs.size(); ++i) {
        rhs[i] = state.u[i] + dt * reaction_scale * model.f.f(state.u[i]);
    }
    SimState next;
    solve_implicit(next.u, rhs, dt * kappa / (h * h));
    next.t = state.t + dt;
    next.dt = state.dt;
    next.grad_sq = discrete_gradient_energy(next.u);
    next.V = lyapunov(next.u, model);
    return next;
}

double residual(const std::vector<double>& u, const Model& model, Form form) {
    check_grid(u);
    const double h = grid_step(u.size());
    const double a = model.a.a(discrete_gradient_energy(u));
    const double kappa = form == Form::quasilinear ? a : 1.0;
    const double scale = form == Form::quasilinear ? model.nu : model.nu / a;
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double d2 = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
        const double r = kappa * d2 + scale * model.f.f(u[i]);
        sum += r * r;
    }
    return std::sqrt(h * sum);
}

double h1_distance(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw DomainError("h1_distance: grid mismatch");
    const double h = grid_step(u.size());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double d = (u[i + 1] - v[i + 1]) - (u[i] - v[i]);
        sum += d * d;
    }
    return std::sqrt(sum / h);
}

double max_distance(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw DomainError("max_distance: grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

TrajectoryLog evolve(const std::vector<double>& u0, const Model& model, Form form, double t_end,
                     const std::vector<KnownEquilibrium>& equilibria, const EvolveOptions& opts) {
    if (!(t_end > 0.0)) throw DomainError("evolve: t_end must be positive");
    if (!(opts.dt0 >= opts.dt_min)) throw DomainError("evolve: dt0 is below dt_min");
    for (const auto& eq : equilibria) {
        if (eq.u.size() != u0.size()) throw DomainError("evolve: equilibrium '" + eq.id + "' on a different grid");
    }
    TrajectoryLog log;
    SimState state = make_state(model, u0, opts.dt0);
    log.max_V_increase = -std::numeric_limits<double>::infinity();

    auto record = [&]() {
        LogEntry e;
        e.t = state.t;
        e.V = state.V;
        e.dt = state.dt;
        e.residual = residual(state.u, model, form);
        e.dist_h1 = std::numeric_limits<double>::infinity();
        e.dist_max = std::numeric_limits<double>::infinity();
        for (const auto& eq : equilibria) {
            const double d = h1_distance(state.u, eq.u);
            if (d < e.dist_h1) {
                e.dist_h1 = d;
                e.dist_max = max_distance(state.u, eq.u);
                e.nearest = eq.id;
            }
        }
        log.entries.push_back(e);
        if (!equilibria.empty() && e.dist_h1 < opts.converge_h1 && e.residual < opts.converge_residual) {
            log.converged = true;
            log.terminal = e.nearest;
        } else {
            log.converged = false;
            log.terminal = "unresolved";
        }
    };

    record();
    const double t_eps = 1e-12 * std::max(1.0, t_end);
    while (state.t < t_end - t_eps) {
        const double dt = std::min(state.dt, t_end - state.t);
        SimState next = step(state, model, form, dt);
        const double tol = opts.tol_V_rel * (1.0 + std::abs(state.V));
        if (!(next.V <= state.V + tol)) {
            ++log.rejected_steps;
            state.dt *= 0.5;
            if (state.dt < opts.dt_min) {
                std::ostringstream os;
                os << "evolve: time step fell below " << opts.dt_min << " at t = " << state.t;
                throw ConvergenceError(os.str());
            }
            continue;
        }
        log.max_V_increase = std::max(log.max_V_increase, next.V - state.V);
        next.dt = state.dt;
        state = std::move(next);
        ++log.accepted_steps;
        const bool last = state.t >= t_end - t_eps;
        if (log.accepted_steps % opts.log_every == 0 || last) {
            record();
            if (log.converged && opts.stop_on_convergence) break;
        }
    }
    if (log.accepted_steps == 0) log.max_V_increase = 0.0;
    for (std::size_t i = 0; i + 1 < log.entries.size(); ++i) {
        const auto& e = log.entries[i];
        if (log.entries[i + 1].V > e.V + opts.tol_V_rel * (1.0 + std::abs(e.V))) log.lyapunov_monotone = false;
    }
    log.final_state = state;
    return log;
}

} // namespace nlbif
