#include "nlbif/chafee_infante.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "nlbif/errors.hpp"
#include "nlbif/quadrature.hpp"
#include "nlbif/roots.hpp"

namespace nlbif {

namespace {
constexpr double kPi = std::numbers::pi;
}

NodalClass::NodalClass(Nonlinearity f, int j, Sign sign, TimeMapOptions opts)
    : f_(std::move(f)), j_(j), sign_(sign), opts_(opts), arches_(arch_counts(j, sign)) {
    energy_limit_ = usable_energy(f_, j_, sign_, opts_);
    limit_ = at_energy(energy_limit_, false);
}

double NodalClass::unit_time(double E) const {
    double total = 0.0;
    if (arches_.plus > 0) total += arches_.plus * tau(f_, E, 1.0, Sign::plus, opts_);
    if (arches_.minus > 0) total += arches_.minus * tau(f_, E, 1.0, Sign::minus, opts_);
    return total;
}

double NodalClass::lambda_of_energy(double E) const {
    const double t = unit_time(E) / kPi;
    return t * t;
}

double NodalClass::gradient_energy_of_energy(double E) const {
    if (E == 0.0) return 0.0;
    return at_energy(E, false).r;
}

NodalClass::Point NodalClass::at_energy(double E, bool with_slope) const {
    Point p;
    p.E = E;
    double T1 = 0.0, dT1 = 0.0, J = 0.0;
    const std::array<std::pair<Sign, int>, 2> sides{{{Sign::plus, arches_.plus}, {Sign::minus, arches_.minus}}};
    for (const auto& [side, count] : sides) {
        if (count == 0) continue;
        T1 += count * tau(f_, E, 1.0, side, opts_);
        J += count * arch_integral(f_, E, side, opts_);
        if (with_slope) dT1 += count * tau_derivative(f_, E, side, opts_);
    }
    p.unit_time = T1;
    p.unit_time_slope = dT1;
    p.arch_sum = 2.0 * J;
    p.lambda = (T1 / kPi) * (T1 / kPi);
    p.r = std::sqrt(2.0) * T1 * p.arch_sum / kPi;
    p.c = (kPi / T1) * (kPi / T1);
    if (with_slope) {
        const double dr_dE = (std::sqrt(2.0) * dT1 * p.arch_sum + T1 * T1) / kPi;
        const double dc_dE = -2.0 * kPi * kPi * dT1 / (T1 * T1 * T1);
        p.dc_dr = dc_dE / dr_dE;
    }
    return p;
}

NodalClass::Point NodalClass::origin() const {
    // tau'(E) is regular at E = 0; a tiny energy gives the limit to O(E).
    const double E_small = 1e-12 * energy_limit_;
    double dT1 = 0.0;
    if (arches_.plus > 0) dT1 += arches_.plus * tau_derivative(f_, E_small, Sign::plus, opts_);
    if (arches_.minus > 0) dT1 += arches_.minus * tau_derivative(f_, E_small, Sign::minus, opts_);
    Point p;
    p.E = 0.0;
    p.unit_time = j_ * kPi;
    p.unit_time_slope = dT1;
    p.arch_sum = 0.0;
    p.lambda = static_cast<double>(j_) * j_;
    p.r = 0.0;
    p.c = 1.0 / p.lambda;
    const double j5 = std::pow(static_cast<double>(j_), 5);
    p.dc_dr = -2.0 * dT1 / (j5 * kPi * kPi);
    return p;
}

double NodalClass::solve_energy(double lambda) const {
    const double jj = static_cast<double>(j_) * j_;
    if (!(lambda > jj)) {
        std::ostringstream os;
        os << "solve_energy: lambda = " << lambda << " <= j^2 = " << jj << "; class " << j_
           << " does not exist";
        throw DomainError(os.str());
    }
    const double target = kPi * std::sqrt(lambda);
    const double v_lo = j_ * kPi - target;
    const double v_hi = limit_.unit_time - target;
    if (v_hi < 0.0) {
        std::ostringstream os;
        os << "solve_energy: lambda = " << lambda << " exceeds the energy horizon (lambda_max = " << limit_.lambda
           << ")";
        throw HorizonError(os.str(), limit_.r);
    }
    return solve_bracketed([&](double E) { return E == 0.0 ? v_lo : unit_time(E) - target; }, 0.0,
                           energy_limit_, v_lo, v_hi, 0.0);
}

double NodalClass::gradient_energy(double lambda) const {
    const double E = solve_energy(lambda);
    if (E == 0.0) return 0.0;
    double J = 0.0;
    if (arches_.plus > 0) J += arches_.plus * arch_integral(f_, E, Sign::plus, opts_);
    if (arches_.minus > 0) J += arches_.minus * arch_integral(f_, E, Sign::minus, opts_);
    return std::sqrt(2.0 * lambda) * 2.0 * J;
}

double NodalClass::energy_for_gradient(double r, double lo, double hi) const {
    if (r < 0.0) throw DomainError("energy_for_gradient: negative gradient energy");
    if (r == 0.0) return 0.0;
    if (r > limit_.r) {
        std::ostringstream os;
        os << "gradient energy " << r << " beyond the reachable range [0, " << limit_.r << "] of class ("
           << j_ << ", " << to_symbol(sign_) << ")";
        throw HorizonError(os.str(), limit_.r);
    }
    if (hi < 0.0) hi = energy_limit_;
    const double v_lo = (lo == 0.0 ? 0.0 : gradient_energy_of_energy(lo)) - r;
    const double v_hi = (hi == energy_limit_ ? limit_.r : gradient_energy_of_energy(hi)) - r;
    if (v_lo > 0.0 || v_hi < 0.0) return energy_for_gradient(r, 0.0, -1.0);
    return solve_bracketed([&](double E) { return gradient_energy_of_energy(E) - r; }, lo, hi, v_lo, v_hi, 0.0);
}

double solve_energy(const Nonlinearity& f, double lambda, int j, Sign sign, const TimeMapOptions& opts) {
    return NodalClass(f, j, sign, opts).solve_energy(lambda);
}

EquilibriumCI reconstruct_profile(const Nonlinearity& f, double lambda, int j, Sign sign, double E, int n,
                                  const ProfileOptions& opts) {
    if (n < 4) throw DomainError("reconstruct_profile: grid needs at least 4 intervals");
    if (!(E > 0.0)) throw DomainError("reconstruct_profile: energy must be positive");
    using State = std::array<double, 2>;
    const double slope0 = sign_value(sign) * std::sqrt(2.0 * lambda * E);
    const double h = kPi / n;

    // Stiffness scale of the IVP over the amplitude range.
    double lipschitz = 1.0;
    const double u_lo = f.z_minus(), u_hi = f.z_plus();
    for (int i = 0; i <= 64; ++i) {
        lipschitz = std::max(lipschitz, std::abs(f.df(u_lo + (u_hi - u_lo) * i / 64.0)));
    }
    const double omega = std::sqrt(lambda * lipschitz);
    int substeps = std::max(1, static_cast<int>(std::ceil(h * omega / 0.05)));

    auto rhs = [&](const State& s, State& ds, double) {
        ds[0] = s[1];
        ds[1] = -lambda * f.f(s[0]);
    };

    EquilibriumCI eq;
    eq.j = j;
    eq.sign = sign;
    eq.lambda = lambda;
    eq.E = E;
    for (int attempt = 0; attempt < 2; ++attempt) {
        boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
        eq.x.assign(n + 1, 0.0);
        eq.phi.assign(n + 1, 0.0);
        eq.phi_x.assign(n + 1, 0.0);
        State state{0.0, slope0};
        eq.phi_x[0] = slope0;
        const double dt = h / substeps;
        for (int k = 0; k < n; ++k) {
            double t = k * h;
            for (int s = 0; s < substeps; ++s) {
                stepper.do_step(rhs, state, t, dt);
                t += dt;
            }
            eq.x[k + 1] = (k + 1) * h;
            eq.phi[k + 1] = state[0];
            eq.phi_x[k + 1] = state[1];
        }
        eq.x[n] = kPi;
        eq.endpoint_miss = std::abs(eq.phi[n]);
        eq.substeps = substeps;
        if (eq.endpoint_miss <= opts.endpoint_tol * std::abs(slope0)) break;
        if (attempt == 1) {
            std::ostringstream os;
            os << "reconstruct_profile: |phi(pi)| = " << eq.endpoint_miss << " exceeds "
               << opts.endpoint_tol * std::abs(slope0) << " after refinement";
            throw ConvergenceError(os.str());
        }
        substeps *= 4;
    }
    eq.phi[n] = 0.0;

    std::vector<double> sq(eq.phi_x.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = eq.phi_x[i] * eq.phi_x[i];
    eq.r = simpson_uniform(sq, h);

    const ArchCounts arches = arch_counts(j, sign);
    double J = 0.0;
    if (arches.plus > 0) J += arches.plus * arch_integral(f, E, Sign::plus, opts.time_maps);
    if (arches.minus > 0) J += arches.minus * arch_integral(f, E, Sign::minus, opts.time_maps);
    eq.r_arch = std::sqrt(2.0 * lambda) * 2.0 * J;
    return eq;
}

EquilibriumCI local_equilibrium(const Nonlinearity& f, double lambda, int j, Sign sign, int n,
                                const ProfileOptions& opts) {
    const double E = solve_energy(f, lambda, j, sign, opts.time_maps);
    return reconstruct_profile(f, lambda, j, sign, E, n, opts);
}

double gradient_energy(const Nonlinearity& f, double lambda, int j, Sign sign, const GradientEnergyOptions& opts) {
    const NodalClass cls(f, j, sign, opts.time_maps);
    const double r = cls.gradient_energy(lambda);
    if (opts.cross_check) {
        const double E = cls.solve_energy(lambda);
        ProfileOptions popts;
        popts.time_maps = opts.time_maps;
        const EquilibriumCI eq = reconstruct_profile(f, lambda, j, sign, E, opts.cross_check_grid, popts);
        if (std::abs(eq.r - r) > opts.cross_check_tol * std::max(r, 1e-300)) {
            std::ostringstream os;
            os << "gradient_energy: arch formula " << r << " disagrees with profile quadrature " << eq.r;
            throw ConvergenceError(os.str());
        }
    }
    return r;
}

double energy_identity_deviation(const EquilibriumCI& eq, const Nonlinearity& f) {
    double worst = 0.0;
    for (std::size_t i = 0; i < eq.phi.size(); ++i) {
        const double v = 0.5 * eq.phi_x[i] * eq.phi_x[i] + eq.lambda * f.F(eq.phi[i]) - eq.lambda * eq.E;
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

int interior_sign_changes(const std::vector<double>& values) {
    if (values.size() < 3) return 0;
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double noise = 1e-9 * scale;
    int changes = 0;
    int last = 0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double v = values[i];
        if (std::abs(v) <= noise) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace nlbif
