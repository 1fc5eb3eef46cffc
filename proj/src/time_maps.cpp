#include "nlbif/time_maps.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nlbif/errors.hpp"
#include "nlbif/roots.hpp"

namespace nlbif {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// One side of f reflected onto the positive axis: fr(x) = s f(s x), Fr(x) = F(s x).
struct Side {
    const Nonlinearity& nl;
    double s;

    double f(double x) const { return s * nl.f(s * x); }
    double F(double x) const { return nl.F(s * x); }
    double g(double x) const { return s * nl.curvature(s * x); }
    double zero() const { return std::abs(s > 0 ? nl.z_plus() : nl.z_minus()); }

    // Mean of fr and gr over [U - width, U]; exact for polynomial f of degree <= 19.
    template <class Fn>
    double mean(Fn&& fn, double U, double width) const {
        const GaussRule& rule = gauss_legendre_10();
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = 0.5 * (1.0 + rule.nodes[i]);
            sum += rule.weights[i] * fn(U - width * t);
        }
        return 0.5 * sum;
    }
};

void check_energy(double E, double ceiling, const char* what) {
    if (!(E > 0.0) || !(E < ceiling)) {
        std::ostringstream os;
        os << what << ": energy " << E << " outside (0, " << ceiling << ")";
        throw DomainError(os.str());
    }
}

double positive_amplitude(const Side& side, double E) {
    const double z = side.zero();
    const double Fz = side.F(z);
    if (E == Fz) return z;
    return solve_bracketed([&](double x) { return side.F(x) - E; }, 0.0, z, -E, Fz - E, 0.0);
}

// Width U - u of the integration interval at angle theta, with u = U sin(theta).
double gap_width(double U, double theta) {
    const double phi = 0.25 * std::numbers::pi - 0.5 * theta;
    const double s = std::sin(phi);
    return 2.0 * U * s * s;
}

template <class Integrand>
double integrate_angle(Integrand&& g, const TimeMapOptions& opts, const char* what) {
    const auto res = integrate_adaptive(g, 0.0, kHalfPi, opts.quad);
    if (!res.converged || !std::isfinite(res.value)) {
        std::ostringstream os;
        os << what << ": quadrature failed to converge (energy too close to the heteroclinic level?)";
        throw ConvergenceError(os.str());
    }
    return res.value;
}

double unit_tau(const Side& side, double U, const TimeMapOptions& opts) {
    auto integrand = [&](double theta) {
        const double phi = 0.25 * std::numbers::pi - 0.5 * theta;
        const double m = side.mean([&](double x) { return side.f(x); }, U, gap_width(U, theta));
        return std::cos(phi) / std::sqrt(m);
    };
    return 2.0 * std::sqrt(U) * integrate_angle(integrand, opts, "tau");
}

} // namespace

ArchCounts arch_counts(int j, Sign sign) {
    if (j < 1) throw DomainError("nodal class j must be positive");
    const int leading = (j + 1) / 2;
    const int trailing = j / 2;
    return sign == Sign::plus ? ArchCounts{leading, trailing} : ArchCounts{trailing, leading};
}

double energy_ceiling(const Nonlinearity& f, int j, Sign sign) {
    const ArchCounts counts = arch_counts(j, sign);
    double ceiling = std::numeric_limits<double>::infinity();
    if (counts.plus > 0) ceiling = std::min(ceiling, f.heteroclinic_level(Sign::plus));
    if (counts.minus > 0) ceiling = std::min(ceiling, f.heteroclinic_level(Sign::minus));
    return ceiling;
}

double usable_energy(const Nonlinearity& f, int j, Sign sign, const TimeMapOptions& opts) {
    return (1.0 - opts.energy_cutoff) * energy_ceiling(f, j, sign);
}

double amplitude(const Nonlinearity& f, double E, Sign sign) {
    const Side side{f, sign_value(sign)};
    const double ceiling = f.heteroclinic_level(sign);
    if (!(E > 0.0) || !(E <= ceiling)) {
        std::ostringstream os;
        os << "amplitude: energy " << E << " outside (0, " << ceiling << "]";
        throw DomainError(os.str());
    }
    return side.s * positive_amplitude(side, E);
}

double tau(const Nonlinearity& f, double E, double lambda, Sign sign, const TimeMapOptions& opts) {
    if (!(lambda > 0.0)) throw DomainError("tau: lambda must be positive");
    const Side side{f, sign_value(sign)};
    check_energy(E, f.heteroclinic_level(sign), "tau");
    const double U = positive_amplitude(side, E);
    return unit_tau(side, U, opts) / std::sqrt(lambda);
}

double tau_derivative(const Nonlinearity& f, double E, Sign sign, const TimeMapOptions& opts) {
    const Side side{f, sign_value(sign)};
    check_energy(E, f.heteroclinic_level(sign), "tau_derivative");
    const double U = positive_amplitude(side, E);
    // d tau_1/dU = U^{-1/2} int cos(phi) m^{-3/2} G dtheta with G the mean of f - x f'.
    auto integrand = [&](double theta) {
        const double phi = 0.25 * std::numbers::pi - 0.5 * theta;
        const double width = gap_width(U, theta);
        const double m = side.mean([&](double x) { return side.f(x); }, U, width);
        const double G = side.mean([&](double x) { return side.g(x); }, U, width);
        return std::cos(phi) * G / (m * std::sqrt(m));
    };
    const double dtau_dU = integrate_angle(integrand, opts, "tau_derivative") / std::sqrt(U);
    return dtau_dU / side.f(U);
}

double arch_integral(const Nonlinearity& f, double E, Sign sign, const TimeMapOptions& opts) {
    const Side side{f, sign_value(sign)};
    const double ceiling = f.heteroclinic_level(sign);
    if (!(E > 0.0) || !(E <= ceiling)) throw DomainError("arch_integral: energy outside (0, F(z)]");
    const double U = positive_amplitude(side, E);
    auto integrand = [&](double theta) {
        const double phi = 0.25 * std::numbers::pi - 0.5 * theta;
        const double s = std::sin(phi);
        const double m = side.mean([&](double x) { return side.f(x); }, U, gap_width(U, theta));
        return s * s * std::cos(phi) * std::sqrt(m);
    };
    return 2.0 * U * std::sqrt(2.0 * U) * integrate_angle(integrand, opts, "arch_integral");
}

double composite_time(const Nonlinearity& f, double E, double lambda, int j, Sign sign,
                      const TimeMapOptions& opts) {
    if (!(lambda > 0.0)) throw DomainError("composite_time: lambda must be positive");
    const ArchCounts counts = arch_counts(j, sign);
    check_energy(E, energy_ceiling(f, j, sign), "composite_time");
    double total = 0.0;
    if (counts.plus > 0) total += counts.plus * tau(f, E, 1.0, Sign::plus, opts);
    if (counts.minus > 0) total += counts.minus * tau(f, E, 1.0, Sign::minus, opts);
    return total / std::sqrt(lambda);
}

TimeMapSample sample_time_maps(const Nonlinearity& f, double E, const TimeMapOptions& opts) {
    TimeMapSample s;
    s.E = E;
    s.U_plus = amplitude(f, E, Sign::plus);
    s.U_minus = amplitude(f, E, Sign::minus);
    s.tau_plus = tau(f, E, 1.0, Sign::plus, opts);
    s.tau_minus = tau(f, E, 1.0, Sign::minus, opts);
    return s;
}

} // namespace nlbif
