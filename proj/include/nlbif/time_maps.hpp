#pragma once

#include "nlbif/model_functions.hpp"
#include "nlbif/quadrature.hpp"

namespace nlbif {

struct TimeMapOptions {
    AdaptiveOptions quad{1e-11, 0.0, 48};
    /// Energies are restricted to (1 - energy_cutoff) times the class ceiling.
    double energy_cutoff = 1e-6;
};

/// Number of positive and negative arches of a class-(j, sign) profile.
struct ArchCounts {
    int plus = 0;
    int minus = 0;
};

ArchCounts arch_counts(int j, Sign sign);

/// Largest energy a class-(j, sign) profile can reach: the heteroclinic level of
/// every side it visits (min{F(z+), F(z-)} once both signs occur).
double energy_ceiling(const Nonlinearity& f, int j, Sign sign);

/// (1 - cutoff) * energy_ceiling.
double usable_energy(const Nonlinearity& f, int j, Sign sign, const TimeMapOptions& opts = {});

/// U^sign(E): the root of F(U) = E in [0, z+] or [z-, 0]. Requires 0 < E <= F(z_sign).
double amplitude(const Nonlinearity& f, double E, Sign sign);

/// tau_lambda^sign(E) = (2/lambda)^{1/2} int_0^{U} (E - F(u))^{-1/2} du: the x-length
/// of one arch of sign `sign` at energy E. Always integrated at lambda = 1 and rescaled.
double tau(const Nonlinearity& f, double E, double lambda, Sign sign, const TimeMapOptions& opts = {});

/// d tau_1 / dE, from a regularised integrand (no finite differences).
double tau_derivative(const Nonlinearity& f, double E, Sign sign, const TimeMapOptions& opts = {});

/// int_0^{|U|} sqrt(E - F(v)) d|v| over one monotone half of an arch.
double arch_integral(const Nonlinearity& f, double E, Sign sign, const TimeMapOptions& opts = {});

/// Arch-count-weighted sum of the two time maps for nodal class j.
double composite_time(const Nonlinearity& f, double E, double lambda, int j, Sign sign,
                      const TimeMapOptions& opts = {});

struct TimeMapSample {
    double E = 0.0;
    double U_plus = 0.0;
    double U_minus = 0.0;
    double tau_plus = 0.0;   ///< at lambda = 1
    double tau_minus = 0.0;  ///< at lambda = 1
};

/// Both amplitudes and unit-lambda time maps; E must lie below min{F(z+), F(z-)}.
TimeMapSample sample_time_maps(const Nonlinearity& f, double E, const TimeMapOptions& opts = {});

} // namespace nlbif
