#pragma once

#include <vector>

#include "nlbif/model_functions.hpp"
#include "nlbif/time_maps.hpp"

namespace nlbif {

/// Sampled stationary profile of the local problem phi'' + lambda f(phi) = 0 on [0, pi].
struct EquilibriumCI {
    int j = 1;
    Sign sign = Sign::plus;
    double lambda = 0.0;
    double E = 0.0;
    double r = 0.0;       ///< ||phi_x||^2 by composite Simpson quadrature of the profile
    double r_arch = 0.0;  ///< ||phi_x||^2 from the arch decomposition
    std::vector<double> x;
    std::vector<double> phi;
    std::vector<double> phi_x;
    double endpoint_miss = 0.0;  ///< |phi(pi)|
    int substeps = 0;            ///< integrator substeps per grid interval
};

/// Scalar reduction of one nodal class (j, sign) of the local problem.
///
/// Everything is parametrised by the energy E in (0, energy_limit()):
///   T1(E)   composite time map at lambda = 1, increasing from j*pi,
///   lambda  = (T1/pi)^2, the parameter at which the class-(j, sign) profile has energy E,
///   r       = ||phi_x||^2 = sqrt(2 lambda) * 2 * (n+ J+ + n- J-), summed over arches,
///   c       = 1/lambda.
/// Derivatives with respect to E are analytic: dI/dE = T1/sqrt(2) and dT1/dE comes
/// from tau_derivative.
class NodalClass {
public:
    NodalClass(Nonlinearity f, int j, Sign sign, TimeMapOptions opts = {});

    struct Point {
        double E = 0.0;
        double unit_time = 0.0;        ///< T1(E)
        double unit_time_slope = 0.0;  ///< dT1/dE
        double arch_sum = 0.0;         ///< I(E) = 2 (n+ J+ + n- J-)
        double lambda = 0.0;
        double r = 0.0;
        double c = 0.0;
        double dc_dr = 0.0;
    };

    int j() const { return j_; }
    Sign sign() const { return sign_; }
    const Nonlinearity& nonlinearity() const { return f_; }
    const TimeMapOptions& options() const { return opts_; }
    ArchCounts arches() const { return arches_; }

    double energy_limit() const { return energy_limit_; }
    double lambda_limit() const { return limit_.lambda; }
    double r_limit() const { return limit_.r; }

    double unit_time(double E) const;
    double lambda_of_energy(double E) const;
    double gradient_energy_of_energy(double E) const;
    Point at_energy(double E, bool with_slope = true) const;
    /// E = 0 limit: lambda = j^2, r = 0, c = 1/j^2 and the one-sided slope of c.
    Point origin() const;

    /// E_j^sign(lambda): unique root of T_lambda(E) = pi. Requires lambda > j^2.
    double solve_energy(double lambda) const;
    /// r(lambda) for lambda > j^2.
    double gradient_energy(double lambda) const;
    /// Inverse of r(E); HorizonError when r exceeds r_limit().
    double energy_for_gradient(double r, double lo = 0.0, double hi = -1.0) const;

private:
    Nonlinearity f_;
    int j_;
    Sign sign_;
    TimeMapOptions opts_;
    ArchCounts arches_;
    double energy_limit_;
    Point limit_;
};

/// E_j^sign(lambda) with T_lambda(E) = pi.
double solve_energy(const Nonlinearity& f, double lambda, int j, Sign sign, const TimeMapOptions& opts = {});

struct ProfileOptions {
    TimeMapOptions time_maps{};
    double endpoint_tol = 1e-7;  ///< relative to the initial slope sqrt(2 lambda E)
};

/// Integrates u'' = -lambda f(u), u(0) = 0, u'(0) = sign sqrt(2 lambda E) on n uniform intervals.
EquilibriumCI reconstruct_profile(const Nonlinearity& f, double lambda, int j, Sign sign, double E, int n = 4096,
                                  const ProfileOptions& opts = {});

/// solve_energy followed by reconstruct_profile.
EquilibriumCI local_equilibrium(const Nonlinearity& f, double lambda, int j, Sign sign, int n = 4096,
                                const ProfileOptions& opts = {});

struct GradientEnergyOptions {
    TimeMapOptions time_maps{};
    bool cross_check = false;  ///< compare against profile quadrature
    int cross_check_grid = 4096;
    double cross_check_tol = 1e-6;
};

/// ||phi_x||^2 of the class-(j, sign) equilibrium at lambda, by the arch decomposition.
double gradient_energy(const Nonlinearity& f, double lambda, int j, Sign sign,
                       const GradientEnergyOptions& opts = {});

/// max |phi_x^2/2 + lambda F(phi) - lambda E| over the grid.
double energy_identity_deviation(const EquilibriumCI& eq, const Nonlinearity& f);

/// Interior sign changes of the sampled profile, ignoring values below noise level.
int interior_sign_changes(const std::vector<double>& values);

} // namespace nlbif
