#pragma once

#include <functional>
#include <vector>

#include "nlbif/model_functions.hpp"

namespace nlbif {

enum class OperatorMode {
    local,                ///< u'' + p u
    nonlocal_at_epsilon,  ///< u'' + p u + eps q <q, u>
    nonlocal_paper,       ///< eps = eps0 = -2 nu^2 a'(r) / a(r)^3
};

const char* to_string(OperatorMode m);

/// Symmetric matrix T + eps w w^T on the n interior points of a uniform grid of [0, pi]:
/// T is the second difference with Dirichlet elimination plus diag(p), w = sqrt(h) q.
struct DiscretizedOperator {
    int n = 0;
    double h = 0.0;
    std::vector<double> diag;  ///< -2/h^2 + p_i
    double off = 0.0;          ///< 1/h^2
    std::vector<double> w;
    double epsilon = 0.0;
    double potential_norm = 0.0;  ///< max |p_i|
    OperatorMode mode = OperatorMode::local;
    double nu = 0.0;
    double r = 0.0;
    double a_value = 0.0;
    double da_value = 0.0;

    /// Number of eigenvalues strictly greater than sigma (Sturm count with a
    /// bordered Schur-complement correction for the rank-one term).
    int count_greater(double sigma) const;
    /// Same operator with a different rank-one weight.
    DiscretizedOperator with_epsilon(double eps) const;
    /// Row-major dense copy, for cross-checks.
    std::vector<double> dense() const;
    /// Zero-crossing weight: T + eps* w w^T is singular at eps* = -1 / (w^T T^{-1} w).
    double singular_epsilon() const;
};

/// psi holds n + 2 samples including both Dirichlet ends; r = ||psi_x||^2.
DiscretizedOperator assemble(const Nonlinearity& f, const Diffusion& a, const std::vector<double>& psi, double nu,
                             double r, OperatorMode mode, double epsilon = 0.0);

/// k-th largest eigenvalue (k = 1 is the top one), by bisection on the Sturm count.
double eigenvalue(const DiscretizedOperator& op, int k, double tol = 1e-13);
std::vector<double> top_eigenvalues(const DiscretizedOperator& op, int count, double tol = 1e-13);

struct PositiveCount {
    int count = 0;
    double min_abs = 0.0;    ///< distance of the nearest eigenvalue to zero
    double tolerance = 0.0;  ///< 1e-4 (1 + max |p|)
    bool indeterminate = false;
};

PositiveCount positive_count(const DiscretizedOperator& op);

/// Profile samples on `intervals` uniform intervals of [0, pi] (intervals + 1 values).
using ProfileSource = std::function<std::vector<double>(int intervals)>;

struct SpectralLevel {
    int n = 0;
    std::vector<double> top;
    int positive = 0;
    double min_abs = 0.0;
};

struct SpectralReport {
    std::vector<double> eigenvalues;  ///< decreasing
    int positive = 0;
    double min_abs = 0.0;
    bool indeterminate = false;
    std::vector<SpectralLevel> trace;  ///< n, 2n + 1, 4n + 3
    double observed_order = 0.0;       ///< from the top eigenvalue over the three levels
};

SpectralReport spectral_report(const Nonlinearity& f, const Diffusion& a, const ProfileSource& psi, double nu,
                               double r, OperatorMode mode, int n = 2001, int top = 6, double epsilon = 0.0);

struct EpsilonSweep {
    std::vector<double> eps;
    std::vector<std::vector<double>> branches;  ///< branches[i][m]: m-th largest eigenvalue at eps[i]
    double worst_decrease = 0.0;                ///< max over branches of mu(eps_i) - mu(eps_{i+1})
    bool monotone = true;                       ///< worst_decrease <= monotone_tol
    double min_separation = 0.0;                ///< smallest gap between tracked neighbours
    bool ambiguous = false;                     ///< min_separation below 10x the spectral tolerance
    double eps0 = 0.0;                          ///< -2 nu^2 a'/a^3
    double eps_tilde = 0.0;                     ///< -2 nu^3 c'/a^3
    double eps_crossing = 0.0;                  ///< discrete crossing weight of the k-th branch
    double mu_at_tilde = 0.0;                   ///< mu_k(eps_tilde)
    double crossing_gap = 0.0;                  ///< distance from mu_k(eps_tilde) to its neighbours
    bool crossing_simple = false;
};

struct EpsilonSweepOptions {
    int points = 41;
    int tracked = 0;  ///< 0: k + 2
    double monotone_tol = 1e-8;
    std::vector<double> eps_grid;  ///< overrides the automatic grid
};

/// Eigenvalue branches of L_eps around an equilibrium of nodal class k with curve slope dc = c'(r).
EpsilonSweep epsilon_sweep(const Nonlinearity& f, const Diffusion& a, const std::vector<double>& psi, double nu,
                           double r, int k, double dc, const EpsilonSweepOptions& opts = {});

} // namespace nlbif
