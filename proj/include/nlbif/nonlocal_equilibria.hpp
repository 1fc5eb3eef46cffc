#pragma once

#include <string>
#include <vector>

#include "nlbif/c_curves.hpp"
#include "nlbif/chafee_infante.hpp"
#include "nlbif/model_functions.hpp"

namespace nlbif {

/// c-curves for j = 1..j_max and both signs, ordered (1,+), (1,-), (2,+), ...
std::vector<CCurve> build_curves(const Nonlinearity& f, int j_max, const CCurveOptions& opts = {});

struct Classification {
    bool hyperbolic = true;
    int morse_index = -1;  ///< -1 when not hyperbolic
    double criterion_gap = 0.0;
    double tol_gap = 0.0;
};

/// gap = a'(r) - nu c'(r) with the exact curve slope; |gap| <= 1e-6 (1 + |a'(r)|) is
/// reported as numerically non-hyperbolic.
Classification classify_point(const Diffusion& a, const CCurve& curve, double nu, double r, double tol_rel = 1e-6);
Classification classify_gap(int j, double gap, double da, double tol_rel = 1e-6);

struct BranchPoint {
    int j = 1;
    Sign sign = Sign::plus;
    double nu = 0.0;
    double r = 0.0;
    double E = 0.0;
    double lambda = 0.0;
    double c = 0.0;
    double dc = 0.0;
    bool hyperbolic = true;
    int morse_index = -1;
    double criterion_gap = 0.0;
    bool tangency = false;         ///< found as a double root of a - nu c
    double identity_residual = 0.0;  ///< |nu c(r) - a(r)|
};

struct ZeroEquilibrium {
    double nu = 0.0;
    bool hyperbolic = true;
    int morse_index = 0;  ///< #{k >= 1 : k^2 a(0) < nu}
};

struct EquilibriumSet {
    double nu = 0.0;
    ZeroEquilibrium zero;
    std::vector<BranchPoint> points;
    /// Classes whose curve was clamped while nu c > a at the clamp: roots lie beyond.
    std::vector<std::string> horizon_warnings;
    int count() const { return 1 + static_cast<int>(points.size()); }
};

struct FindOptions {
    double tol_gap_rel = 1e-6;
    double tangency_tol = 1e-9;  ///< |a - nu c| accepted at a critical point of a - nu c
};

/// All equilibria: the zero state plus every root of a(r) = nu c_j^sign(r) on the curves.
EquilibriumSet find_equilibria(const Diffusion& a, const std::vector<CCurve>& curves, double nu,
                               const FindOptions& opts = {});

enum class EventKind { pitchfork, saddle_node, degenerate };
enum class Direction { supercritical, subcritical, mixed, undetermined };

const char* to_string(EventKind k);
const char* to_string(Direction d);

struct BifurcationEvent {
    EventKind kind = EventKind::pitchfork;
    double nu = 0.0;
    double r = 0.0;
    int j = 1;
    Sign sign = Sign::plus;  ///< meaningless for pitchforks, which cover both signs
    Direction direction = Direction::undetermined;
};

struct BranchVertex {
    double nu = 0.0;
    double r = 0.0;
    int morse_index = 0;
};

struct BranchPolyline {
    int j = 1;
    Sign sign = Sign::plus;
    std::vector<BranchVertex> vertices;
    double r_end = 0.0;
    double nu_end = 0.0;  ///< nu_branch at the end of the tabulated range
    bool clamped = false;
};

struct CountSample {
    double nu = 0.0;
    int predicted = 0;  ///< from the monotone pieces of nu_branch
    int direct = 0;     ///< from find_equilibria
    bool near_event = false;  ///< within 1e-9 (1 + nu) of an event; excluded from the comparison
};

struct BifurcationDiagram {
    double nu_min = 0.0;
    double nu_max = 0.0;
    std::vector<BranchPolyline> branches;
    std::vector<BifurcationEvent> events;
    std::vector<CountSample> counts;
    std::vector<std::string> warnings;
    bool counts_consistent() const;
    int predicted_count(double nu) const;

    struct Piece {
        int j;
        Sign sign;
        double nu_lo;
        double nu_hi;
    };
    std::vector<Piece> pieces;  ///< monotone pieces of every nu_branch
};

struct SweepOptions {
    FindOptions find{};
    int jobs = 1;
};

/// nu_branch(r) = a(r)/c(r) per class; events at its critical points and at r = 0.
BifurcationDiagram sweep(const Diffusion& a, const std::vector<CCurve>& curves, const std::vector<double>& nu_grid,
                         const SweepOptions& opts = {});

struct NonlocalProfile {
    EquilibriumCI profile;
    double r_rel_error = 0.0;  ///< | ||psi_x||^2 - r | / r
    double residual = 0.0;     ///< max |a(r) psi_xx + nu f(psi)|, fourth-order stencil
    bool verified = false;     ///< r_rel_error <= 1e-6 and residual <= 1e-5
};

NonlocalProfile equilibrium_profile(const Nonlinearity& f, const Diffusion& a, const BranchPoint& point,
                                    int n = 4096);

} // namespace nlbif
