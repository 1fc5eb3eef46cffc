#pragma once

#include <string>
#include <vector>

#include "nlbif/chafee_infante.hpp"

namespace nlbif {

struct CCurveSample {
    double r = 0.0;
    double E = 0.0;
    double lambda = 0.0;
    double c = 0.0;
    double dc = 0.0;  ///< exact dc/dr at the sample
};

struct CCurveOptions {
    double r_max = 50.0;
    int samples = 200;              ///< log-spaced samples on (0, r_max]
    double r_min_fraction = 1e-4;   ///< first log sample at r_max * r_min_fraction
    double interp_tol = 1e-7;       ///< held-out midpoint error, relative to c
    int max_refine_rounds = 10;
    bool strict_horizon = false;    ///< throw HorizonError instead of clamping r_max
    int jobs = 1;
    TimeMapOptions time_maps{};
};

/// r -> c_j^sign(r) = 1/lambda on [0, r_end], with a C^1 Hermite interpolant built
/// from exact values and slopes. Exact evaluation goes through the energy parametrisation.
class CCurve {
public:
    CCurve(const Nonlinearity& f, int j, Sign sign, const CCurveOptions& opts = {});

    int j() const { return cls_.j(); }
    Sign sign() const { return cls_.sign(); }
    const NodalClass& nodal_class() const { return cls_; }
    const std::vector<CCurveSample>& samples() const { return samples_; }

    /// End of the tabulated range: min(requested r_max, reachable r).
    double r_end() const { return samples_.back().r; }
    double requested_r_max() const { return requested_r_max_; }
    /// True when the requested r_max lies beyond the energy horizon.
    bool clamped() const { return clamped_; }
    double max_holdout_error() const { return max_holdout_error_; }
    bool holdout_validated() const { return holdout_validated_; }

    double value(double r) const;
    double derivative(double r) const;

    /// Root-found c(r), independent of the interpolant.
    double exact_value(double r) const;
    double exact_derivative(double r) const;
    /// Energy of the class-(j, sign) profile with gradient energy r.
    double energy_at(double r) const;
    NodalClass::Point exact_point(double r) const;

    /// Index k with samples[k].r <= r <= samples[k+1].r.
    std::size_t segment(double r) const;

private:
    double hermite(std::size_t k, double r, bool slope) const;
    void check_range(double r, const char* what) const;

    NodalClass cls_;
    std::vector<CCurveSample> samples_;
    double requested_r_max_ = 0.0;
    bool clamped_ = false;
    double max_holdout_error_ = 0.0;
    bool holdout_validated_ = true;
};

CCurve build_ccurve(const Nonlinearity& f, int j, Sign sign, const CCurveOptions& opts = {});

/// Interpolant derivative c'(r); one-sided at r = 0.
double ccurve_derivative(const CCurve& curve, double r);

struct ScalingCheck {
    std::string identity;  ///< "ii", "iii" or "iv"
    int j = 0;
    Sign sign = Sign::plus;
    double max_rel_dev = 0.0;
    double where = 0.0;
    int points = 0;
};

struct ScalingReport {
    std::vector<ScalingCheck> checks;
    double worst() const;
};

/// Scaling relations between c-curves, evaluated exactly on an r grid:
///   (ii)  c_{2j}(r) = c_2(r/j^2)/j^2           all f, j >= 2
///   (iii) c_j^+(r) = c_j^-(r)                   odd f
///   (iv)  c_j(r) = c_1(r/j^2)/j^2               odd f, j >= 2
/// An empty grid means `points` equispaced values up to the common reachable range.
ScalingReport check_scaling_identities(const Nonlinearity& f, int j, std::vector<double> r_grid = {},
                                       int points = 100, double r_max = 50.0, const TimeMapOptions& opts = {});

} // namespace nlbif
