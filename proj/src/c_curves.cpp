#include "nlbif/c_curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlbif/errors.hpp"
#include "nlbif/parallel.hpp"
#include "nlbif/roots.hpp"

namespace nlbif {

namespace {

CCurveSample sample_from_point(const NodalClass::Point& p, double r) {
    return CCurveSample{r, p.E, p.lambda, p.c, p.dc_dr};
}

} // namespace

CCurve::CCurve(const Nonlinearity& f, int j, Sign sign, const CCurveOptions& opts)
    : cls_(f, j, sign, opts.time_maps), requested_r_max_(opts.r_max) {
    if (!(opts.r_max > 0.0)) throw DomainError("build_ccurve: r_max must be positive");
    if (opts.samples < 2) throw DomainError("build_ccurve: need at least two samples");

    double r_end = opts.r_max;
    if (cls_.r_limit() < opts.r_max) {
        if (opts.strict_horizon) {
            std::ostringstream os;
            os << "build_ccurve: r_max = " << opts.r_max << " unreachable for class (" << j << ", "
               << to_symbol(sign) << "); achievable range [0, " << cls_.r_limit() << "]";
            throw HorizonError(os.str(), cls_.r_limit());
        }
        clamped_ = true;
        r_end = cls_.r_limit();
    }

    const int n = opts.samples;
    std::vector<double> grid(n);
    const double log_lo = std::log(r_end * opts.r_min_fraction);
    const double log_hi = std::log(r_end);
    for (int k = 0; k < n; ++k) grid[k] = std::exp(log_lo + (log_hi - log_lo) * k / (n - 1));
    grid.back() = r_end;

    auto exact_sample = [&](double r) {
        const double E = cls_.energy_for_gradient(r);
        return sample_from_point(cls_.at_energy(E, true), r);
    };

    samples_.resize(n + 1);
    samples_[0] = sample_from_point(cls_.origin(), 0.0);
    parallel_for(grid.size(), opts.jobs, [&](std::size_t k) { samples_[k + 1] = exact_sample(grid[k]); });

    // Held-out midpoint validation; failing intervals are split.
    std::vector<std::size_t> pending(samples_.size() - 1);
    for (std::size_t k = 0; k < pending.size(); ++k) pending[k] = k;
    for (int round = 0; !pending.empty(); ++round) {
        if (round >= opts.max_refine_rounds) {
            holdout_validated_ = false;
            break;
        }
        std::vector<CCurveSample> mids(pending.size());
        parallel_for(pending.size(), opts.jobs, [&](std::size_t i) {
            const std::size_t k = pending[i];
            mids[i] = exact_sample(0.5 * (samples_[k].r + samples_[k + 1].r));
        });
        std::vector<CCurveSample> inserted;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const double err = std::abs(hermite(pending[i], mids[i].r, false) - mids[i].c);
            if (err > opts.interp_tol * mids[i].c) {
                inserted.push_back(mids[i]);
            } else {
                max_holdout_error_ = std::max(max_holdout_error_, err / mids[i].c);
            }
        }
        if (inserted.empty()) break;
        for (const auto& s : inserted) samples_.push_back(s);
        std::sort(samples_.begin(), samples_.end(), [](const auto& a, const auto& b) { return a.r < b.r; });
        pending.clear();
        for (const auto& s : inserted) {
            const std::size_t k = segment(s.r);
            // s sits at samples_[k] or samples_[k + 1]; both neighbours need checking.
            const std::size_t at = samples_[k].r == s.r ? k : k + 1;
            pending.push_back(at - 1);
            pending.push_back(at);
        }
        std::sort(pending.begin(), pending.end());
        pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
    }
}

std::size_t CCurve::segment(double r) const {
    auto it = std::upper_bound(samples_.begin(), samples_.end(), r,
                               [](double value, const CCurveSample& s) { return value < s.r; });
    std::size_t k = it == samples_.begin() ? 0 : static_cast<std::size_t>(it - samples_.begin()) - 1;
    return std::min(k, samples_.size() - 2);
}

double CCurve::hermite(std::size_t k, double r, bool slope) const {
    const CCurveSample& a = samples_[k];
    const CCurveSample& b = samples_[k + 1];
    const double H = b.r - a.r;
    const double t = (r - a.r) / H;
    const double t2 = t * t, t3 = t2 * t;
    if (!slope) {
        return (2 * t3 - 3 * t2 + 1) * a.c + (t3 - 2 * t2 + t) * H * a.dc + (-2 * t3 + 3 * t2) * b.c +
               (t3 - t2) * H * b.dc;
    }
    return ((6 * t2 - 6 * t) * a.c + (-6 * t2 + 6 * t) * b.c) / H + (3 * t2 - 4 * t + 1) * a.dc +
           (3 * t2 - 2 * t) * b.dc;
}

void CCurve::check_range(double r, const char* what) const {
    if (!(r >= 0.0) || r > r_end()) {
        std::ostringstream os;
        os << what << ": r = " << r << " outside [0, " << r_end() << "]";
        throw DomainError(os.str());
    }
}

double CCurve::value(double r) const {
    check_range(r, "CCurve::value");
    return hermite(segment(r), r, false);
}

double CCurve::derivative(double r) const {
    check_range(r, "CCurve::derivative");
    return hermite(segment(r), r, true);
}

double CCurve::energy_at(double r) const {
    check_range(r, "CCurve::energy_at");
    if (r == 0.0) return 0.0;
    const std::size_t k = segment(r);
    const CCurveSample& a = samples_[k];
    const CCurveSample& b = samples_[k + 1];
    if (r == a.r) return a.E;
    if (r == b.r) return b.E;
    try {
        return solve_bracketed([&](double E) { return cls_.gradient_energy_of_energy(E) - r; }, a.E, b.E, a.r - r,
                               b.r - r, 0.0);
    } catch (const ConvergenceError&) {
        return cls_.energy_for_gradient(r);
    }
}

NodalClass::Point CCurve::exact_point(double r) const {
    if (r == 0.0) return cls_.origin();
    return cls_.at_energy(energy_at(r), true);
}

double CCurve::exact_value(double r) const {
    if (r == 0.0) return samples_.front().c;
    return cls_.at_energy(energy_at(r), false).c;
}

double CCurve::exact_derivative(double r) const { return exact_point(r).dc_dr; }

CCurve build_ccurve(const Nonlinearity& f, int j, Sign sign, const CCurveOptions& opts) {
    return CCurve(f, j, sign, opts);
}

double ccurve_derivative(const CCurve& curve, double r) { return curve.derivative(r); }

double ScalingReport::worst() const {
    double w = 0.0;
    for (const auto& c : checks) w = std::max(w, c.max_rel_dev);
    return w;
}

namespace {

double exact_c(const NodalClass& cls, double r) {
    if (r == 0.0) return 1.0 / (static_cast<double>(cls.j()) * cls.j());
    return cls.at_energy(cls.energy_for_gradient(r), false).c;
}

// max_r |lhs(r) - scale * rhs(r / div)| / lhs(r)
ScalingCheck compare(const std::string& name, const NodalClass& lhs, const NodalClass& rhs, double div,
                     double scale, const std::vector<double>& grid) {
    ScalingCheck out{name, lhs.j(), lhs.sign(), 0.0, 0.0, static_cast<int>(grid.size())};
    for (double r : grid) {
        const double cl = exact_c(lhs, r);
        const double cr = scale * exact_c(rhs, r / div);
        const double dev = std::abs(cl - cr) / cl;
        if (dev > out.max_rel_dev) {
            out.max_rel_dev = dev;
            out.where = r;
        }
    }
    return out;
}

std::vector<double> default_grid(double limit, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = limit * (i + 1) / points;
    return g;
}

} // namespace

ScalingReport check_scaling_identities(const Nonlinearity& f, int j, std::vector<double> r_grid, int points,
                                       double r_max, const TimeMapOptions& opts) {
    if (j < 1) throw DomainError("check_scaling_identities: j must be positive");
    ScalingReport report;
    const double jj = static_cast<double>(j) * j;
    // Stay a little inside the energy horizon so every exact solve is well conditioned.
    auto grid_for = [&](double reach) {
        if (!r_grid.empty()) return r_grid;
        return default_grid(std::min(r_max, 0.98 * reach), points);
    };
    for (Sign s : {Sign::plus, Sign::minus}) {
        if (j >= 2) {
            const NodalClass big(f, 2 * j, s, opts);
            const NodalClass two(f, 2, s, opts);
            const auto grid = grid_for(std::min(big.r_limit(), jj * two.r_limit()));
            report.checks.push_back(compare("ii", big, two, jj, 1.0 / jj, grid));
        }
        if (f.is_odd()) {
            const NodalClass cj(f, j, s, opts);
            if (s == Sign::plus) {
                const NodalClass other(f, j, Sign::minus, opts);
                const auto grid = grid_for(std::min(cj.r_limit(), other.r_limit()));
                report.checks.push_back(compare("iii", cj, other, 1.0, 1.0, grid));
            }
            if (j >= 2) {
                const NodalClass one(f, 1, s, opts);
                const auto grid = grid_for(std::min(cj.r_limit(), jj * one.r_limit()));
                report.checks.push_back(compare("iv", cj, one, jj, 1.0 / jj, grid));
            }
        }
    }
    return report;
}

} // namespace nlbif
