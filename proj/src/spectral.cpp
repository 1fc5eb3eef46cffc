#include "nlbif/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlbif/errors.hpp"

namespace nlbif {

const char* to_string(OperatorMode m) {
    switch (m) {
    case OperatorMode::local: return "local";
    case OperatorMode::nonlocal_at_epsilon: return "nonlocal-at-epsilon";
    case OperatorMode::nonlocal_paper: return "nonlocal-paper";
    }
    return "?";
}

namespace {

// LDL^T of T - sigma: number of negative pivots and w^T (T - sigma)^{-1} w.
struct Factorisation {
    int negative = 0;
    double quad = 0.0;
};

Factorisation factor(const DiscretizedOperator& op, double sigma, bool need_quad) {
    Factorisation out;
    const double tiny = std::numeric_limits<double>::epsilon() * (std::abs(sigma) + 4.0 * op.off);
    double d_prev = 1.0, y_prev = 0.0;
    for (int i = 0; i < op.n; ++i) {
        double d = op.diag[i] - sigma;
        double y = need_quad ? op.w[i] : 0.0;
        if (i > 0) {
            const double l = op.off / d_prev;
            d -= l * op.off;
            if (need_quad) y -= l * y_prev;
        }
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++out.negative;
        if (need_quad) out.quad += y * y / d;
        d_prev = d;
        y_prev = y;
    }
    return out;
}

} // namespace

int DiscretizedOperator::count_greater(double sigma) const {
    const bool rank_one = epsilon != 0.0;
    const Factorisation fz = factor(*this, sigma, rank_one);
    int negative = fz.negative;
    if (rank_one) {
        // Inertia of the bordered matrix [[T - sigma, w], [w^T, -1/eps]] taken both ways.
        const double schur = -1.0 / epsilon - fz.quad;
        negative += (schur < 0.0 ? 1 : 0) - (epsilon > 0.0 ? 1 : 0);
    }
    return n - negative;
}

DiscretizedOperator DiscretizedOperator::with_epsilon(double eps) const {
    DiscretizedOperator copy = *this;
    copy.epsilon = eps;
    copy.mode = OperatorMode::nonlocal_at_epsilon;
    return copy;
}

std::vector<double> DiscretizedOperator::dense() const {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        m[i * n + i] = diag[i];
        if (i + 1 < n) {
            m[i * n + i + 1] = off;
            m[(i + 1) * n + i] = off;
        }
    }
    if (epsilon != 0.0) {
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) m[i * n + k] += epsilon * (w[i] * w[k]);
        }
    }
    return m;
}

double DiscretizedOperator::singular_epsilon() const {
    const double quad = factor(*this, 0.0, true).quad;
    if (quad == 0.0) throw DomainError("singular_epsilon: rank-one vector orthogonal to T^{-1}");
    return -1.0 / quad;
}

DiscretizedOperator assemble(const Nonlinearity& f, const Diffusion& a, const std::vector<double>& psi, double nu,
                             double r, OperatorMode mode, double epsilon) {
    if (psi.size() < 3) throw DomainError("assemble: profile needs at least one interior point");
    if (std::abs(psi.front()) > 1e-12 || std::abs(psi.back()) > 1e-12) {
        throw DomainError("assemble: profile must include the Dirichlet end values");
    }
    DiscretizedOperator op;
    op.n = static_cast<int>(psi.size()) - 2;
    op.h = std::numbers::pi / (op.n + 1);
    op.off = 1.0 / (op.h * op.h);
    op.mode = mode;
    op.nu = nu;
    op.r = r;
    op.a_value = a.a(r);
    op.da_value = a.da(r);
    op.diag.resize(op.n);
    op.w.resize(op.n);
    const double sqrt_h = std::sqrt(op.h);
    for (int i = 0; i < op.n; ++i) {
        const double u = psi[i + 1];
        const double p = nu * f.df(u) / op.a_value;
        op.diag[i] = -2.0 * op.off + p;
        op.potential_norm = std::max(op.potential_norm, std::abs(p));
        // Trapezoid weights are h at interior nodes; q vanishes at the ends.
        op.w[i] = sqrt_h * f.f(u);
    }
    switch (mode) {
    case OperatorMode::local: op.epsilon = 0.0; break;
    case OperatorMode::nonlocal_at_epsilon: op.epsilon = epsilon; break;
    case OperatorMode::nonlocal_paper:
        op.epsilon = -2.0 * nu * nu * op.da_value / (op.a_value * op.a_value * op.a_value);
        break;
    }
    return op;
}

double eigenvalue(const DiscretizedOperator& op, int k, double tol) {
    if (k < 1 || k > op.n) throw DomainError("eigenvalue: index out of range");
    double pmax = -std::numeric_limits<double>::infinity(), pmin = -pmax;
    for (double d : op.diag) {
        pmax = std::max(pmax, d + 2.0 * op.off);
        pmin = std::min(pmin, d + 2.0 * op.off);
    }
    double wnorm = 0.0;
    for (double x : op.w) wnorm += x * x;
    double hi = pmax + std::max(0.0, op.epsilon) * wnorm + 1.0;
    double lo = pmin - 4.0 * op.off + std::min(0.0, op.epsilon) * wnorm - 1.0;
    for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::abs(0.5 * (lo + hi))); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (op.count_greater(mid) >= k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> top_eigenvalues(const DiscretizedOperator& op, int count, double tol) {
    count = std::min(count, op.n);
    std::vector<double> out(count);
    for (int k = 1; k <= count; ++k) out[k - 1] = eigenvalue(op, k, tol);
    return out;
}

PositiveCount positive_count(const DiscretizedOperator& op) {
    PositiveCount pc;
    pc.count = op.count_greater(0.0);
    pc.tolerance = 1e-4 * (1.0 + op.potential_norm);
    double nearest = std::numeric_limits<double>::infinity();
    if (pc.count >= 1) nearest = std::min(nearest, std::abs(eigenvalue(op, pc.count)));
    if (pc.count < op.n) nearest = std::min(nearest, std::abs(eigenvalue(op, pc.count + 1)));
    pc.min_abs = nearest;
    pc.indeterminate = pc.min_abs < pc.tolerance;
    return pc;
}

SpectralReport spectral_report(const Nonlinearity& f, const Diffusion& a, const ProfileSource& psi, double nu,
                               double r, OperatorMode mode, int n, int top, double epsilon) {
    SpectralReport rep;
    int level_n = n;
    for (int level = 0; level < 3; ++level) {
        const DiscretizedOperator op = assemble(f, a, psi(level_n + 1), nu, r, mode, epsilon);
        const PositiveCount pc = positive_count(op);
        SpectralLevel lv{level_n, top_eigenvalues(op, top), pc.count, pc.min_abs};
        if (level == 0) {
            rep.eigenvalues = lv.top;
            rep.positive = pc.count;
            rep.min_abs = pc.min_abs;
            rep.indeterminate = pc.indeterminate;
        }
        rep.trace.push_back(std::move(lv));
        level_n = 2 * level_n + 1;
    }
    const double d1 = rep.trace[0].top[0] - rep.trace[1].top[0];
    const double d2 = rep.trace[1].top[0] - rep.trace[2].top[0];
    rep.observed_order = (d1 != 0.0 && d2 != 0.0) ? std::log2(std::abs(d1 / d2)) : 0.0;
    return rep;
}

EpsilonSweep epsilon_sweep(const Nonlinearity& f, const Diffusion& a, const std::vector<double>& psi, double nu,
                           double r, int k, double dc, const EpsilonSweepOptions& opts) {
    const DiscretizedOperator base = assemble(f, a, psi, nu, r, OperatorMode::local);
    const double a3 = base.a_value * base.a_value * base.a_value;
    EpsilonSweep out;
    out.eps0 = -2.0 * nu * nu * base.da_value / a3;
    out.eps_tilde = -2.0 * nu * nu * nu * dc / a3;

    out.eps = opts.eps_grid;
    if (out.eps.empty()) {
        const double lo = std::min(out.eps0, out.eps_tilde);
        const double hi = std::max(out.eps0, out.eps_tilde);
        const double margin = std::max(0.5 * (hi - lo), 0.25 * (1.0 + std::abs(out.eps_tilde)));
        const int m = std::max(2, opts.points);
        for (int i = 0; i < m; ++i) out.eps.push_back(lo - margin + (hi - lo + 2 * margin) * i / (m - 1));
    }
    const int tracked = opts.tracked > 0 ? opts.tracked : k + 2;
    const double spectral_tol = 1e-4 * (1.0 + base.potential_norm);

    out.min_separation = std::numeric_limits<double>::infinity();
    for (double eps : out.eps) {
        out.branches.push_back(top_eigenvalues(base.with_epsilon(eps), tracked));
        const auto& b = out.branches.back();
        for (std::size_t m = 0; m + 1 < b.size(); ++m) out.min_separation = std::min(out.min_separation, b[m] - b[m + 1]);
    }
    for (std::size_t i = 0; i + 1 < out.branches.size(); ++i) {
        for (std::size_t m = 0; m < out.branches[i].size(); ++m) {
            out.worst_decrease = std::max(out.worst_decrease, out.branches[i][m] - out.branches[i + 1][m]);
        }
    }
    out.monotone = out.worst_decrease <= opts.monotone_tol;
    out.ambiguous = out.min_separation < 10.0 * spectral_tol;

    out.eps_crossing = base.singular_epsilon();
    const DiscretizedOperator at = base.with_epsilon(out.eps_tilde);
    const auto mu = top_eigenvalues(at, k + 1);
    out.mu_at_tilde = mu[k - 1];
    out.crossing_gap = mu[k - 1] - mu[k];
    if (k >= 2) out.crossing_gap = std::min(out.crossing_gap, mu[k - 2] - mu[k - 1]);
    out.crossing_simple = out.crossing_gap > 10.0 * spectral_tol;
    return out;
}

} // namespace nlbif
