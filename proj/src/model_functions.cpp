#include "nlbif/model_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlbif/errors.hpp"
#include "nlbif/quadrature.hpp"
#include "nlbif/roots.hpp"

namespace nlbif {

namespace {

double checked(const RealFn& fn, double u, const char* what) {
    const double v = fn(u);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " is not evaluable at u = " << u;
        throw ValidationError(os.str());
    }
    return v;
}

// First sign change of f moving away from 0 in direction `dir`, refined by bracketing.
std::optional<double> locate_zero(const RealFn& f, double dir, double limit) {
    double prev_u = 0.0;
    double prev_f = 0.0;
    double u = 0.0;
    int k = 0;
    while (u < limit) {
        ++k;
        u = k <= 1000 ? 1e-3 * k : u * 1.01;
        const double fu = checked(f, dir * u, "f");
        if (k > 1 && prev_f != 0.0 && (fu < 0.0) != (prev_f < 0.0)) {
            const double root = solve_bracketed([&](double x) { return f(x); }, dir * prev_u, dir * u,
                                                prev_f, fu, 1e-15);
            return root;
        }
        if (fu == 0.0 && k > 1) return dir * u;
        prev_u = u;
        prev_f = fu;
    }
    return std::nullopt;
}

RealFn curvature_from_second_derivative(RealFn ddf) {
    // f(u) - u f'(u) = -u^2 int_0^1 s f''(u s) ds
    return [ddf = std::move(ddf)](double u) {
        if (u == 0.0) return 0.0;
        const double integral =
            gauss_fixed(gauss_legendre_10(), [&](double s) { return s * ddf(u * s); }, 0.0, 1.0);
        return -u * u * integral;
    };
}

} // namespace

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
}

const ConditionCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

RealFn build_primitive(const NonlinearityFunctions& fns) {
    if (fns.primitive) return fns.primitive;
    return [f = fns.f](double u) {
        AdaptiveOptions opts;
        opts.rel_tol = 1e-13;
        opts.abs_tol = 1e-16;
        const auto res = integrate_adaptive(f, 0.0, u, opts, gauss_legendre_10());
        if (!res.converged) throw ConvergenceError("primitive quadrature did not converge");
        return res.value;
    };
}

ValidationReport validate_nonlinearity(const NonlinearityFunctions& fns, const SampleSpec& grid) {
    if (!fns.f || !fns.df || !fns.ddf) throw ValidationError("nonlinearity needs f, f' and f''");
    ValidationReport report;
    const double tol = grid.tol;
    const RealFn F = build_primitive(fns);

    const double f0 = checked(fns.f, 0.0, "f");
    const double df0 = checked(fns.df, 0.0, "f'");
    report.checks.push_back({"f(0)=0", std::abs(f0) <= tol, std::abs(f0), 0.0, ""});
    report.checks.push_back({"f'(0)=1", std::abs(df0 - 1.0) <= tol, std::abs(df0 - 1.0), 0.0, ""});

    report.z_plus = locate_zero(fns.f, 1.0, grid.search_limit);
    report.z_minus = locate_zero(fns.f, -1.0, grid.search_limit);
    report.checks.push_back({"z_plus located", report.z_plus.has_value(), 0.0, report.z_plus.value_or(0.0),
                             report.z_plus ? "" : "no sign change of f on (0, search_limit]"});
    report.checks.push_back({"z_minus located", report.z_minus.has_value(), 0.0,
                             report.z_minus.value_or(0.0),
                             report.z_minus ? "" : "no sign change of f on [-search_limit, 0)"});

    report.horizon_lo = report.z_minus.value_or(-1.0) - grid.margin;
    report.horizon_hi = report.z_plus.value_or(1.0) + grid.margin;

    ConditionCheck concavity{"f''(u)u<0", true, -std::numeric_limits<double>::infinity(), 0.0, ""};
    ConditionCheck deriv{"f' consistent with f", true, 0.0, 0.0, ""};
    ConditionCheck deriv2{"f'' consistent with f'", true, 0.0, 0.0, ""};
    ConditionCheck curv{"curvature consistent", true, 0.0, 0.0, ""};
    const int n = std::max(grid.points, 10);
    const double step = (report.horizon_hi - report.horizon_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double u = report.horizon_lo + step * i;
        const double fu = checked(fns.f, u, "f");
        const double dfu = checked(fns.df, u, "f'");
        const double ddfu = checked(fns.ddf, u, "f''");
        if (u != 0.0) {
            const double v = ddfu * u;
            if (v > concavity.worst) {
                concavity.worst = v;
                concavity.where = u;
            }
        }
        const double hd = 1e-5 * std::max(1.0, std::abs(u));
        const double fd = (fns.f(u + hd) - fns.f(u - hd)) / (2.0 * hd);
        const double err = std::abs(fd - dfu) / (1.0 + std::abs(dfu));
        if (err > deriv.worst) {
            deriv.worst = err;
            deriv.where = u;
        }
        const double fdd = (fns.df(u + hd) - fns.df(u - hd)) / (2.0 * hd);
        const double err2 = std::abs(fdd - ddfu) / (1.0 + std::abs(ddfu));
        if (err2 > deriv2.worst) {
            deriv2.worst = err2;
            deriv2.where = u;
        }
        if (fns.curvature) {
            const double g = fns.curvature(u);
            const double err3 = std::abs(g - (fu - u * dfu)) / (1.0 + std::abs(fu) + std::abs(u * dfu));
            if (err3 > curv.worst) {
                curv.worst = err3;
                curv.where = u;
            }
        }
    }
    concavity.passed = concavity.worst < 0.0;
    deriv.passed = deriv.worst <= 1e-6;
    deriv2.passed = deriv2.worst <= 1e-6;
    curv.passed = curv.worst <= 1e-9;
    report.checks.push_back(concavity);

    const double lo = report.horizon_lo;
    const double hi = report.horizon_hi;
    const double ratio_lo = checked(fns.f, lo, "f") / lo;
    const double ratio_hi = checked(fns.f, hi, "f") / hi;
    ConditionCheck dissip{"dissipativity (horizon)", ratio_lo < 0.0 && ratio_hi < 0.0,
                          std::max(ratio_lo, ratio_hi), ratio_lo > ratio_hi ? lo : hi,
                          "f(u)/u < 0 checked at the horizon endpoints only"};
    report.checks.push_back(dissip);
    report.checks.push_back(deriv);
    report.checks.push_back(deriv2);
    if (fns.curvature) report.checks.push_back(curv);

    ConditionCheck prim{"primitive consistent", true, std::abs(F(0.0)), 0.0, ""};
    const int intervals = 100;
    const double pstep = (hi - lo) / intervals;
    for (int i = 0; i < intervals; ++i) {
        const double a = lo + i * pstep;
        const double b = a + pstep;
        const double quad = integrate_adaptive(fns.f, a, b, {1e-13, 0.0, 30}).value;
        const double diff = std::abs(F(b) - F(a) - quad) / std::max(1.0, std::abs(quad));
        if (diff > prim.worst) {
            prim.worst = diff;
            prim.where = a;
        }
    }
    prim.passed = prim.worst <= tol;
    report.checks.push_back(prim);
    return report;
}

Nonlinearity Nonlinearity::odd_cubic(double beta) {
    if (!(beta > 0.0)) throw ValidationError("odd_cubic: beta must be positive");
    Nonlinearity nl;
    nl.fns_.f = [beta](double u) { return u - beta * u * u * u; };
    nl.fns_.df = [beta](double u) { return 1.0 - 3.0 * beta * u * u; };
    nl.fns_.ddf = [beta](double u) { return -6.0 * beta * u; };
    nl.fns_.primitive = [beta](double u) { return 0.5 * u * u - 0.25 * beta * u * u * u * u; };
    nl.fns_.curvature = [beta](double u) { return 2.0 * beta * u * u * u; };
    nl.z_plus_ = 1.0 / std::sqrt(beta);
    nl.z_minus_ = -nl.z_plus_;
    nl.is_odd_ = true;
    nl.name_ = "odd_cubic";
    nl.params_ = {{"beta", beta}};
    return nl;
}

Nonlinearity Nonlinearity::split_cubic(double beta_plus, double beta_minus) {
    if (!(beta_plus > 0.0 && beta_minus > 0.0)) {
        throw ValidationError("split_cubic: both cubic coefficients must be positive");
    }
    auto coef = [beta_plus, beta_minus](double u) { return u >= 0.0 ? beta_plus : beta_minus; };
    Nonlinearity nl;
    nl.fns_.f = [coef](double u) { return u - coef(u) * u * u * u; };
    nl.fns_.df = [coef](double u) { return 1.0 - 3.0 * coef(u) * u * u; };
    nl.fns_.ddf = [coef](double u) { return -6.0 * coef(u) * u; };
    nl.fns_.primitive = [coef](double u) { return 0.5 * u * u - 0.25 * coef(u) * u * u * u * u; };
    nl.fns_.curvature = [coef](double u) { return 2.0 * coef(u) * u * u * u; };
    nl.z_plus_ = 1.0 / std::sqrt(beta_plus);
    nl.z_minus_ = -1.0 / std::sqrt(beta_minus);
    nl.is_odd_ = beta_plus == beta_minus;
    nl.name_ = "split_cubic";
    nl.params_ = {{"beta_plus", beta_plus}, {"beta_minus", beta_minus}};
    return nl;
}

Nonlinearity Nonlinearity::from_functions(NonlinearityFunctions fns, std::string name, bool is_odd,
                                          const SampleSpec& grid) {
    const ValidationReport report = validate_nonlinearity(fns, grid);
    if (!report.passed()) {
        std::ostringstream os;
        os << "nonlinearity '" << name << "' failed validation:";
        for (const auto& c : report.checks) {
            if (!c.passed) os << " [" << c.name << ": worst " << c.worst << " at " << c.where << "]";
        }
        throw ValidationError(os.str());
    }
    Nonlinearity nl;
    nl.fns_ = std::move(fns);
    nl.fns_.primitive = build_primitive(nl.fns_);
    if (!nl.fns_.curvature) nl.fns_.curvature = curvature_from_second_derivative(nl.fns_.ddf);
    nl.z_plus_ = *report.z_plus;
    nl.z_minus_ = *report.z_minus;
    nl.is_odd_ = is_odd;
    nl.name_ = std::move(name);
    return nl;
}

// ---------------------------------------------------------------------------
// Diffusion

namespace {

struct HermiteEval {
    double value, slope;
};

HermiteEval hermite_segment(const DiffusionKnot& k0, const DiffusionKnot& k1, double r) {
    const double h = k1.r - k0.r;
    const double t = (r - k0.r) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double value = (2 * t3 - 3 * t2 + 1) * k0.a + (t3 - 2 * t2 + t) * h * k0.da +
                         (-2 * t3 + 3 * t2) * k1.a + (t3 - t2) * h * k1.da;
    const double slope = (6 * t2 - 6 * t) / h * k0.a + (3 * t2 - 4 * t + 1) * k0.da +
                         (-6 * t2 + 6 * t) / h * k1.a + (3 * t2 - 2 * t) * k1.da;
    return {value, slope};
}

double hermite_partial_integral(const DiffusionKnot& k0, const DiffusionKnot& k1, double r) {
    const double h = k1.r - k0.r;
    const double t = (r - k0.r) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    return h * ((0.5 * t4 - t3 + t) * k0.a + (0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2) * h * k0.da +
                (-0.5 * t4 + t3) * k1.a + (0.25 * t4 - t3 / 3.0) * h * k1.da);
}

} // namespace

Diffusion Diffusion::constant(double value, double r_max) {
    if (!(value > 0.0)) throw ValidationError("constant diffusion must be positive");
    if (!(r_max > 0.0)) throw ValidationError("diffusion r_max must be positive");
    Diffusion d;
    d.impl_ = Constant{value};
    d.r_max_ = r_max;
    d.family_ = "constant";
    d.params_ = {{"value", value}};
    d.compute_bounds();
    return d;
}

Diffusion Diffusion::bump(double alpha, double beta, double gamma, double r0, double r_max) {
    if (!(gamma > 0.0)) throw ValidationError("bump diffusion: gamma must be positive");
    if (!(r_max > 0.0)) throw ValidationError("diffusion r_max must be positive");
    Diffusion d;
    d.impl_ = Bump{alpha, beta, gamma, r0};
    d.r_max_ = r_max;
    d.family_ = "bump";
    d.params_ = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"r0", r0}};
    d.compute_bounds();
    return d;
}

Diffusion Diffusion::from_knots(std::vector<DiffusionKnot> knots, double r_max) {
    if (knots.empty()) throw ValidationError("diffusion_from_knots: no knots");
    if (!(r_max > 0.0)) throw ValidationError("diffusion r_max must be positive");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].a > 0.0)) {
            throw ValidationError("diffusion_from_knots: nonpositive a-value at knot " + std::to_string(i));
        }
        if (i > 0 && !(knots[i].r > knots[i - 1].r)) {
            throw ValidationError("diffusion_from_knots: knots are not strictly increasing in r");
        }
    }
    if (knots.front().r > 0.0 && knots.front().da != 0.0) {
        throw ValidationError("diffusion_from_knots: first knot needs zero slope for the constant extension");
    }
    if (knots.back().r < r_max && knots.back().da != 0.0) {
        throw ValidationError("diffusion_from_knots: last knot needs zero slope for the constant extension");
    }
    Hermite herm;
    herm.knots = std::move(knots);
    herm.cumulative.assign(herm.knots.size(), 0.0);
    for (std::size_t i = 1; i < herm.knots.size(); ++i) {
        herm.cumulative[i] = herm.cumulative[i - 1] +
                             hermite_partial_integral(herm.knots[i - 1], herm.knots[i], herm.knots[i].r);
    }
    Diffusion d;
    d.impl_ = std::move(herm);
    d.r_max_ = r_max;
    d.family_ = "hermite";
    d.compute_bounds();
    return d;
}

Diffusion Diffusion::custom(RealFn a, RealFn da, double r_max, std::string name) {
    if (!a || !da) throw ValidationError("custom diffusion needs a and a'");
    if (!(r_max > 0.0)) throw ValidationError("diffusion r_max must be positive");
    Diffusion d;
    d.impl_ = Custom{std::move(a), std::move(da)};
    d.r_max_ = r_max;
    d.family_ = std::move(name);
    d.compute_bounds();
    return d;
}

Diffusion diffusion_from_knots(std::vector<DiffusionKnot> knots, double r_max) {
    return Diffusion::from_knots(std::move(knots), r_max);
}

double Diffusion::a(double r) const {
    return std::visit(
        [r](const auto& impl) -> double {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return impl.value;
            } else if constexpr (std::is_same_v<T, Bump>) {
                const double d = r - impl.r0;
                return impl.alpha + impl.beta * std::exp(-impl.gamma * d * d);
            } else if constexpr (std::is_same_v<T, Hermite>) {
                const auto& k = impl.knots;
                if (r <= k.front().r) return k.front().a;
                if (r >= k.back().r) return k.back().a;
                const auto it = std::upper_bound(k.begin(), k.end(), r,
                                                 [](double x, const DiffusionKnot& kn) { return x < kn.r; });
                const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
                return hermite_segment(k[i], k[i + 1], r).value;
            } else {
                return impl.a(r);
            }
        },
        impl_);
}

double Diffusion::da(double r) const {
    return std::visit(
        [r](const auto& impl) -> double {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Bump>) {
                const double d = r - impl.r0;
                return -2.0 * impl.gamma * d * impl.beta * std::exp(-impl.gamma * d * d);
            } else if constexpr (std::is_same_v<T, Hermite>) {
                const auto& k = impl.knots;
                if (r < k.front().r || r > k.back().r) return 0.0;
                if (k.size() == 1) return 0.0;
                auto it = std::upper_bound(k.begin(), k.end(), r,
                                           [](double x, const DiffusionKnot& kn) { return x < kn.r; });
                std::size_t i = static_cast<std::size_t>(it - k.begin());
                i = std::clamp<std::size_t>(i, 1, k.size() - 1) - 1;
                return hermite_segment(k[i], k[i + 1], r).slope;
            } else {
                return impl.da(r);
            }
        },
        impl_);
}

double Diffusion::A(double s) const {
    return std::visit(
        [s, this](const auto& impl) -> double {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return impl.value * s;
            } else if constexpr (std::is_same_v<T, Bump>) {
                const double rg = std::sqrt(impl.gamma);
                return impl.alpha * s + impl.beta * std::sqrt(std::numbers::pi) / (2.0 * rg) *
                                            (std::erf(rg * (s - impl.r0)) + std::erf(rg * impl.r0));
            } else if constexpr (std::is_same_v<T, Hermite>) {
                const auto& k = impl.knots;
                const double first = k.front().r;
                if (s <= first) return k.front().a * s;
                double base = k.front().a * first;
                if (s >= k.back().r) return base + impl.cumulative.back() + k.back().a * (s - k.back().r);
                const auto it = std::upper_bound(k.begin(), k.end(), s,
                                                 [](double x, const DiffusionKnot& kn) { return x < kn.r; });
                const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
                return base + impl.cumulative[i] + hermite_partial_integral(k[i], k[i + 1], s);
            } else {
                AdaptiveOptions opts;
                opts.rel_tol = 1e-13;
                opts.abs_tol = 1e-16;
                const auto res = integrate_adaptive(impl.a, 0.0, s, opts, gauss_legendre_10());
                if (!res.converged) throw ConvergenceError("diffusion primitive did not converge");
                (void)this;
                return res.value;
            }
        },
        impl_);
}

const std::vector<DiffusionKnot>& Diffusion::knots() const {
    static const std::vector<DiffusionKnot> none;
    if (const auto* h = std::get_if<Hermite>(&impl_)) return h->knots;
    return none;
}

bool Diffusion::is_nondecreasing() const {
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        if (da(r_max_ * i / (n - 1)) < -1e-12) return false;
    }
    return true;
}

void Diffusion::compute_bounds() {
    std::vector<double> candidates{0.0, r_max_};
    if (const auto* b = std::get_if<Bump>(&impl_)) {
        if (b->r0 > 0.0 && b->r0 < r_max_) candidates.push_back(b->r0);
    } else if (const auto* h = std::get_if<Hermite>(&impl_)) {
        const auto& k = h->knots;
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (k[i].r > 0.0 && k[i].r < r_max_) candidates.push_back(k[i].r);
            if (i + 1 == k.size()) break;
            // Critical points of the cubic segment: roots of a quadratic in t.
            const double hh = k[i + 1].r - k[i].r;
            const double p = k[i].a, q = k[i].da * hh, s = k[i + 1].a, w = k[i + 1].da * hh;
            const double qa = 6 * p + 3 * q - 6 * s + 3 * w;
            const double qb = -6 * p - 4 * q + 6 * s - 2 * w;
            const double qc = q;
            std::vector<double> ts;
            if (std::abs(qa) < 1e-300) {
                if (std::abs(qb) > 1e-300) ts.push_back(-qc / qb);
            } else {
                const double disc = qb * qb - 4 * qa * qc;
                if (disc >= 0.0) {
                    const double sq = std::sqrt(disc);
                    ts.push_back((-qb + sq) / (2 * qa));
                    ts.push_back((-qb - sq) / (2 * qa));
                }
            }
            for (double t : ts) {
                const double r = k[i].r + t * hh;
                if (t > 0.0 && t < 1.0 && r > 0.0 && r < r_max_) candidates.push_back(r);
            }
        }
    } else if (std::holds_alternative<Custom>(impl_)) {
        const int n = 2001;
        for (int i = 1; i < n - 1; ++i) candidates.push_back(r_max_ * i / (n - 1));
    }
    m_ = std::numeric_limits<double>::infinity();
    M_ = -std::numeric_limits<double>::infinity();
    for (double r : candidates) {
        const double v = a(r);
        if (!std::isfinite(v)) throw ValidationError("diffusion is not evaluable at r = " + std::to_string(r));
        m_ = std::min(m_, v);
        M_ = std::max(M_, v);
    }
    if (!(m_ > 0.0)) {
        std::ostringstream os;
        os << "diffusion '" << family_ << "' is not bounded below by a positive constant (min " << m_ << ")";
        throw ValidationError(os.str());
    }
}

PrimitiveA build_primitive_a(const Diffusion& a) { return PrimitiveA(a); }

} // namespace nlbif
