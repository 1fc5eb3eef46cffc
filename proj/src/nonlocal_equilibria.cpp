#include "nlbif/nonlocal_equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "nlbif/errors.hpp"
#include "nlbif/parallel.hpp"
#include "nlbif/roots.hpp"

namespace nlbif {

std::vector<CCurve> build_curves(const Nonlinearity& f, int j_max, const CCurveOptions& opts) {
    if (j_max < 1) throw DomainError("build_curves: j_max must be positive");
    std::vector<std::pair<int, Sign>> keys;
    for (int j = 1; j <= j_max; ++j) {
        keys.emplace_back(j, Sign::plus);
        keys.emplace_back(j, Sign::minus);
    }
    // Parallelism goes over curves; each curve is built sequentially.
    CCurveOptions inner = opts;
    inner.jobs = 1;
    std::vector<std::optional<CCurve>> built(keys.size());
    parallel_for(keys.size(), opts.jobs,
                 [&](std::size_t i) { built[i].emplace(f, keys[i].first, keys[i].second, inner); });
    std::vector<CCurve> out;
    out.reserve(built.size());
    for (auto& c : built) out.push_back(std::move(*c));
    return out;
}

Classification classify_gap(int j, double gap, double da, double tol_rel) {
    Classification c;
    c.criterion_gap = gap;
    c.tol_gap = tol_rel * (1.0 + std::abs(da));
    if (std::abs(gap) <= c.tol_gap) {
        c.hyperbolic = false;
        c.morse_index = -1;
    } else {
        c.hyperbolic = true;
        c.morse_index = gap > 0.0 ? j - 1 : j;
    }
    return c;
}

Classification classify_point(const Diffusion& a, const CCurve& curve, double nu, double r, double tol_rel) {
    const double da = a.da(r);
    return classify_gap(curve.j(), da - nu * curve.exact_derivative(r), da, tol_rel);
}

namespace {

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

BranchPoint make_point(const Diffusion& a, const CCurve& curve, double nu, double E, bool tangency,
                       double tol_rel) {
    const NodalClass::Point p = curve.nodal_class().at_energy(E, true);
    BranchPoint b;
    b.j = curve.j();
    b.sign = curve.sign();
    b.nu = nu;
    b.r = p.r;
    b.E = E;
    b.lambda = p.lambda;
    b.c = p.c;
    b.dc = p.dc_dr;
    const double da = a.da(p.r);
    const Classification cl = classify_gap(b.j, da - nu * p.dc_dr, da, tol_rel);
    b.hyperbolic = cl.hyperbolic;
    b.morse_index = cl.morse_index;
    b.criterion_gap = cl.criterion_gap;
    b.tangency = tangency;
    b.identity_residual = std::abs(nu * p.c - a.a(p.r));
    return b;
}

void roots_on_curve(const Diffusion& a, const CCurve& curve, double nu, const FindOptions& opts,
                    std::vector<BranchPoint>& out, std::vector<std::string>& warnings) {
    const auto& S = curve.samples();
    const NodalClass& cls = curve.nodal_class();
    const double scale = std::max(1.0, a.a(0.0));
    auto h_at = [&](const CCurveSample& s) { return a.a(s.r) - nu * s.c; };
    auto dh_at = [&](const CCurveSample& s) { return a.da(s.r) - nu * s.dc; };
    auto H = [&](double E) {
        const auto p = cls.at_energy(E, false);
        return a.a(p.r) - nu * p.c;
    };
    auto dH = [&](double E) {
        const auto p = cls.at_energy(E, true);
        return a.da(p.r) - nu * p.dc_dr;
    };

    std::vector<std::pair<double, bool>> found;  // (E, tangency)
    for (std::size_t k = 0; k + 1 < S.size(); ++k) {
        double E_lo = S[k].E;
        double h_lo = h_at(S[k]);
        const double h_hi = h_at(S[k + 1]);
        if (k == 0 && std::abs(h_lo) <= 1e-13 * scale) {
            // nu sits on the pitchfork value: the r = 0 root is the zero state itself.
            E_lo = 1e-6 * S[1].E;
            h_lo = H(E_lo);
        }
        if (h_hi == 0.0) {
            found.emplace_back(S[k + 1].E, false);
            continue;
        }
        if (h_lo == 0.0) continue;
        if (sgn(h_lo) != sgn(h_hi)) {
            found.emplace_back(solve_bracketed(H, E_lo, S[k + 1].E, h_lo, h_hi, 0.0), false);
            continue;
        }
        const double d_lo = dh_at(S[k]);
        const double d_hi = dh_at(S[k + 1]);
        if (sgn(d_lo) * sgn(d_hi) >= 0) continue;
        const double E_t = solve_bracketed(dH, S[k].E, S[k + 1].E, d_lo, d_hi, 0.0);
        const double h_t = H(E_t);
        if (std::abs(h_t) <= opts.tangency_tol * scale) {
            found.emplace_back(E_t, true);
        } else if (sgn(h_t) != sgn(h_lo)) {
            found.emplace_back(solve_bracketed(H, E_lo, E_t, h_lo, h_t, 0.0), false);
            found.emplace_back(solve_bracketed(H, E_t, S[k + 1].E, h_t, h_hi, 0.0), false);
        }
    }

    std::vector<BranchPoint> pts;
    for (const auto& [E, tangent] : found) pts.push_back(make_point(a, curve, nu, E, tangent, opts.tol_gap_rel));
    std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.r < y.r; });
    for (const auto& p : pts) {
        if (!out.empty() && out.back().j == p.j && out.back().sign == p.sign && !out.back().hyperbolic &&
            !p.hyperbolic && std::abs(out.back().r - p.r) <= 1e-8 * (1.0 + p.r)) {
            continue;
        }
        out.push_back(p);
    }

    const double h_end = h_at(S.back());
    std::ostringstream os;
    if (std::abs(h_end) <= opts.tangency_tol * scale) {
        os << "class (" << curve.j() << ", " << to_symbol(curve.sign()) << "): root at the horizon r = "
           << S.back().r << " (horizon-truncated)";
    } else if (curve.clamped() && h_end < 0.0) {
        os << "class (" << curve.j() << ", " << to_symbol(curve.sign())
           << "): nu c > a at the energy horizon r = " << S.back().r
           << "; at least one equilibrium lies beyond the tabulated range";
    }
    if (!os.str().empty()) warnings.push_back(os.str());
}

} // namespace

EquilibriumSet find_equilibria(const Diffusion& a, const std::vector<CCurve>& curves, double nu,
                               const FindOptions& opts) {
    if (!(nu > 0.0)) throw DomainError("find_equilibria: nu must be positive");
    EquilibriumSet set;
    set.nu = nu;
    set.zero.nu = nu;
    const double a0 = a.a(0.0);
    int index = 0;
    bool hyperbolic = true;
    for (int k = 1; static_cast<double>(k) * k * a0 <= nu * (1.0 + 1e-12); ++k) {
        const double crit = static_cast<double>(k) * k * a0;
        if (std::abs(nu - crit) <= 1e-12 * nu) {
            hyperbolic = false;
        } else {
            ++index;
        }
    }
    set.zero.morse_index = index;
    set.zero.hyperbolic = hyperbolic;

    int j_max = 0;
    for (const auto& c : curves) {
        roots_on_curve(a, c, nu, opts, set.points, set.horizon_warnings);
        j_max = std::max(j_max, c.j());
    }
    const double next = static_cast<double>(j_max + 1) * (j_max + 1);
    if (nu / next >= a.m()) {
        std::ostringstream os;
        os << "classes j > " << j_max << " may carry equilibria (nu/" << next << " >= min a = " << a.m() << ")";
        set.horizon_warnings.push_back(os.str());
    }
    return set;
}

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::pitchfork: return "pitchfork";
    case EventKind::saddle_node: return "saddle-node";
    case EventKind::degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(Direction d) {
    switch (d) {
    case Direction::supercritical: return "supercritical";
    case Direction::subcritical: return "subcritical";
    case Direction::mixed: return "mixed";
    case Direction::undetermined: return "undetermined";
    }
    return "?";
}

bool BifurcationDiagram::counts_consistent() const {
    return std::all_of(counts.begin(), counts.end(),
                       [](const CountSample& s) { return s.near_event || s.predicted == s.direct; });
}

int BifurcationDiagram::predicted_count(double nu) const {
    int n = 1;
    for (const auto& p : pieces) n += (p.nu_lo < nu && nu < p.nu_hi) ? 1 : 0;
    return n;
}

namespace {

struct Critical {
    double E;
    double r;
    double nu;
    int from;  // sign of nu_branch' before the critical point
};

struct CurveAnalysis {
    BranchPolyline polyline;
    std::vector<Critical> criticals;
    double slope_at_zero = 0.0;  // sign carrier of nu_branch'(0+)
    std::vector<std::string> warnings;
};

CurveAnalysis analyse_curve(const Diffusion& a, const CCurve& curve) {
    const auto& S = curve.samples();
    const NodalClass& cls = curve.nodal_class();
    CurveAnalysis out;
    out.polyline.j = curve.j();
    out.polyline.sign = curve.sign();
    out.polyline.r_end = curve.r_end();
    out.polyline.clamped = curve.clamped();

    // D has the sign of d nu_branch / dr = (a' c - a c') / c^2.
    auto D_at = [&](const CCurveSample& s) { return a.da(s.r) * s.c - a.a(s.r) * s.dc; };
    auto D = [&](double E) {
        const auto p = cls.at_energy(E, true);
        return a.da(p.r) * p.c - a.a(p.r) * p.dc_dr;
    };
    std::vector<double> d(S.size());
    for (std::size_t k = 0; k < S.size(); ++k) {
        d[k] = D_at(S[k]);
        const int j = curve.j();
        out.polyline.vertices.push_back({a.a(S[k].r) / S[k].c, S[k].r, d[k] > 0.0 ? j - 1 : j});
    }
    out.slope_at_zero = d[0];
    out.polyline.nu_end = out.polyline.vertices.back().nu;

    auto add = [&](double E, int from) {
        const auto p = cls.at_energy(E, false);
        out.criticals.push_back({E, p.r, a.a(p.r) / p.c, from});
    };
    for (std::size_t k = 0; k + 1 < S.size(); ++k) {
        const double E_lo = S[k].E, E_hi = S[k + 1].E;
        const double E_mid = 0.5 * (E_lo + E_hi);
        const double d_mid = D(E_mid);
        const int s_lo = sgn(d[k]), s_mid = sgn(d_mid), s_hi = sgn(d[k + 1]);
        if (s_lo != s_hi && s_lo != 0 && s_hi != 0) {
            if (s_lo != s_mid) {
                add(solve_bracketed(D, E_lo, E_mid, d[k], d_mid, 0.0), s_lo);
            } else {
                add(solve_bracketed(D, E_mid, E_hi, d_mid, d[k + 1], 0.0), s_lo);
            }
        } else if (s_lo == s_hi && s_mid != s_lo && s_mid != 0) {
            std::ostringstream os;
            os << "class (" << curve.j() << ", " << to_symbol(curve.sign()) << "): two critical points in ["
               << S[k].r << ", " << S[k + 1].r << "]; resolved by splitting the interval";
            out.warnings.push_back(os.str());
            add(solve_bracketed(D, E_lo, E_mid, d[k], d_mid, 0.0), s_lo);
            add(solve_bracketed(D, E_mid, E_hi, d_mid, d[k + 1], 0.0), s_mid);
        }
    }
    return out;
}

} // namespace

BifurcationDiagram sweep(const Diffusion& a, const std::vector<CCurve>& curves, const std::vector<double>& nu_grid,
                         const SweepOptions& opts) {
    if (nu_grid.empty()) throw DomainError("sweep: empty nu grid");
    for (std::size_t i = 0; i < nu_grid.size(); ++i) {
        if (!(nu_grid[i] > 0.0) || (i > 0 && !(nu_grid[i] > nu_grid[i - 1]))) {
            throw DomainError("sweep: nu grid must be positive and strictly increasing");
        }
    }
    BifurcationDiagram diagram;
    diagram.nu_min = nu_grid.front();
    diagram.nu_max = nu_grid.back();

    std::vector<CurveAnalysis> analyses(curves.size());
    parallel_for(curves.size(), opts.jobs, [&](std::size_t i) { analyses[i] = analyse_curve(a, curves[i]); });

    const double a0 = a.a(0.0);
    std::vector<int> js;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const CCurve& curve = curves[i];
        CurveAnalysis& an = analyses[i];
        diagram.branches.push_back(an.polyline);
        for (auto& w : an.warnings) diagram.warnings.push_back(w);

        for (std::size_t c = 0; c < an.criticals.size(); ++c) {
            const Critical& cp = an.criticals[c];
            BifurcationEvent ev;
            ev.kind = EventKind::saddle_node;
            ev.nu = cp.nu;
            ev.r = cp.r;
            ev.j = curve.j();
            ev.sign = curve.sign();
            // Minimum of nu_branch: a pair is born as nu increases.
            ev.direction = cp.from < 0 ? Direction::supercritical : Direction::subcritical;
            const bool close_prev = c > 0 && std::abs(an.criticals[c - 1].r - cp.r) <= 1e-9 * (1.0 + cp.r);
            const bool close_next =
                c + 1 < an.criticals.size() && std::abs(an.criticals[c + 1].r - cp.r) <= 1e-9 * (1.0 + cp.r);
            if (close_prev || close_next) {
                ev.kind = EventKind::degenerate;
                ev.direction = Direction::undetermined;
            }
            diagram.events.push_back(ev);
        }

        // Monotone pieces between r = 0, the critical points and the end of the range.
        std::vector<double> breaks{a0 / curve.samples().front().c};
        for (const auto& cp : an.criticals) breaks.push_back(cp.nu);
        breaks.push_back(an.polyline.nu_end);
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
            diagram.pieces.push_back({curve.j(), curve.sign(), std::min(breaks[b], breaks[b + 1]),
                                      std::max(breaks[b], breaks[b + 1])});
        }
        if (curve.clamped()) {
            std::ostringstream os;
            os << "class (" << curve.j() << ", " << to_symbol(curve.sign()) << ") tabulated up to r = "
               << curve.r_end() << " (nu_branch = " << an.polyline.nu_end << ")";
            diagram.warnings.push_back(os.str());
        }
        if (std::find(js.begin(), js.end(), curve.j()) == js.end()) js.push_back(curve.j());
    }

    for (int j : js) {
        BifurcationEvent ev;
        ev.kind = EventKind::pitchfork;
        ev.j = j;
        ev.r = 0.0;
        ev.nu = static_cast<double>(j) * j * a0;
        std::vector<Direction> dirs;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            if (curves[i].j() != j) continue;
            const double s = analyses[i].slope_at_zero;
            const double tol = 1e-12 * (1.0 + a0);
            dirs.push_back(s > tol ? Direction::supercritical
                                   : (s < -tol ? Direction::subcritical : Direction::undetermined));
        }
        ev.direction = dirs.front();
        for (Direction d : dirs) {
            if (d != ev.direction) ev.direction = Direction::mixed;
        }
        diagram.events.push_back(ev);
    }
    std::stable_sort(diagram.events.begin(), diagram.events.end(), [](const auto& x, const auto& y) {
        if (x.nu != y.nu) return x.nu < y.nu;
        return x.j < y.j;
    });

    diagram.counts.resize(nu_grid.size());
    parallel_for(nu_grid.size(), opts.jobs, [&](std::size_t i) {
        const double nu = nu_grid[i];
        diagram.counts[i] = {nu, diagram.predicted_count(nu), find_equilibria(a, curves, nu, opts.find).count(), false};
    });
    for (auto& s : diagram.counts) {
        for (const auto& ev : diagram.events) {
            if (std::abs(s.nu - ev.nu) <= 1e-9 * (1.0 + s.nu)) s.near_event = true;
        }
        for (const auto& b : diagram.branches) {
            if (std::abs(s.nu - b.nu_end) <= 1e-9 * (1.0 + s.nu)) s.near_event = true;
        }
    }
    return diagram;
}

NonlocalProfile equilibrium_profile(const Nonlinearity& f, const Diffusion& a, const BranchPoint& point, int n) {
    NonlocalProfile out;
    out.profile = reconstruct_profile(f, point.lambda, point.j, point.sign, point.E, n);
    const auto& psi = out.profile.phi;
    const double h = out.profile.x[1] - out.profile.x[0];
    out.r_rel_error = std::abs(out.profile.r - point.r) / point.r;
    const double ar = a.a(point.r);
    // Odd extension through the Dirichlet ends keeps the stencil fourth order at the boundary.
    const int m = static_cast<int>(psi.size()) - 1;
    auto at = [&](int i) {
        if (i < 0) return -psi[-i];
        if (i > m) return -psi[2 * m - i];
        return psi[i];
    };
    double worst = 0.0;
    for (int i = 1; i < m; ++i) {
        const double d2 =
            (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h);
        worst = std::max(worst, std::abs(ar * d2 + point.nu * f.f(psi[i])));
    }
    out.residual = worst;
    out.verified = out.r_rel_error <= 1e-6 && out.residual <= 1e-5;
    return out;
}

} // namespace nlbif
