// Acceptance checks: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nlbif/c_curves.hpp"
#include "nlbif/chafee_infante.hpp"
#include "nlbif/nonlocal_equilibria.hpp"
#include "nlbif/pde_sim.hpp"
#include "nlbif/spectral.hpp"

using namespace nlbif;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

const Nonlinearity& odd() {
    static const Nonlinearity f = Nonlinearity::odd_cubic();
    return f;
}

const Nonlinearity& split() {
    static const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    return f;
}

const std::vector<CCurve>& odd_curves() {
    static const std::vector<CCurve> c = build_curves(odd(), 4);
    return c;
}

const std::vector<CCurve>& split_curves() {
    static const std::vector<CCurve> c = build_curves(split(), 4);
    return c;
}

const CCurve& pick(const std::vector<CCurve>& curves, int j, Sign s) {
    return curves[2 * (j - 1) + (s == Sign::plus ? 0 : 1)];
}

const Diffusion& rising() {
    static const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {4, 3, 0}});
    return a;
}

const Diffusion& dip() {
    static const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {1, 0.3, 0}, {2.5, 1.2, 0}});
    return a;
}

std::vector<double> profile(const Nonlinearity& f, const BranchPoint& p, int intervals) {
    return reconstruct_profile(f, p.lambda, p.j, p.sign, p.E, intervals).phi;
}

// Anchor values c_j(0) = 1/j^2.
Outcome criterion_1() {
    double worst = 0.0;
    for (const auto* curves : {&odd_curves(), &split_curves()}) {
        for (const auto& c : *curves) {
            const double target = 1.0 / (c.j() * c.j());
            worst = std::max(worst, std::abs(c.value(0.0) - target));
            worst = std::max(worst, std::abs(c.exact_value(1e-12) - target));
        }
    }
    return {worst <= 1e-8, format("max |c_j(0) - 1/j^2| = %.3e (tol 1e-8), 16 curves", worst)};
}

// Census for a = 1.
Outcome criterion_2() {
    bool ok = true;
    std::string detail;
    const Diffusion a = Diffusion::constant(1.0);
    for (auto [nu, N] : std::vector<std::pair<double, int>>{{1.5, 1}, {5.0, 2}, {9.5, 3}}) {
        const int n = find_equilibria(a, odd_curves(), nu).count();
        ok = ok && n == 2 * N + 1;
        detail += format("nu=%.1f: %d (want %d)  ", nu, n, 2 * N + 1);
    }
    return {ok, detail};
}

// Census for a nondecreasing Hermite diffusion with a(0) = 1.
Outcome criterion_3() {
    bool ok = true;
    int cases = 0;
    std::string bad;
    for (int k = 1; k <= 3; ++k) {
        for (double t : {0.05, 0.5, 0.95, 1.0}) {
            const double nu = k * k + t * (2 * k + 1);
            const int n = find_equilibria(rising(), odd_curves(), nu).count();
            ++cases;
            if (n != 2 * k + 1) {
                ok = false;
                bad += format(" nu=%.3f:%d", nu, n);
            }
        }
    }
    return {ok, format("%d values of nu across k=1..3 gave 2k+1 equilibria%s", cases, ok ? "" : (" except" + bad).c_str())};
}

// Scaling identities, exact and through the interpolants.
Outcome criterion_4() {
    double odd_iv = 0.0;
    for (int j = 2; j <= 4; ++j) {
        for (const auto& c : check_scaling_identities(odd(), j).checks) {
            if (c.identity == "iv") odd_iv = std::max(odd_iv, c.max_rel_dev);
        }
    }
    // Identity (ii) at j = 2 compares c_4 with c_2.
    const ScalingReport split_rep = check_scaling_identities(split(), 2);
    double split_ii = -1.0;
    for (const auto& c : split_rep.checks) {
        if (c.identity == "ii" && c.j == 4) split_ii = std::max(split_ii, c.max_rel_dev);
    }

    // Same identities on the tabulated curves.
    double interp_iv = 0.0, interp_ii = 0.0;
    const CCurve& c1 = pick(odd_curves(), 1, Sign::plus);
    for (int j = 2; j <= 4; ++j) {
        const CCurve& cj = pick(odd_curves(), j, Sign::plus);
        const double top = 0.98 * std::min(cj.r_end(), c1.r_end() * j * j);
        for (int i = 1; i <= 100; ++i) {
            const double r = top * i / 100.0;
            const double lhs = cj.value(r), rhs = c1.value(r / (j * j)) / (j * j);
            interp_iv = std::max(interp_iv, std::abs(lhs - rhs) / lhs);
        }
    }
    for (Sign s : {Sign::plus, Sign::minus}) {
        const CCurve& c2 = pick(split_curves(), 2, s);
        const CCurve& c4 = pick(split_curves(), 4, s);
        const double top = 0.98 * std::min(c4.r_end(), c2.r_end() * 4);
        for (int i = 1; i <= 100; ++i) {
            const double r = top * i / 100.0;
            const double lhs = c4.value(r), rhs = c2.value(r / 4) / 4;
            interp_ii = std::max(interp_ii, std::abs(lhs - rhs) / lhs);
        }
    }
    const bool ok = odd_iv <= 1e-6 && split_ii >= 0.0 && split_ii <= 1e-6 && interp_iv <= 1e-6 && interp_ii <= 1e-6;
    return {ok, format("odd (iv) exact %.2e interp %.2e; split (ii) c4 vs c2 exact %.2e interp %.2e (tol 1e-6)", odd_iv,
                       interp_iv, split_ii, interp_ii)};
}

// Spectral count equals derivative index.
Outcome criterion_5() {
    struct Scenario {
        const Diffusion* a;
        std::vector<double> nus;
    };
    const Diffusion one = Diffusion::constant(1.0);
    const std::vector<Scenario> scenarios{
        {&one, {1.5, 5.0, 9.5}},
        {&rising(), {2.5, 7.0, 13.0}},
        {&dip(), {0.8, 2.5}},
    };
    const int n = 2001;
    int checked = 0, agree = 0, dip_points = 0;
    for (const auto& sc : scenarios) {
        for (double nu : sc.nus) {
            const EquilibriumSet set = find_equilibria(*sc.a, odd_curves(), nu);
            for (const auto& p : set.points) {
                if (!p.hyperbolic) continue;
                const DiscretizedOperator op =
                    assemble(odd(), *sc.a, profile(odd(), p, n + 1), nu, p.r, OperatorMode::nonlocal_paper);
                const PositiveCount pc = positive_count(op);
                ++checked;
                if (sc.a == &dip()) ++dip_points;
                if (!pc.indeterminate && pc.count == p.morse_index) ++agree;
            }
        }
    }
    const bool ok = checked >= 12 && agree == checked && dip_points > 0;
    return {ok, format("%d/%d hyperbolic equilibria agree at n=%d (%d from the dip scenario)", agree, checked, n, dip_points)};
}

// Zero crossing of the rank-one family.
Outcome criterion_6() {
    const Diffusion one = Diffusion::constant(1.0);
    struct Pick {
        double nu;
        int j;
    };
    bool ok = true;
    std::string detail;
    for (const Pick& pk : {Pick{5.0, 1}, Pick{5.0, 2}, Pick{9.5, 3}}) {
        const EquilibriumSet set = find_equilibria(one, odd_curves(), pk.nu);
        const auto it = std::find_if(set.points.begin(), set.points.end(),
                                     [&](const BranchPoint& p) { return p.j == pk.j && p.sign == Sign::plus; });
        if (it == set.points.end()) return {false, format("equilibrium j=%d at nu=%.1f not found", pk.j, pk.nu)};
        const BranchPoint& p = *it;
        const EpsilonSweep coarse = epsilon_sweep(odd(), one, profile(odd(), p, 2002), pk.nu, p.r, p.j, p.dc);
        const EpsilonSweep fine = epsilon_sweep(odd(), one, profile(odd(), p, 4004), pk.nu, p.r, p.j, p.dc);
        const double m1 = std::abs(coarse.mu_at_tilde), m2 = std::abs(fine.mu_at_tilde);
        const double ratio = m1 / m2;
        const double decrease = std::max(coarse.worst_decrease, fine.worst_decrease);
        const bool here = m1 <= 5e-3 && ratio >= 3.0 && decrease <= 1e-8 && coarse.monotone && fine.monotone;
        ok = ok && here;
        detail += format("j=%d: |mu|=%.2e ratio=%.2f worst decrease=%.1e; ", pk.j, m1, ratio, decrease);
    }
    return {ok, detail};
}

// Hyperbolicity boundary at a crafted tangency.
Outcome criterion_7() {
    const double nu = 2.0, rs = 1.2;
    const CCurve& c = pick(odd_curves(), 1, Sign::plus);
    const double a_star = nu * c.exact_value(rs), da_star = nu * c.exact_derivative(rs);
    const Diffusion a = Diffusion::from_knots({{0, 3.0, 0}, {rs, a_star, da_star}, {3.0, 3.0, 0}});
    const EquilibriumSet set = find_equilibria(a, odd_curves(), nu);
    const auto it = std::find_if(set.points.begin(), set.points.end(), [&](const BranchPoint& p) {
        return p.j == 1 && p.sign == Sign::plus && std::abs(p.r - rs) < 1e-3;
    });
    if (it == set.points.end()) return {false, "tangent equilibrium not found"};
    const BranchPoint& p = *it;
    std::vector<double> mins;
    for (int n : {1001, 2003, 4007}) {
        const DiscretizedOperator op = assemble(odd(), a, profile(odd(), p, n + 1), nu, p.r, OperatorMode::nonlocal_paper);
        mins.push_back(positive_count(op).min_abs);
    }
    const double order1 = std::log2(mins[0] / mins[1]), order2 = std::log2(mins[1] / mins[2]);
    const bool ok = !p.hyperbolic && mins[1] < mins[0] && mins[2] < mins[1] && order1 >= 1.0 && order2 >= 1.0;
    return {ok, format("non-hyperbolic flag %s, gap %.1e; min|eig| %.2e -> %.2e -> %.2e, observed order %.2f, %.2f",
                       p.hyperbolic ? "NOT raised" : "raised", p.criterion_gap, mins[0], mins[1], mins[2], order1, order2)};
}

// Bifurcation diagram for the dip.
Outcome criterion_8() {
    std::vector<double> grid;
    for (int i = 0; i < 120; ++i) grid.push_back(0.3 + 0.0371 * i);
    const std::vector<CCurve> curves(odd_curves().begin(), odd_curves().begin() + 4);
    const BifurcationDiagram d = sweep(dip(), curves, grid);
    int pitchfork_j1 = 0, saddles = 0, before = 0;
    for (const auto& e : d.events) {
        if (e.kind == EventKind::pitchfork && e.j == 1 && std::abs(e.nu - dip().a(0.0)) <= 1e-6) ++pitchfork_j1;
        if (e.kind != EventKind::pitchfork && e.j == 1 && e.sign == Sign::plus) {
            ++saddles;
            if (e.nu < dip().a(0.0)) ++before;
        }
    }
    int mismatches = 0, near = 0;
    for (const auto& s : d.counts) {
        if (s.near_event) ++near;
        if (s.predicted != s.direct) ++mismatches;
    }
    const bool ok = pitchfork_j1 == 1 && saddles >= 2 && saddles % 2 == 0 && before >= 1 && mismatches == 0 && near == 0;
    return {ok, format("j=1 pitchforks at a(0): %d; j=1 saddle-nodes per sign: %d (%d below the pitchfork); "
                       "count mismatches %d over %zu grid values",
                       pitchfork_j1, saddles, before, mismatches, d.counts.size())};
}

// Gradient dynamics.
Outcome criterion_9() {
    const int n = 1024;
    const Model m{odd(), Diffusion::constant(1.0), 5.0};
    const EquilibriumSet set = find_equilibria(m.a, odd_curves(), m.nu);
    std::vector<KnownEquilibrium> known{{"zero", std::vector<double>(n + 2, 0.0), set.zero.morse_index}};
    for (const auto& p : set.points) {
        known.push_back({std::to_string(p.j) + to_symbol(p.sign), profile(odd(), p, n + 1), p.morse_index});
    }
    EvolveOptions o;
    o.log_every = 1;

    const TrajectoryLog a = evolve(sample_on_grid([](double x) { return 0.1 * std::sin(x); }, n), m,
                                   Form::quasilinear, 40.0, known, o);
    const double h1 = a.entries.back().dist_h1;
    bool monotone = a.lyapunov_monotone;
    for (std::size_t i = 1; i < a.entries.size(); ++i) {
        monotone = monotone && a.entries[i].V <= a.entries[i - 1].V + 1e-8 * (1 + std::abs(a.entries[i - 1].V));
    }
    const bool first = a.converged && a.terminal == "1+" && h1 <= 1e-4 && monotone;

    std::mt19937_64 rng(20261019);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> amps(8);
    for (double& v : amps) v = 1e-6 * unit(rng);
    const auto u0 = sample_on_grid(
        [&](double x) {
            double v = 0.1 * std::sin(2 * x);
            for (int k = 1; k <= 8; ++k) v += amps[k - 1] * std::sin(k * x);
            return v;
        },
        n);
    o.log_every = 50;
    const TrajectoryLog b = evolve(u0, m, Form::quasilinear, 60.0, known, o);
    int terminal_index = -1;
    for (const auto& k : known) {
        if (k.id == b.terminal) terminal_index = k.morse_index;
    }
    const auto j2 = std::find_if(known.begin(), known.end(), [](const KnownEquilibrium& k) { return k.morse_index == 1; });
    const double final_j2 = h1_distance(b.final_state.u, j2->u);
    const bool second = b.converged && terminal_index == 0 && final_j2 > 0.1 && b.lyapunov_monotone;
    return {first && second,
            format("sin x -> %s (H1 %.1e, t=%.2f, V monotone %s); perturbed sin 2x -> %s (index %d, H1 to %s %.2f)",
                   a.terminal.c_str(), h1, a.final_state.t, monotone ? "yes" : "no", b.terminal.c_str(), terminal_index,
                   j2->id.c_str(), final_j2)};
}

// Quadrature and profile invariants.
Outcome criterion_10() {
    double limit = 0.0, identity = 0.0, arch = 0.0;
    for (const Nonlinearity* f : {&odd(), &split()}) {
        for (Sign s : {Sign::plus, Sign::minus}) {
            for (double lambda : {1.0, 2.0, 16.0}) {
                const double E = 1e-10 * f->heteroclinic_level(s);
                limit = std::max(limit, std::abs(tau(*f, E, lambda, s) - pi / std::sqrt(lambda)));
            }
        }
        for (int j = 1; j <= 4; ++j) {
            for (Sign s : {Sign::plus, Sign::minus}) {
                for (double t : {0.3, 1.5}) {
                    const EquilibriumCI eq = local_equilibrium(*f, j * j * (1.0 + t), j, s, 4096);
                    identity = std::max(identity, energy_identity_deviation(eq, *f));
                    arch = std::max(arch, std::abs(eq.r - eq.r_arch) / eq.r_arch);
                }
            }
        }
    }
    return {limit <= 1e-6 && identity <= 1e-8 && arch <= 1e-6,
            format("time-map limit %.1e (tol 1e-6), energy identity %.1e (tol 1e-8), arch vs quadrature r %.1e (tol 1e-6)",
                   limit, identity, arch)};
}

} // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu: %s  %s  [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
