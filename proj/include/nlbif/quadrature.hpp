#pragma once

#include <cmath>
#include <vector>

namespace nlbif {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule make_gauss_legendre(int n);

/// Shared immutable rules; initialisation is thread-safe.
const GaussRule& gauss_legendre_64();
const GaussRule& gauss_legendre_10();

template <class F>
double gauss_fixed(const GaussRule& rule, F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

struct AdaptiveOptions {
    double rel_tol = 1e-11;
    double abs_tol = 0.0;
    int max_depth = 48;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

/// Panel-doubling Gauss-Legendre: a panel is accepted once splitting it in two
/// changes its value by less than the tolerance.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opts = {},
                                    const GaussRule& rule = gauss_legendre_64()) {
    struct Panel {
        double a, b, value;
        int depth;
    };
    QuadratureResult out;
    if (a == b) return out;
    const double length = b - a;
    std::vector<Panel> stack;
    stack.push_back({a, b, gauss_fixed(rule, f, a, b), 0});
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double left = gauss_fixed(rule, f, p.a, m);
        const double right = gauss_fixed(rule, f, m, p.b);
        const double refined = left + right;
        const double diff = std::abs(refined - p.value);
        const double tol =
            std::max(opts.rel_tol * std::abs(refined), opts.abs_tol * std::abs((p.b - p.a) / length));
        if (diff <= tol || !std::isfinite(diff)) {
            out.value += refined;
            out.error += diff;
            ++out.panels;
            if (!std::isfinite(diff)) out.converged = false;
        } else if (p.depth >= opts.max_depth) {
            out.value += refined;
            out.error += diff;
            ++out.panels;
            out.converged = false;
        } else {
            stack.push_back({m, p.b, right, p.depth + 1});
            stack.push_back({p.a, m, left, p.depth + 1});
        }
    }
    return out;
}

/// Composite Simpson rule on uniform samples (3/8 rule closes an odd interval count).
double simpson_uniform(const std::vector<double>& values, double h);

/// Trapezoid rule on uniform samples.
double trapezoid_uniform(const std::vector<double>& values, double h);

} // namespace nlbif
