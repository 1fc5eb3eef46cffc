#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "nlbif/errors.hpp"

namespace nlbif {

/// Bracketed root of a continuous function given f(lo), f(hi) of opposite sign.
/// Converges once the bracket is narrower than x_tol + 4 eps |x|.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double f_lo, double f_hi, double x_tol,
                       std::uintmax_t max_iter = 300) {
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (!(std::isfinite(f_lo) && std::isfinite(f_hi))) {
        throw ConvergenceError("bracketed root: non-finite function value at bracket end");
    }
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw ConvergenceError("bracketed root: interval [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "] does not bracket a sign change");
    }
    const double eps = std::numeric_limits<double>::epsilon();
    auto done = [x_tol, eps](double a, double b) {
        return std::abs(b - a) <= x_tol + 4.0 * eps * std::max(std::abs(a), std::abs(b));
    };
    std::uintmax_t iters = max_iter;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iters);
    if (iters >= max_iter && !done(a, b)) {
        throw ConvergenceError("bracketed root: iteration limit reached");
    }
    return 0.5 * (a + b);
}

template <class F>
double solve_bracketed(F&& f, double lo, double hi, double x_tol, std::uintmax_t max_iter = 300) {
    return solve_bracketed(f, lo, hi, f(lo), f(hi), x_tol, max_iter);
}

} // namespace nlbif
