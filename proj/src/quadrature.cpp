#include "nlbif/quadrature.hpp"

#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace nlbif {

GaussRule make_gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    // legendre_p_zeros returns the nonnegative roots in increasing order.
    const std::vector<double> roots = boost::math::legendre_p_zeros<double>(n);
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double x = roots[i];
        const double dp = boost::math::legendre_p_prime<double>(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const std::size_t hi = n / 2 + i;  // for odd n, roots[0] = 0 lands in the middle
        const std::size_t lo = n - 1 - hi;
        rule.nodes[hi] = x;
        rule.nodes[lo] = -x;
        rule.weights[hi] = w;
        rule.weights[lo] = w;
    }
    return rule;
}

const GaussRule& gauss_legendre_64() {
    static const GaussRule rule = make_gauss_legendre(64);
    return rule;
}

const GaussRule& gauss_legendre_10() {
    static const GaussRule rule = make_gauss_legendre(10);
    return rule;
}

double simpson_uniform(const std::vector<double>& v, double h) {
    const std::size_t intervals = v.size() - 1;
    if (v.size() < 2) return 0.0;
    if (intervals == 1) return 0.5 * h * (v[0] + v[1]);
    if (intervals == 2) return h / 3.0 * (v[0] + 4.0 * v[1] + v[2]);
    std::size_t simpson_end = intervals;
    double tail = 0.0;
    if (intervals % 2 == 1) {
        simpson_end = intervals - 3;
        const std::size_t k = simpson_end;
        tail = 3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]);
    }
    double sum = v[0] + v[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
    return h / 3.0 * sum + tail;
}

double trapezoid_uniform(const std::vector<double>& v, double h) {
    if (v.size() < 2) return 0.0;
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i];
    return h * sum;
}

} // namespace nlbif
