#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nlbif/errors.hpp"
#include "nlbif/time_maps.hpp"

namespace nlbif {
namespace {

constexpr double pi = std::numbers::pi;

TEST(AmplitudeTest, CubicInversion) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    EXPECT_NEAR(amplitude(f, 0.25, Sign::plus), 1.0, 1e-12);
    EXPECT_NEAR(amplitude(f, 3.0 / 16.0, Sign::plus), std::sqrt(2.0) / 2, 1e-12);
    EXPECT_NEAR(amplitude(f, 3.0 / 16.0, Sign::minus), -std::sqrt(2.0) / 2, 1e-12);
}

TEST(TimeMapTest, SmallEnergyLimitIsHarmonic) {
    for (const Nonlinearity& f : {Nonlinearity::odd_cubic(), Nonlinearity::split_cubic(1.0, 0.25)}) {
        for (Sign s : {Sign::plus, Sign::minus}) {
            for (double lambda : {1.0, 2.0, 9.0}) {
                const double E = 1e-10 * f.heteroclinic_level(s);
                EXPECT_NEAR(tau(f, E, lambda, s), pi / std::sqrt(lambda), 1e-6);
            }
        }
    }
}

TEST(TimeMapTest, LambdaScaling) {
    const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    for (double E : {0.01, 0.1, 0.2}) {
        EXPECT_NEAR(tau(f, E, 4.0, Sign::plus), tau(f, E, 1.0, Sign::plus) / 2, 1e-13);
    }
}

TEST(TimeMapTest, OddSymmetry) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    for (double E : {0.001, 0.05, 0.2, 0.249}) {
        EXPECT_NEAR(tau(f, E, 1.0, Sign::plus), tau(f, E, 1.0, Sign::minus), 1e-12);
    }
}

TEST(TimeMapTest, StrictlyIncreasingInEnergy) {
    const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    for (Sign s : {Sign::plus, Sign::minus}) {
        double prev = 0.0;
        for (int i = 1; i < 100; ++i) {
            const double t = tau(f, 0.2499 * i / 100.0, 1.0, s);
            EXPECT_GT(t, prev);
            prev = t;
        }
    }
}

TEST(TimeMapTest, DerivativeMatchesDifferences) {
    const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    for (Sign s : {Sign::plus, Sign::minus}) {
        for (double E : {0.02, 0.1, 0.2}) {
            const double h = 1e-5;
            const double fd = (tau(f, E + h, 1.0, s) - tau(f, E - h, 1.0, s)) / (2 * h);
            EXPECT_NEAR(tau_derivative(f, E, s), fd, 1e-6 * std::abs(fd));
        }
    }
}

TEST(TimeMapTest, KnownCubicValue) {
    // Complete elliptic integral form: tau_1(E) = 2 sqrt(2) K(k) / sqrt(2 - U^2) ... checked via k^2 = U^2/(2-U^2).
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const double U = 0.8;
    const double E = U * U / 2 - U * U * U * U / 4;
    const double k = std::sqrt(U * U / (2 - U * U));
    const double expected = 2.0 * std::sqrt(2.0) * std::comp_ellint_1(k) / std::sqrt(2 - U * U);
    EXPECT_NEAR(tau(f, E, 1.0, Sign::plus), expected, 1e-10);
}

TEST(CompositeTimeTest, ArchCounting) {
    const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    const double E = 0.1;
    const double tp = tau(f, E, 1.0, Sign::plus), tm = tau(f, E, 1.0, Sign::minus);
    EXPECT_NEAR(composite_time(f, E, 1.0, 1, Sign::plus), tp, 1e-14);
    EXPECT_NEAR(composite_time(f, E, 1.0, 1, Sign::minus), tm, 1e-14);
    EXPECT_NEAR(composite_time(f, E, 1.0, 2, Sign::plus), tp + tm, 1e-13);
    EXPECT_NEAR(composite_time(f, E, 1.0, 2, Sign::minus), tp + tm, 1e-13);
    EXPECT_NEAR(composite_time(f, E, 1.0, 3, Sign::plus), 2 * tp + tm, 1e-13);
    EXPECT_NEAR(composite_time(f, E, 1.0, 3, Sign::minus), tp + 2 * tm, 1e-13);
    const Nonlinearity g = Nonlinearity::odd_cubic();
    EXPECT_NEAR(composite_time(g, E, 1.0, 4, Sign::minus), 4 * tau(g, E, 1.0, Sign::plus), 1e-12);
}

TEST(TimeMapTest, EnergyOutsideRangeThrows) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    EXPECT_THROW(tau(f, 0.3, 1.0, Sign::plus), DomainError);
    EXPECT_THROW(tau(f, -0.1, 1.0, Sign::plus), DomainError);
}

TEST(EnergyCeilingTest, MixedClassesUseSmallerLevel) {
    const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    EXPECT_NEAR(energy_ceiling(f, 1, Sign::minus), 1.0, 1e-12);
    EXPECT_NEAR(energy_ceiling(f, 1, Sign::plus), 0.25, 1e-12);
    EXPECT_NEAR(energy_ceiling(f, 2, Sign::minus), 0.25, 1e-12);
}

} // namespace
} // namespace nlbif
