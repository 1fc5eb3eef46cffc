#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "nlbif/nonlocal_equilibria.hpp"

namespace nlbif {
namespace {

const std::vector<CCurve>& odd_curves() {
    static const std::vector<CCurve> curves = build_curves(Nonlinearity::odd_cubic(), 4);
    return curves;
}

int count_index(const EquilibriumSet& s, int idx) {
    return static_cast<int>(std::count_if(s.points.begin(), s.points.end(),
                                          [&](const BranchPoint& p) { return p.morse_index == idx; }));
}

TEST(FindEquilibriaTest, ConstantDiffusionCensus) {
    const Diffusion a = Diffusion::constant(1.0);
    const std::vector<std::pair<double, int>> cases{{0.5, 1}, {1.5, 3}, {5.0, 5}, {9.5, 7}};
    for (const auto& [nu, expected] : cases) {
        const EquilibriumSet s = find_equilibria(a, odd_curves(), nu);
        EXPECT_EQ(s.count(), expected) << "nu=" << nu;
        for (const auto& p : s.points) {
            EXPECT_TRUE(p.hyperbolic);
            EXPECT_EQ(p.morse_index, p.j - 1);
            EXPECT_LE(p.identity_residual, 1e-10);
        }
    }
}

TEST(FindEquilibriaTest, IndicesAtFive) {
    const EquilibriumSet s = find_equilibria(Diffusion::constant(1.0), odd_curves(), 5.0);
    ASSERT_EQ(s.points.size(), 4u);
    EXPECT_EQ(count_index(s, 0), 2);
    EXPECT_EQ(count_index(s, 1), 2);
    EXPECT_EQ(s.zero.morse_index, 2);
    EXPECT_TRUE(s.zero.hyperbolic);
}

TEST(FindEquilibriaTest, ZeroOnlyBelowFirstThreshold) {
    const EquilibriumSet s = find_equilibria(Diffusion::constant(1.0), odd_curves(), 0.5);
    EXPECT_TRUE(s.points.empty());
    EXPECT_EQ(s.zero.morse_index, 0);
}

TEST(FindEquilibriaTest, NondecreasingDiffusion) {
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {4, 3, 0}}, 50.0);
    ASSERT_TRUE(a.is_nondecreasing());
    for (int k = 1; k <= 3; ++k) {
        for (double t : {0.3, 1.0}) {
            const double nu = k * k + t * (2 * k + 1);
            EXPECT_EQ(find_equilibria(a, odd_curves(), nu).count(), 2 * k + 1) << "nu=" << nu;
        }
    }
}

TEST(ClassifyTest, GapSignDecidesIndex) {
    EXPECT_EQ(classify_gap(3, 0.5, 0.0).morse_index, 2);
    EXPECT_EQ(classify_gap(3, -0.5, 0.0).morse_index, 3);
    EXPECT_FALSE(classify_gap(3, 1e-9, 0.0).hyperbolic);
    EXPECT_EQ(classify_gap(3, 1e-9, 0.0).morse_index, -1);
}

TEST(ClassifyTest, GapSignMatchesBranchSlope) {
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {1, 0.3, 0}, {2.5, 1.2, 0}}, 50.0);
    const CCurve& c = odd_curves()[0];
    for (double r : {0.3, 0.9, 1.7, 3.0}) {
        const double nu = a.a(r) / c.exact_value(r);
        const Classification cl = classify_point(a, c, nu, r);
        const double h = 1e-6;
        const double slope = (a.a(r + h) / c.exact_value(r + h) - a.a(r - h) / c.exact_value(r - h)) / (2 * h);
        EXPECT_EQ(cl.criterion_gap > 0, slope > 0) << "r=" << r;
    }
}

TEST(FindEquilibriaTest, CraftedTangencyIsNonHyperbolic) {
    const CCurve& c = odd_curves()[0];
    const double nu = 2.0, rs = 1.2;
    const double a0 = nu * c.exact_value(rs), a1 = nu * c.exact_derivative(rs);
    const Diffusion a = Diffusion::from_knots({{0, 3.0, 0}, {rs, a0, a1}, {3.0, 3.0, 0}}, 50.0);
    const EquilibriumSet s = find_equilibria(a, odd_curves(), nu);
    bool found = false;
    for (const auto& p : s.points) {
        if (p.j == 1 && p.sign == Sign::plus && std::abs(p.r - rs) < 1e-3) {
            found = true;
            EXPECT_FALSE(p.hyperbolic);
            EXPECT_EQ(p.morse_index, -1);
        }
    }
    EXPECT_TRUE(found);
}

TEST(SweepTest, ConstantDiffusionHasOnlyPitchforks) {
    std::vector<double> grid;
    for (int i = 0; i < 60; ++i) grid.push_back(0.3 + 0.27 * i);
    const BifurcationDiagram d = sweep(Diffusion::constant(1.0), odd_curves(), grid);
    int pitchforks = 0;
    for (const auto& e : d.events) {
        EXPECT_EQ(e.kind, EventKind::pitchfork);
        EXPECT_EQ(e.direction, Direction::supercritical);
        EXPECT_NEAR(e.nu, e.j * e.j, 1e-12);
        ++pitchforks;
    }
    EXPECT_EQ(pitchforks, 4);
    EXPECT_TRUE(d.counts_consistent());
}

TEST(SweepTest, DipProducesSaddleNodesBeforePitchfork) {
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {1, 0.3, 0}, {2.5, 1.2, 0}}, 50.0);
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(0.31 + 0.073 * i);
    const std::vector<CCurve> curves(odd_curves().begin(), odd_curves().begin() + 2);
    const BifurcationDiagram d = sweep(a, curves, grid);
    int saddles = 0, pitchforks = 0, before = 0;
    for (const auto& e : d.events) {
        if (e.kind == EventKind::pitchfork) {
            ++pitchforks;
            EXPECT_NEAR(e.nu, 1.0, 1e-12);
        } else if (e.j == 1 && e.sign == Sign::plus) {
            ++saddles;
            if (e.nu < 1.0) ++before;
        }
    }
    EXPECT_EQ(pitchforks, 1);
    EXPECT_GE(saddles, 2);
    EXPECT_EQ(saddles % 2, 0);
    EXPECT_GE(before, 1);
    EXPECT_TRUE(d.counts_consistent());
}

TEST(ProfileTest, NonlocalResidualAndGradientEnergy) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::constant(1.0);
    const EquilibriumSet s = find_equilibria(a, odd_curves(), 5.0);
    for (const auto& p : s.points) {
        const NonlocalProfile prof = equilibrium_profile(f, a, p, 4096);
        EXPECT_TRUE(prof.verified);
        EXPECT_LE(prof.r_rel_error, 1e-6);
    }
    const NonlocalProfile p0 = equilibrium_profile(f, a, s.points[0], 2048);
    const NonlocalProfile p1 = equilibrium_profile(f, a, s.points[1], 2048);
    ASSERT_NE(p0.profile.sign, p1.profile.sign);
    for (std::size_t i = 0; i < p0.profile.phi.size(); i += 97) EXPECT_NEAR(p0.profile.phi[i], -p1.profile.phi[i], 1e-10);
}

} // namespace
} // namespace nlbif
