#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "nlbif/nonlocal_equilibria.hpp"
#include "nlbif/spectral.hpp"

namespace nlbif {
namespace {

const std::vector<CCurve>& odd_curves() {
    static const std::vector<CCurve> curves = build_curves(Nonlinearity::odd_cubic(), 2);
    return curves;
}

std::vector<double> dense_eigenvalues(const DiscretizedOperator& op) {
    const std::vector<double> m = op.dense();
    Eigen::MatrixXd A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m.data(), op.n, op.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + op.n);
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

ProfileSource source(const Nonlinearity& f, const BranchPoint& p) {
    return [f, p](int intervals) { return reconstruct_profile(f, p.lambda, p.j, p.sign, p.E, intervals).phi; };
}

TEST(OperatorTest, ZeroProfileGivesShiftedLaplacian) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::constant(1.0);
    const int n = 400;
    const DiscretizedOperator op = assemble(f, a, std::vector<double>(n + 2, 0.0), 1.0, 0.0, OperatorMode::local);
    const double h = std::numbers::pi / (n + 1);
    for (int k = 1; k <= 4; ++k) {
        const double exact = 1.0 - std::pow(2.0 / h * std::sin(k * h / 2), 2);
        EXPECT_NEAR(eigenvalue(op, k), exact, 1e-10);
        EXPECT_NEAR(eigenvalue(op, k), 1.0 - k * k, 1e-3 * k * k);
    }
}

TEST(OperatorTest, ZeroWeightEqualsLocalMatrix) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {1, 0.3, 0}, {2.5, 1.2, 0}});
    const std::vector<double> psi = local_equilibrium(f, 3.0, 1, Sign::plus, 101).phi;
    const DiscretizedOperator loc = assemble(f, a, psi, 1.0, 0.8, OperatorMode::local);
    const DiscretizedOperator eps0 = assemble(f, a, psi, 1.0, 0.8, OperatorMode::nonlocal_at_epsilon, 0.0);
    EXPECT_EQ(loc.dense(), eps0.dense());
}

TEST(OperatorTest, RankOneTermIsSymmetricAndMatchesDenseSolver) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {1, 0.3, 0}, {2.5, 1.2, 0}});
    const std::vector<double> psi = local_equilibrium(f, 6.0, 2, Sign::plus, 151).phi;
    for (double eps : {-3.0, 0.7, 25.0}) {
        const DiscretizedOperator op = assemble(f, a, psi, 2.0, 1.1, OperatorMode::nonlocal_at_epsilon, eps);
        const std::vector<double> m = op.dense();
        double asym = 0.0;
        for (int i = 0; i < op.n; ++i) {
            for (int k = 0; k < op.n; ++k) asym = std::max(asym, std::abs(m[i * op.n + k] - m[k * op.n + i]));
        }
        EXPECT_EQ(asym, 0.0);
        const std::vector<double> ev = dense_eigenvalues(op);
        const std::vector<double> top = top_eigenvalues(op, 5);
        for (int k = 0; k < 5; ++k) EXPECT_NEAR(top[k], ev[k], 1e-9 * (1 + std::abs(ev[k])));
        int positive = 0;
        for (double v : ev) positive += v > 0;
        EXPECT_EQ(op.count_greater(0.0), positive);
    }
}

TEST(OperatorTest, SingularWeightMakesOperatorSingular) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::constant(1.0);
    const std::vector<double> psi = local_equilibrium(f, 5.0, 1, Sign::plus, 201).phi;
    const DiscretizedOperator op = assemble(f, a, psi, 5.0, 2.0, OperatorMode::local);
    const DiscretizedOperator sing = op.with_epsilon(op.singular_epsilon());
    const std::vector<double> ev = dense_eigenvalues(sing);
    double min_abs = 1e300;
    for (double v : ev) min_abs = std::min(min_abs, std::abs(v));
    EXPECT_LT(min_abs, 1e-8);
}

TEST(MorseIndexTest, ConstantDiffusionIndices) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::constant(1.0);
    const EquilibriumSet s = find_equilibria(a, odd_curves(), 5.0);
    ASSERT_EQ(s.points.size(), 4u);
    for (const auto& p : s.points) {
        const SpectralReport rep = spectral_report(f, a, source(f, p), 5.0, p.r, OperatorMode::nonlocal_paper, 501);
        EXPECT_FALSE(rep.indeterminate);
        EXPECT_EQ(rep.positive, p.j - 1);
        EXPECT_EQ(rep.positive, p.morse_index);
    }
}

TEST(MorseIndexTest, LocalOperatorAwayFromZero) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::constant(1.0);
    const EquilibriumSet s = find_equilibria(a, odd_curves(), 5.0);
    for (const auto& p : s.points) {
        const SpectralReport rep = spectral_report(f, a, source(f, p), 5.0, p.r, OperatorMode::local, 201);
        for (const auto& lv : rep.trace) EXPECT_GT(lv.min_abs, 0.1);
    }
}

TEST(EpsilonSweepTest, MonotoneBranchesAndZeroCrossing) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    const Diffusion a = Diffusion::constant(1.0);
    const EquilibriumSet s = find_equilibria(a, odd_curves(), 5.0);
    const BranchPoint& p = s.points[2];
    ASSERT_EQ(p.j, 2);
    double prev = 0.0;
    for (int n : {501, 1003}) {
        const EpsilonSweep es = epsilon_sweep(f, a, source(f, p)(n + 1), 5.0, p.r, p.j, p.dc);
        EXPECT_TRUE(es.monotone);
        EXPECT_LE(es.worst_decrease, 1e-8);
        EXPECT_TRUE(es.crossing_simple);
        EXPECT_LE(std::abs(es.mu_at_tilde), 5e-2);
        if (prev > 0.0) EXPECT_GE(prev / std::abs(es.mu_at_tilde), 3.0);
        prev = std::abs(es.mu_at_tilde);
    }
}

} // namespace
} // namespace nlbif
