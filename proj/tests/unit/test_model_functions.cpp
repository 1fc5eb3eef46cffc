#include <cmath>

#include <gtest/gtest.h>

#include "nlbif/errors.hpp"
#include "nlbif/model_functions.hpp"

namespace nlbif {
namespace {

TEST(NonlinearityTest, OddCubicPassesWithUnitZeros) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    EXPECT_NEAR(f.z_plus(), 1.0, 1e-12);
    EXPECT_NEAR(f.z_minus(), -1.0, 1e-12);
    EXPECT_TRUE(f.is_odd());
    const ValidationReport rep = validate_nonlinearity(f.functions());
    EXPECT_TRUE(rep.passed());
}

TEST(NonlinearityTest, SplitCubicHasAsymmetricZeros) {
    const Nonlinearity f = Nonlinearity::split_cubic(1.0, 0.25);
    EXPECT_NEAR(f.z_plus(), 1.0, 1e-12);
    EXPECT_NEAR(f.z_minus(), -2.0, 1e-12);
    EXPECT_FALSE(f.is_odd());
    EXPECT_NEAR(f.heteroclinic_level(Sign::minus), 2.0 - 0.25 * 4.0, 1e-12);
}

TEST(NonlinearityTest, WrongCurvatureSignIsRejected) {
    NonlinearityFunctions fns;
    fns.f = [](double u) { return u + u * u * u; };
    fns.df = [](double u) { return 1.0 + 3.0 * u * u; };
    fns.ddf = [](double u) { return 6.0 * u; };
    const ValidationReport rep = validate_nonlinearity(fns);
    EXPECT_FALSE(rep.passed());
    const ConditionCheck* c = rep.find("f''(u)u<0");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->passed);
    EXPECT_THROW(Nonlinearity::from_functions(fns, "bad", true), ValidationError);
}

TEST(NonlinearityTest, PrimitiveMatchesPolynomial) {
    const Nonlinearity f = Nonlinearity::odd_cubic();
    for (double u : {-0.9, -0.3, 0.0, 0.4, 1.0}) EXPECT_NEAR(f.F(u), u * u / 2 - u * u * u * u / 4, 1e-14);
    EXPECT_NEAR(f.heteroclinic_level(Sign::plus), 0.25, 1e-14);
}

TEST(NonlinearityTest, QuadraturePrimitiveWhenOmitted) {
    NonlinearityFunctions fns;
    fns.f = [](double u) { return u - u * u * u; };
    fns.df = [](double u) { return 1.0 - 3.0 * u * u; };
    fns.ddf = [](double u) { return -6.0 * u; };
    const Nonlinearity f = Nonlinearity::from_functions(fns, "cubic", true);
    EXPECT_NEAR(f.F(0.7), 0.49 / 2 - 0.2401 / 4, 1e-12);
}

TEST(DiffusionTest, ConstantPrimitiveIsLinear) {
    const Diffusion a = Diffusion::constant(1.0);
    EXPECT_DOUBLE_EQ(a.A(3.5), 3.5);
    EXPECT_DOUBLE_EQ(a.da(2.0), 0.0);
    EXPECT_DOUBLE_EQ(a.m(), 1.0);
}

TEST(DiffusionTest, FlatKnotsGiveConstant) {
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {10, 1, 0}}, 10.0);
    for (double r : {0.0, 2.5, 7.0, 10.0}) EXPECT_NEAR(a.a(r), 1.0, 1e-15);
}

TEST(DiffusionTest, DipKnotsHaveMinimumAtMiddleKnot) {
    const Diffusion a = Diffusion::from_knots({{0, 1, 0}, {2, 0.5, 0}, {4, 1, 0}}, 10.0);
    EXPECT_NEAR(a.a(2.0), 0.5, 1e-15);
    EXPECT_NEAR(a.m(), 0.5, 1e-9);
    EXPECT_NEAR(a.M(), 1.0, 1e-9);
    EXPECT_LT(a.da(1.0), 0.0);
    EXPECT_GT(a.da(3.0), 0.0);
    EXPECT_FALSE(a.is_nondecreasing());
    // Primitive against a fine trapezoid sum.
    double acc = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) acc += 0.5 * (a.a(5.0 * i / n) + a.a(5.0 * (i + 1) / n)) * 5.0 / n;
    EXPECT_NEAR(a.A(5.0), acc, 1e-7);
}

TEST(DiffusionTest, SingleKnotExtendsConstant) {
    const Diffusion a = Diffusion::from_knots({{0, 2, 0}}, 50.0);
    EXPECT_DOUBLE_EQ(a.a(0.0), 2.0);
    EXPECT_DOUBLE_EQ(a.a(40.0), 2.0);
    EXPECT_NEAR(a.A(3.0), 6.0, 1e-14);
}

TEST(DiffusionTest, InvalidKnotsThrow) {
    EXPECT_THROW(Diffusion::from_knots({{0, 1, 0}, {0, 2, 0}}), ValidationError);
    EXPECT_THROW(Diffusion::from_knots({{0, -1, 0}}), ValidationError);
    EXPECT_THROW(Diffusion::constant(0.0), ValidationError);
}

TEST(DiffusionTest, BumpDerivativeMatchesDifference) {
    const Diffusion a = Diffusion::bump(1.0, 0.5, 2.0, 1.0);
    const double h = 1e-6;
    for (double r : {0.2, 1.0, 1.7}) EXPECT_NEAR(a.da(r), (a.a(r + h) - a.a(r - h)) / (2 * h), 1e-8);
}

} // namespace
} // namespace nlbif
