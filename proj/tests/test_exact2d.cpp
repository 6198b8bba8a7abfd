#include "oracles.hpp"

#include "hessprod/errors.hpp"
#include "hessprod/exact2d.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hessprod;

TEST(Entire, InitialData)
{
    const ProfileJet j = entire_profile()(0.0);
    EXPECT_EQ(j.value, 1.0);
    EXPECT_EQ(j.d1, 0.0);
    EXPECT_EQ(j.d2, 1.0);
}

TEST(Entire, InverseOfSimpsonReference)
{
    for (double s : {0.01, 0.3, 1.0, 4.0, 12.5}) {
        const double f = entire_profile()(s).value;
        EXPECT_NEAR(oracle::entire_H(f), std::sqrt(2.0) * s, 1e-9 * std::max(1.0, s)) << "s=" << s;
    }
}

TEST(Entire, OdeResidualAndDerivatives)
{
    const EntireProfile& f = entire_profile();
    for (double s = -20.0; s <= 20.0; s += 0.37) {
        const ProfileJet j = f(s);
        EXPECT_NEAR(j.value * j.d2, 1.0, 1e-12);
        // f' by differences of the value
        const double fd = (f(s + 1e-6).value - f(s - 1e-6).value) / 2e-6;
        EXPECT_NEAR(j.d1, fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Entire, ProductSolution)
{
    const PointSolution u = entire_solution(0.7, -1.3);
    const ProfileJet a = entire_profile()(0.7), b = entire_profile()(-1.3);
    EXPECT_DOUBLE_EQ(u.u, a.value * b.value);
    EXPECT_DOUBLE_EQ(u.hessian.h12, a.d1 * b.d1);
    EXPECT_NEAR(u.hessian.product(), 1.0, 1e-14);
}

TEST(Box, ClosedFormErfOracle)
{
    const BoxProfile& g = box_profile();
    EXPECT_NEAR(g.lambda0(), std::sqrt(std::numbers::pi / 2.0), 1e-12);
    for (double x : {0.0, 0.1, -0.45, 0.8, 0.99, -0.9999}) {
        EXPECT_NEAR(g(x).value, oracle::box_g(x), 1e-12) << "x=" << x;
    }
}

TEST(Box, EndpointsAndSign)
{
    const BoxProfile& g = box_profile();
    EXPECT_EQ(g(1.0).value, 0.0);
    EXPECT_EQ(g(-1.0).value, 0.0);
    EXPECT_LT(g(0.3).value, 0.0);
    EXPECT_THROW(g(1.01), DomainError);
    const PointSolution v = box_solution(0.2, -0.6);
    EXPECT_LT(v.u, 0.0);
    EXPECT_GT(v.hessian.h11, 0.0);
    EXPECT_NEAR(v.hessian.product(), 1.0, 1e-12);
    EXPECT_THROW(box_solution(0.0, 1.5), DomainError);
}

TEST(Barrier, HessianMatchesDifferences)
{
    const double lam = 0.3, e = 1e-5;
    for (auto [x1, x2] : {std::pair{0.05, 0.1}, std::pair{0.2, -0.45}, std::pair{0.11, 0.0}}) {
        const PointSolution s = strict_convexity_barrier(lam, x1, x2);
        auto g = [&](double a, double b) { return strict_convexity_barrier(lam, a, b).u; };
        const double g11 = (g(x1 + e, x2) - 2.0 * s.u + g(x1 - e, x2)) / (e * e);
        const double g22 = (g(x1, x2 + e) - 2.0 * s.u + g(x1, x2 - e)) / (e * e);
        const double g12 = (g(x1 + e, x2 + e) - g(x1 + e, x2 - e) - g(x1 - e, x2 + e) + g(x1 - e, x2 - e)) / (4 * e * e);
        EXPECT_NEAR(s.hessian.h11, g11, 1e-4 * std::max(1.0, std::abs(g11)));
        EXPECT_NEAR(s.hessian.h22, g22, 1e-4);
        EXPECT_NEAR(s.hessian.h12, g12, 1e-4);
        EXPECT_GE(s.hessian.h11, 0.0);
    }
    EXPECT_THROW(strict_convexity_barrier(0.1, 0.3, 0.0), DomainError);
    EXPECT_THROW(strict_convexity_barrier(0.1, 0.1, 0.6), DomainError);
}

TEST(Pogorelov, MonitorOnQuadratic)
{
    const ScalarField2D u = sample(Grid2D::square(-1.0, 1.0, 41), [](double x, double y) { return x * x + 0.25 * y * y; });
    const PogorelovReport r = pogorelov_monitor(u, 0.01, 1.0);
    const std::size_t c = u.grid().index(20, 20);
    EXPECT_EQ(r.inside[c], 1);
    EXPECT_NEAR(r.eta[c], 1.0, 1e-12);
    // log u11 = log 2 at the centre, where u1 = 0
    EXPECT_NEAR(r.M[c], std::log(2.0), 1e-9);
    EXPECT_GE(r.max_M, r.M[c]);
}

TEST(Pogorelov, EntireProductStableUnderRefinement)
{
    auto sup = [](std::size_t n) {
        const ScalarField2D u = sample(Grid2D::square(-1.0, 1.0, n), [](double x, double y) { return entire_solution(x, y).u; });
        return pogorelov_monitor(u).sup_eta2_u11sq;
    };
    const double coarse = sup(65), fine = sup(129);
    EXPECT_TRUE(std::isfinite(fine));
    EXPECT_LT(std::abs(coarse - fine), 0.05 * fine) << coarse << " " << fine;
}
