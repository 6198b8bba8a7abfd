#include "hessprod/errors.hpp"
#include "hessprod/grid.hpp"
#include "hessprod/kernels.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <vector>

using namespace hessprod;

namespace {

std::vector<double> wavy(const Grid2D& g)
{
    std::vector<double> u(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.x1(g.col(k)), y = g.x2(g.row(k));
        u[k] = std::sin(3.0 * x) * std::cos(2.0 * y) + x * x * y;
    }
    return u;
}

} // namespace

TEST(Grid, IndexingIsRowMajorWithX1Fastest)
{
    const Grid2D g(0.0, 1.0, -1.0, 1.0, 5, 3);
    EXPECT_EQ(g.index(2, 1), 7u);
    EXPECT_EQ(g.col(7), 2u);
    EXPECT_EQ(g.row(7), 1u);
    EXPECT_DOUBLE_EQ(g.h1(), 0.25);
    EXPECT_DOUBLE_EQ(g.x2(2), 1.0);
    EXPECT_TRUE(g.is_boundary(0, 1));
    EXPECT_FALSE(g.is_boundary(2, 1));
}

TEST(Grid, RejectsDegenerateGrids)
{
    EXPECT_THROW(Grid2D(0.0, 1.0, 0.0, 1.0, 2, 5), InvalidGrid);
    EXPECT_THROW(Grid2D(1.0, 0.0, 0.0, 1.0, 5, 5), InvalidGrid);
}

TEST(Grid, SampleRejectsNonFinite)
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 5);
    EXPECT_THROW(sample(g, [](double x, double) { return 1.0 / x; }), SamplingError);
}

TEST(Kernels, SecondDifferencesExactOnQuadratics)
{
    const Grid2D g(-1.0, 2.0, -0.5, 1.5, 13, 9);
    const ScalarField2D u = sample(g, [](double x, double y) { return 1.5 * x * x + 0.25 * x * y - y * y + x; });
    const ScalarField2D u11 = d2_axis(u, 1), u22 = d2_axis(u, 2), u12 = d2_mixed(u);
    EXPECT_TRUE(u11.boundary_extrapolated());
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_NEAR(u11[k], 3.0, 1e-11);
        EXPECT_NEAR(u22[k], -2.0, 1e-11);
        EXPECT_NEAR(u12[k], 0.25, 1e-11);
    }
}

TEST(Kernels, SecondDifferenceIsSecondOrder)
{
    auto err = [](std::size_t n) {
        const ScalarField2D u = sample(Grid2D::square(0.0, 1.0, n), [](double x, double) { return std::sin(x); });
        const ScalarField2D d = d2_axis(u, 1);
        double e = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (d.grid().is_boundary(k)) continue;
            e = std::max(e, std::abs(d[k] + std::sin(d.grid().x1(d.grid().col(k)))));
        }
        return e;
    };
    EXPECT_NEAR(err(33) / err(65), 4.0, 0.1);
}

TEST(Kernels, ExtrapolatedFieldsRefuseWholeGridNorms)
{
    const ScalarField2D u = sample(Grid2D::square(0.0, 1.0, 9), [](double x, double y) { return x * y; });
    EXPECT_THROW(norms(d2_axis(u, 1)), StateError);
    EXPECT_NO_THROW(norms(d2_axis(u, 1), Region::interior()));
}

TEST(Kernels, OpenMpMatchesSerialBitwise)
{
    namespace k = kernels;
    const Grid2D g(-1.0, 1.0, -2.0, 2.0, 131, 97);
    const std::vector<double> u = wavy(g);
    std::vector<double> a(g.size()), b(g.size());
    for (int axis : {1, 2}) {
        k::serial::d2_axis(g, u, axis, a);
        k::omp::d2_axis(g, u, axis, b);
        EXPECT_EQ(a, b);
        k::serial::d1_axis(g, u, axis, a);
        k::omp::d1_axis(g, u, axis, b);
        EXPECT_EQ(a, b);
    }
    k::serial::d2_mixed(g, u, a);
    k::omp::d2_mixed(g, u, b);
    EXPECT_EQ(a, b);

    FivePointMatrix m(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.is_boundary(i)) continue;
        m.center[i] = -4.0 - u[i] * u[i];
        m.west[i] = 1.0 + 0.1 * u[i];
        m.east[i] = m.south[i] = m.north[i] = 1.0;
    }
    k::serial::apply(m, u, a);
    k::omp::apply(m, u, b);
    EXPECT_EQ(a, b);

    std::vector<double> ya(u), yb(u);
    k::serial::axpby(0.3, a, -1.7, ya);
    k::omp::axpby(0.3, a, -1.7, yb);
    EXPECT_EQ(ya, yb);
    EXPECT_EQ(k::serial::sup_abs(u), k::omp::sup_abs(u));
}

TEST(Kernels, ReductionsIndependentOfThreadCount)
{
    namespace k = kernels;
    const Grid2D g = Grid2D::square(-1.0, 1.0, 301);
    const std::vector<double> u = wavy(g);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double one = k::omp::dot(u, u);
    omp_set_num_threads(4);
    const double four = k::omp::dot(u, u);
    omp_set_num_threads(saved);
    EXPECT_EQ(one, four);
    // Different association than the plain loop, so only close.
    EXPECT_NEAR(one, k::serial::dot(u, u), 1e-10 * one);
}

TEST(Kernels, LogResidualMatchesSerialAndFlagsWorstNode)
{
    namespace k = kernels;
    const Grid2D g = Grid2D::square(-1.0, 1.0, 41);
    std::vector<double> u(g.size()), phi(g.size()), rho(g.size()), rhs(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.x1(g.col(i)), y = g.x2(g.row(i));
        u[i] = 0.5 * (x * x + y * y);
        phi[i] = u[i] + 0.01;
        rho[i] = x * x + y * y > 0.5 ? 1.0 : 0.0;
    }
    std::vector<double> F1(g.size()), A1(g.size()), B1(g.size()), F2(g.size()), A2(g.size()), B2(g.size());
    const LogResidualInput in{u, phi, rho, rhs, 10.0};
    const PositivityProbe ps = k::serial::log_residual(g, in, {F1, A1, B1});
    const PositivityProbe po = k::omp::log_residual(g, in, {F2, A2, B2});
    EXPECT_EQ(F1, F2);
    EXPECT_EQ(ps.node, po.node);
    // A_i = 1 + 10 * 0.01 rho: F = 0 inside, 2 log 1.1 in the penalized ring.
    const std::size_t centre = g.index(20, 20);
    EXPECT_NEAR(F1[centre], 0.0, 1e-12);
    const std::size_t ring = g.index(3, 20);
    EXPECT_NEAR(F1[ring], 2.0 * std::log(1.1), 1e-12);
    EXPECT_NEAR(ps.min_arg, 1.0, 1e-12);
}
