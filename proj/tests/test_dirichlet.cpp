#include "hessprod/dirichlet.hpp"
#include "hessprod/errors.hpp"
#include "hessprod/exact2d.hpp"
#include "hessprod/sparse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace hessprod;

namespace {

// Dense Gaussian elimination with partial pivoting, the linear-solve oracle.
std::vector<double> dense_solve(const FivePointMatrix& a, std::vector<double> b)
{
    const std::size_t n = a.size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        m[k * n + k] = a.center[k];
        if (k >= 1 && a.west[k] != 0.0) m[k * n + k - 1] = a.west[k];
        if (k + 1 < n && a.east[k] != 0.0) m[k * n + k + 1] = a.east[k];
        if (k >= a.n1 && a.south[k] != 0.0) m[k * n + k - a.n1] = a.south[k];
        if (k + a.n1 < n && a.north[k] != 0.0) m[k * n + k + a.n1] = a.north[k];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r * n + c]) > std::abs(m[p * n + c])) p = r;
        for (std::size_t j = 0; j < n; ++j) std::swap(m[c * n + j], m[p * n + j]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r * n + c] / m[c * n + c];
            for (std::size_t j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t j = c + 1; j < n; ++j) s -= m[c * n + j] * x[j];
        x[c] = s / m[c * n + c];
    }
    return x;
}

} // namespace

TEST(Sparse, BicgstabMatchesDenseSolve)
{
    const std::size_t n = 12;
    FivePointMatrix a(n, n);
    std::vector<double> b(n * n);
    for (std::size_t k = 0; k < a.size(); ++k) {
        b[k] = std::sin(0.3 * k);
        const std::size_t i = k % n, j = k / n;
        if (i == 0 || j == 0 || i + 1 == n || j + 1 == n) continue;
        a.center[k] = -4.0 - 0.1 * i;
        a.west[k] = 1.0 + 0.05 * j;
        a.east[k] = 0.9;
        a.south[k] = a.north[k] = 1.0;
    }
    std::vector<double> x(a.size(), 0.0);
    const LinearSolveResult r = bicgstab(a, b, x);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.relative_residual, 1e-12);
    const std::vector<double> ref = dense_solve(a, b);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(x[k], ref[k], 1e-10);
}

TEST(Continuation, ScheduleAndValidation)
{
    ContinuationConfig c;
    const auto t = c.t_schedule();
    ASSERT_EQ(t.size(), 11u);
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_EQ(t.back(), 1.0);
    c.epsilon = {0.1, 0.3};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.t_steps = 1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Continuation, ResidualVanishesOnExactQuadratic)
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 17);
    const PointFunction q = [](double x, double y) { return x * x + 0.25 * y * y; };
    const PenalizedProblem p = PenalizedProblem::rectangle(g, q);
    const ScalarField2D u = sample(g, q);
    const ResidualFields F = penalized_residual(u, p, 1.0, 1.0, ScalarField2D(g, 1.0));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(F.F[k], 0.0, 1e-12);
    const ScalarField2D flat(g, 0.0);
    EXPECT_THROW(penalized_residual(flat, p, 1.0, 1.0, ScalarField2D(g, 1.0)), PositivityError);
}

TEST(Continuation, SeedIsInsideTheCone)
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 21);
    const PenalizedProblem p = PenalizedProblem::rectangle(g, [](double x, double y) { return -x * x * y * y; });
    const GField s = build_g_field(p, 1.0);
    EXPECT_EQ(s.K0, 0.0);
    EXPECT_GE(s.C0, 1.0);
    const ResidualFields F = penalized_residual(s.seed, p, 1.0, 0.0, s.g);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(F.F[k], 0.0, 1e-12);
}

TEST(Rectangle, RecoversQuadraticExactly)
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 33);
    const PointFunction q = [](double x, double y) { return 0.5 * x * x + 3.0 * x * y + 0.5 * y * y; };
    const SolveResult r = solve_rectangle({-1, 1, -1, 1}, q, g);
    for (std::size_t k = 0; k < g.size(); ++k)
        EXPECT_NEAR(r.u[k], q(g.x1(g.col(k)), g.x2(g.row(k))), 1e-9);
    EXPECT_LE(r.report.final_residual, 1e-10);
    EXPECT_THROW(solve_rectangle({-1, 1, -1, 2}, q, g), ConfigError);
}

TEST(Rectangle, DiscreteComparisonPrinciple)
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 33);
    const SolveResult lo = solve_rectangle({-1, 1, -1, 1}, [](double, double) { return 0.0; }, g);
    const SolveResult hi = solve_rectangle({-1, 1, -1, 1}, [](double x, double) { return 0.1 * x * x; }, g);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LE(lo.u[k], hi.u[k] + 1e-12);
    EXPECT_GT(convexity_probe(lo.u), 0.0);
}

TEST(Penalized, DiskWithExactDataStaysExact)
{
    const DomainSpec d = DomainSpec::disk(1.0, Polynomial2({0, 0, 0, 0.5, 0, 0.5}), 0.15);
    const Grid2D g = domain_grid(d, 33, 33);
    const SolveResult r = continuation_solve(d, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.x1(g.col(k)), y = g.x2(g.row(k));
        EXPECT_NEAR(r.u[k], 0.5 * (x * x + y * y), 1e-9);
    }
    EXPECT_EQ(r.report.epsilons.size(), 5u);
}

TEST(Penalized, RectangleSpecRunsWithoutPenalty)
{
    const DomainSpec r = DomainSpec::rectangle({-1, 1, -1, 1}, Polynomial2({0, 0, 0, 0.5, 0, 0.5}));
    const SolveResult s = continuation_solve(r, domain_grid(r, 9, 9));
    EXPECT_EQ(s.report.epsilons.size(), 1u);
    EXPECT_THROW(continuation_solve(r, Grid2D::square(-1.0, 2.0, 9)), ConfigError);
}
