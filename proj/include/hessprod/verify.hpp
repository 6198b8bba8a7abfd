#pragma once

// Checks tying computed objects back to the equation's identities.

#include "hessprod/exact2d.hpp"
#include "hessprod/grid.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hessprod {

inline constexpr std::uint64_t default_probe_seed = 0x5EED;

enum class Polarity { at_most, at_least };

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    Polarity polarity = Polarity::at_most;
    std::uint64_t seed = default_probe_seed;
    std::string note;
};

CheckResult make_check(std::string name, double measured, double threshold, Polarity polarity, std::string note,
                       std::uint64_t seed = default_probe_seed);

/// Analytic solution with value, gradient and Hessian at a point.
using AnalyticSolution = std::function<PointSolution(double, double)>;

/// D11 u * D22 u - 1; boundary nodes flagged as extrapolated.
ScalarField2D residual_product(const ScalarField2D& u);

/// Reproducible points: n points uniform in the disk of radius r about the
/// origin, from a 64-bit Mersenne twister with explicit bit-to-double mapping.
std::vector<Vec2> probe_points(std::size_t n, double radius, std::uint64_t seed = default_probe_seed);

struct LinearizedProbe {
    double diff_once_1 = 0.0; // L(u1)
    double diff_once_2 = 0.0; // L(u2)
    double diff_twice_lhs = 0.0;
    double diff_twice_rhs = 0.0;
};

/// L(v) = v11 / u11 + v22 / u22 for v = u1, u2, u11, with third and fourth
/// derivatives from centered differences of the analytic Hessian with step h3.
LinearizedProbe linearized_probe(const AnalyticSolution& u, Vec2 x, double h3 = 1e-4);

/// max |L(u1)|, |L(u2)| and the (DiffTwice) mismatch over the points.
std::vector<CheckResult> check_linearized_identities(const AnalyticSolution& u, const std::vector<Vec2>& points,
                                                     double h3 = 1e-4, double once_tol = 1e-5,
                                                     double twice_tol = 1e-5,
                                                     std::uint64_t seed = default_probe_seed);

/// Hessian product of u(lambda x1, x2 / lambda) via the chain rule.
CheckResult check_scaling_invariance(const AnalyticSolution& u, double lambda, const std::vector<Vec2>& points,
                                     std::uint64_t seed = default_probe_seed);

/// max(u - v) over all nodes against tol.
CheckResult comparison_probe(const ScalarField2D& u, const ScalarField2D& v, double tol = 1e-9);

/// max |(v - u) - shift| over all nodes against tol.
CheckResult shift_probe(const ScalarField2D& u, const ScalarField2D& v, double shift, double tol = 1e-9);

/// Hessian product of the barrier on an n x n cell-centered sample of
/// (0, 1/4) x (-1/2, 1/2). measured = max(sup - 6 lambda, -inf), the bound violation.
CheckResult barrier_bound_check(double lambda, std::size_t n = 1000);

/// Suites runnable from the command line.
std::vector<std::string> suite_names();
/// Throws ConfigError for an unknown selector. "default" runs every suite.
std::vector<CheckResult> run_suite(const std::string& selector, std::uint64_t seed = default_probe_seed);

} // namespace hessprod
