#pragma once

// Explicit planar solutions of u11 u22 = 1 and the strict-convexity barrier.
//
// Entire solution: u = f(x1) f(x2) with f f'' = 1, f(0) = 1, f'(0) = 0, given
// by f(s) = H^{-1}(sqrt(2)|s|), H(t) = int_1^t (log x)^{-1/2} dx. Since
// H'(f) = (log f)^{-1/2}, the derivatives are f' = sign(s) sqrt(2 log f) and
// f'' = 1/f.
//
// Box solution on [-1, 1]^2 with zero boundary values: g g'' = -1, g(+-1) = 0,
// g = G^{-1}(lambda0 |x|) / lambda0 with G(t) = int_{-1}^t (log x^{-2})^{-1/2} dx
// and lambda0 = G(0) = sqrt(pi / 2). The returned solution is the
// coordinate-convex one, v = -g(x1) g(x2).

#include "hessprod/grid.hpp"
#include "hessprod/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hessprod {

struct Vec2 {
    double x1 = 0.0, x2 = 0.0;
};

struct Hessian2 {
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;
    double product() const noexcept { return h11 * h22; }
};

/// Value with first and second derivatives of a one-variable profile.
struct ProfileJet {
    double value = 0.0, d1 = 0.0, d2 = 0.0;
};

struct PointSolution {
    double u = 0.0;
    Vec2 gradient;
    Hessian2 hessian;
};

class EntireProfile {
public:
    explicit EntireProfile(const Quadrature& q = {}, double max_offset = 1e13);

    /// (f, f', f'') at s.
    ProfileJet operator()(double s) const;
    /// H(t) for t >= 1.
    double H(double t) const { return table_.value(t - 1.0); }
    double max_abs_s() const noexcept;

private:
    CumulativeIntegral table_;
};

class BoxProfile {
public:
    explicit BoxProfile(const Quadrature& q = {});

    /// (g, g', g'') at x in [-1, 1]; g'' is -infinity at the endpoints.
    ProfileJet operator()(double x) const;
    double lambda0() const noexcept { return lambda0_; }
    /// G_box(t) for t in [-1, 0].
    double G(double t) const { return table_.value(t + 1.0); }

private:
    CumulativeIntegral table_;
    double lambda0_;
};

/// Shared immutable profiles with default quadrature, built on first use.
const EntireProfile& entire_profile();
const BoxProfile& box_profile();

PointSolution entire_solution(const EntireProfile& f, double x1, double x2);
inline PointSolution entire_solution(double x1, double x2) { return entire_solution(entire_profile(), x1, x2); }

/// Coordinate-convex box solution v = -g(x1) g(x2); DomainError outside [-1, 1]^2.
PointSolution box_solution(const BoxProfile& g, double x1, double x2);
inline PointSolution box_solution(double x1, double x2) { return box_solution(box_profile(), x1, x2); }

/// g_lambda(x) = lambda x1 sqrt(log(1/x1)) (4 x2^2 - 1) + x1 / lambda on
/// 0 < x1 < 1/4, |x2| <= 1/2 with analytic gradient and Hessian.
PointSolution strict_convexity_barrier(double lambda, double x1, double x2);

struct PogorelovReport {
    ScalarField2D eta;                 // NaN outside the monitored component
    ScalarField2D M;                   // NaN outside the monitored component
    std::vector<std::uint8_t> inside;  // component membership per node
    double A = 0.0;
    double sigma = 0.0;
    double sup_eta2_u11sq = 0.0;
    double max_M = 0.0;
    std::size_t argmax_M = 0;
};

/// Cutoff eta = 1 - A (x1^2 + u2^2) / 2 and M = log u11 + sigma u1^2 / 2 + log eta
/// on the component of {eta > 0} containing the central node, with x1 and
/// u2 measured relative to the center. Without A, the cutoff is chosen so
/// that eta < 0 on the outermost interior ring. Throws NumericalError when
/// u11 <= 0 inside the component.
PogorelovReport pogorelov_monitor(const ScalarField2D& u, double sigma = 0.01, std::optional<double> A = {});

} // namespace hessprod
