#pragma once

// Singular solution of u11 u22 u33 = 1 on R^3 of the form u = w(x1, x2) h(x3).
//
//  * h^2 h'' = 1 with h(0) = 1, h'(0) = 0: h(s) = G^{-1}(sqrt(2)|s|),
//    G(t) = int_1^t (x / (x - 1))^{1/2} dx, so h' = sign(s) sqrt(2 (h - 1) / h)
//    and h'' = 1 / h^2.
//  * w is 4/3-homogeneous, w(x1, x2) = |x2|^{4/3} g(x1 / x2) for |x1| <= |x2|,
//    extended by reflection over the diagonals. The profile solves
//        g g'' (t^2 g'' - 2/3 t g' + 4/9 g) = 1
//    and is the rescaling g = lambda0^{-2/3} g1(lambda0 t) of the even solution
//    g1 with g1(0) = 1, g1'(0) = 0, where lambda0 is the first zero of
//    h1(t) = t g1'(t) - 2/3 g1(t). Then g'(1) = 2/3 g(1), i.e. w1 = w2 on the
//    diagonal.

#include "hessprod/exact2d.hpp"
#include "hessprod/ode.hpp"
#include "hessprod/quadrature.hpp"

#include <array>
#include <vector>

namespace hessprod {

/// Parameter below which the rationalized root is used instead of the
/// closed form with its 1 / (3 t^2) prefactor.
inline constexpr double t_switch = 1e-3;

/// Left side minus one of x z (t^2 z - 2/3 t y + 4/9 x) - 1 = 0.
double profile_poly(double x, double y, double z, double t);

/// The positive root z of profile_poly for (x, y, t) with x >= 1, t >= 0,
/// i.e. g'' as a function of (g, g', t).
double second_derivative_branch(double x, double y, double t);

/// Closed form of the root, valid for t > 0.
double second_derivative_closed_form(double x, double y, double t);

/// d/dt of g'' along a solution, by implicit differentiation of profile_poly.
double third_derivative(double x, double y, double z, double t);

/// Integrates (g1, g1') on [0, T] with fixed RK4 step. Throws NumericalError
/// if the equation residual exceeds 1e-8 or g1 stops being >= 1 and
/// nondecreasing.
Trajectory solve_g1(double T = 100.0, double step = 1e-4);

/// h1 = t g1' - 2/3 g1 at node k.
double h1_at(const Trajectory& traj, std::size_t k);

struct Lambda0Search {
    double lambda0 = 0.0;
    double h1_at_zero = 0.0;
    Trajectory trajectory; // possibly extended
};

/// First zero of h1, refined to 1e-12 by bisection on the interpolated
/// trajectory. Extends T geometrically (x2) up to 1e4 when no sign change
/// is present.
Lambda0Search find_lambda0(Trajectory traj);

/// Sup over nodes in [0, upto] of the linearized-equation residual with
/// h1'' = t g1''' + 4/3 g1'' and g1''' from implicit differentiation.
double linearized_residual(const Trajectory& traj, double upto);

/// Same residual with h1'' from the 5-point second difference of the
/// tabulated h1 at spacing stride * step (h1 is even, so nodes left of 0 are
/// reflected). The error is O((stride * step)^4).
double linearized_residual_fd(const Trajectory& traj, double upto, std::size_t stride);

/// Tabulated g1 and the matched profile g.
class SingularProfile {
public:
    static SingularProfile build(double T = 100.0, double step = 1e-4);

    double lambda0() const noexcept { return lambda0_; }
    double h1_at_zero() const noexcept { return h1_at_zero_; }
    const Trajectory& trajectory() const noexcept { return traj_; }

    /// g1 and derivatives (third derivative included) at |t| <= T.
    Jet g1(double t) const;
    /// g = lambda0^{-2/3} g1(lambda0 t) for |t| <= T / lambda0.
    Jet g(double t) const;
    double g_max_t() const noexcept { return traj_.t_end() / lambda0_; }

private:
    Trajectory traj_;
    Profile1D g1_;
    double lambda0_ = 0.0;
    double h1_at_zero_ = 0.0;
};

/// ODE residual of g_lambda(t) = lambda^{-2/3} g1(lambda t) at t.
double rescaled_residual(const SingularProfile& p, double lambda, double t);

/// sup over `samples` uniformly spaced t in [1, t_max] of |g(t) - t^{4/3} g(1/t)|.
double gluing_defect(const SingularProfile& p, double t_max = 100.0, std::size_t samples = 10000);

struct FarFieldPoint {
    double t = 0.0;
    double a = 0.0; // g(t) / t^{4/3}
    double b = 0.0; // from t g' - 4/3 g = -2 b t^{-2/3}
};

/// Large-t behaviour of g, integrated in tau = log t with p = t^{-2/3} g, which
/// turns the profile equation into the autonomous
///     p'' = 2/9 p + sqrt(p'^2 / 9 + 1 / p)
/// started at t = 1. `ts` must be powers of ten >= 10.
std::vector<FarFieldPoint> far_field(const SingularProfile& p, const std::vector<double>& ts,
                                     std::size_t steps_per_decade = 4000);

class HProfile {
public:
    explicit HProfile(const Quadrature& q = {}, double max_offset = 1e9);

    /// (h, h', h'') at s.
    ProfileJet operator()(double s) const;
    double G(double t) const { return table_.value(t - 1.0); }

private:
    CumulativeIntegral table_;
};

const HProfile& h_profile();

struct PlanarSolution {
    PointSolution w;
    bool classical = true; // false on the diagonals |x1| = |x2| and at the origin
};

PlanarSolution w_eval(const SingularProfile& p, double x1, double x2);

struct SpaceSolution {
    double u = 0.0;
    double u11 = 0.0, u22 = 0.0, u33 = 0.0;
    bool classical = true;
    double product() const noexcept { return u11 * u22 * u33; }
};

/// u = w(x1, x2) h(x3); the Hessian diagonal is NaN where w is not classical.
SpaceSolution u3d(const SingularProfile& p, const HProfile& h, double x1, double x2, double x3);

/// 25 x 20 x 21 lattice on [-2, 2]^2 x [-3, 3]; the x1 and x2 offsets are
/// chosen so that no point lies on a diagonal |x1| = |x2|.
std::vector<std::array<double, 3>> singular_lattice();

} // namespace hessprod
