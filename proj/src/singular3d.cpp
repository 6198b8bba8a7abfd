#include "hessprod/singular3d.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hessprod {

namespace {

constexpr double two_thirds = 2.0 / 3.0;
constexpr double four_ninths = 4.0 / 9.0;

// Root of t^2 z^2 + B z - 1/x = 0 with B = 4/9 x - 2/3 t y, in the form that
// avoids cancellation when B > 0. Reduces to 9 / (4 x^2) at t = 0.
double rationalized_root(double x, double y, double t)
{
    const double B = four_ninths * x - two_thirds * t * y;
    const double c = 1.0 / x;
    if (!(B > 0.0)) {
        throw NumericalError("rationalized root needs 4/9 x - 2/3 t y > 0");
    }
    return 2.0 * c / (B + std::sqrt(B * B + 4.0 * t * t * c));
}

double root_unchecked(double x, double y, double t)
{
    if (t <= t_switch) {
        return rationalized_root(x, y, t);
    }
    return second_derivative_closed_form(x, y, t);
}

double profile_rhs_residual(double g, double gp, double gpp, double t) { return profile_poly(g, gp, gpp, t); }

Profile1D tabulate(const Trajectory& traj)
{
    const std::size_t n = traj.nodes();
    std::vector<double> v(n), d1(n), d2(n), d3(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto s = traj.state(k);
        const auto r = traj.rate(k);
        v[k] = s[0];
        d1[k] = s[1];
        d2[k] = r[1];
        d3[k] = third_derivative(s[0], s[1], r[1], traj.t(k));
    }
    return Profile1D(traj.t0, traj.step, std::move(v), std::move(d1), std::move(d2), std::move(d3));
}

// Even extension of a profile tabulated on t >= 0.
Jet even_eval(const Profile1D& p, double t)
{
    Jet j = p.eval(std::abs(t));
    if (t < 0.0) {
        j.d1 = -j.d1;
        j.d3 = -j.d3;
    }
    return j;
}

double linearized_lhs(double t, double g, double gpp, double h, double hp, double hpp)
{
    const double P2 = (g * gpp) * (g * gpp);
    return (g + t * t * P2) * hpp - two_thirds * P2 * t * hp + (gpp + four_ninths * P2) * h;
}

} // namespace

double profile_poly(double x, double y, double z, double t)
{
    return x * z * (t * t * z - two_thirds * t * y + four_ninths * x) - 1.0;
}

double second_derivative_closed_form(double x, double y, double t)
{
    if (!(t > 0.0)) {
        throw DomainError("closed-form root needs t > 0");
    }
    const double q = t * y - two_thirds * x;
    const double disc = 9.0 * t * t / x + q * q;
    if (!(disc > 0.0) || !std::isfinite(disc)) {
        throw NumericalError("discriminant underflow in the profile root");
    }
    return (q + std::sqrt(disc)) / (3.0 * t * t);
}

double second_derivative_branch(double x, double y, double t)
{
    if (!(x >= 1.0)) {
        std::ostringstream msg;
        msg << "profile root needs x >= 1, got " << x;
        throw DomainError(msg.str());
    }
    if (!(t >= 0.0)) {
        throw DomainError("profile root needs t >= 0");
    }
    return root_unchecked(x, y, t);
}

double third_derivative(double x, double y, double z, double t)
{
    const double Q = t * t * z - two_thirds * t * y + four_ninths * x;
    const double Px = z * Q + four_ninths * x * z;
    const double Py = -two_thirds * t * x * z;
    const double Pz = x * Q + x * z * t * t;
    const double Pt = x * z * (2.0 * t * z - two_thirds * y);
    return -(Pt + Px * y + Py * z) / Pz;
}

Trajectory solve_g1(double T, double step)
{
    if (!(T > 0.0)) {
        throw ConfigError("solve_g1 needs T > 0");
    }
    const OdeRhs rhs = [](double t, std::span<const double> y, std::span<double> dydt) {
        dydt[0] = y[1];
        dydt[1] = root_unchecked(y[0], y[1], t);
    };
    const NodeCheck check = [](std::size_t k, double t, std::span<const double> y, std::span<const double> r) {
        const double res = profile_rhs_residual(y[0], y[1], r[1], t);
        if (!(std::abs(res) <= 1e-8) || !(y[0] >= 1.0) || !(y[1] >= 0.0)) {
            std::ostringstream msg;
            msg << "profile integration failed at node " << k << " (t = " << t << "): g = " << y[0]
                << ", g' = " << y[1] << ", residual = " << res;
            throw NumericalError(msg.str());
        }
    };
    const double y0[2] = {1.0, 0.0};
    return rk_integrate(rhs, y0, T, step, 0.0, check);
}

double h1_at(const Trajectory& traj, std::size_t k)
{
    const auto s = traj.state(k);
    return traj.t(k) * s[1] - two_thirds * s[0];
}

Lambda0Search find_lambda0(Trajectory traj)
{
    constexpr double cap = 1e4;
    while (true) {
        std::size_t hit = 0;
        for (std::size_t k = 1; k < traj.nodes(); ++k) {
            if (h1_at(traj, k) >= 0.0) {
                hit = k;
                break;
            }
        }
        if (hit != 0) {
            const Profile1D prof = tabulate(traj);
            auto h1 = [&prof](double t) {
                const Jet j = prof.eval(t);
                return t * j.d1 - two_thirds * j.v;
            };
            Lambda0Search out;
            out.lambda0 = bisect_root(h1, traj.t(hit - 1), traj.t(hit), 1e-12);
            out.h1_at_zero = h1_at(traj, 0);
            out.trajectory = std::move(traj);
            return out;
        }
        const double T = traj.t_end();
        if (T >= cap) {
            throw NumericalError("no zero of h1 = t g1' - 2/3 g1 found up to T = 1e4");
        }
        traj = solve_g1(std::min(2.0 * T, cap), traj.step);
    }
}

double linearized_residual(const Trajectory& traj, double upto)
{
    double sup = 0.0;
    for (std::size_t k = 0; k < traj.nodes() && traj.t(k) <= upto; ++k) {
        const double t = traj.t(k);
        const double g = traj.state(k)[0];
        const double gp = traj.state(k)[1];
        const double gpp = traj.rate(k)[1];
        const double gppp = third_derivative(g, gp, gpp, t);
        const double h = t * gp - two_thirds * g;
        const double hp = t * gpp + gp / 3.0;
        const double hpp = t * gppp + 4.0 / 3.0 * gpp;
        sup = std::max(sup, std::abs(linearized_lhs(t, g, gpp, h, hp, hpp)));
    }
    return sup;
}

double linearized_residual_fd(const Trajectory& traj, double upto, std::size_t stride)
{
    if (stride == 0) {
        throw ConfigError("stride must be positive");
    }
    const double H = static_cast<double>(stride) * traj.step;
    auto h_at = [&](std::ptrdiff_t k) {
        return h1_at(traj, static_cast<std::size_t>(k < 0 ? -k : k));
    };
    const auto s = static_cast<std::ptrdiff_t>(stride);
    const auto n = static_cast<std::ptrdiff_t>(traj.nodes());
    double sup = 0.0;
    for (std::ptrdiff_t k = 0; k + 2 * s < n && traj.t(static_cast<std::size_t>(k)) <= upto; k += s) {
        const auto kk = static_cast<std::size_t>(k);
        const double t = traj.t(kk);
        const double g = traj.state(kk)[0];
        const double gp = traj.state(kk)[1];
        const double gpp = traj.rate(kk)[1];
        const double h = h_at(k);
        const double hp = t * gpp + gp / 3.0;
        const double hpp = (-h_at(k - 2 * s) + 16.0 * h_at(k - s) - 30.0 * h + 16.0 * h_at(k + s) - h_at(k + 2 * s))
                         / (12.0 * H * H);
        sup = std::max(sup, std::abs(linearized_lhs(t, g, gpp, h, hp, hpp)));
    }
    return sup;
}

SingularProfile SingularProfile::build(double T, double step)
{
    Lambda0Search search = find_lambda0(solve_g1(T, step));
    SingularProfile p;
    p.traj_ = std::move(search.trajectory);
    p.g1_ = tabulate(p.traj_);
    p.lambda0_ = search.lambda0;
    p.h1_at_zero_ = search.h1_at_zero;
    return p;
}

Jet SingularProfile::g1(double t) const
{
    if (g1_.empty()) {
        throw StateError("singular profile not constructed");
    }
    return even_eval(g1_, t);
}

Jet SingularProfile::g(double t) const
{
    const double l = lambda0_;
    const Jet j = g1(l * t);
    const double s = std::cbrt(l); // lambda^{1/3}
    return {j.v / (s * s), j.d1 * s, j.d2 * s * s * s * s, j.d3 * s * s * s * s * s * s * s};
}

double rescaled_residual(const SingularProfile& p, double lambda, double t)
{
    const Jet j = p.g1(lambda * t);
    const double s = std::cbrt(lambda);
    const double g = j.v / (s * s);
    const double gp = j.d1 * s;
    const double gpp = j.d2 * s * s * s * s;
    return profile_poly(g, gp, gpp, t);
}

double gluing_defect(const SingularProfile& p, double t_max, std::size_t samples)
{
    double sup = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = 1.0 + (t_max - 1.0) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double mirrored = std::pow(t, 4.0 / 3.0) * p.g(1.0 / t).v;
        sup = std::max(sup, std::abs(p.g(t).v - mirrored));
    }
    return sup;
}

std::vector<FarFieldPoint> far_field(const SingularProfile& p, const std::vector<double>& ts,
                                     std::size_t steps_per_decade)
{
    std::vector<std::size_t> decades;
    for (double t : ts) {
        const double m = std::round(std::log10(t));
        if (!(m >= 1.0) || std::abs(std::pow(10.0, m) - t) > 1e-9 * t) {
            throw ConfigError("far-field sample points must be powers of ten >= 10");
        }
        decades.push_back(static_cast<std::size_t>(m));
    }
    const std::size_t last = *std::max_element(decades.begin(), decades.end());

    const Jet at_one = p.g(1.0);
    const double y0[2] = {at_one.v, at_one.d1 - two_thirds * at_one.v};
    const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dydt) {
        dydt[0] = y[1];
        dydt[1] = 2.0 / 9.0 * y[0] + std::sqrt(y[1] * y[1] / 9.0 + 1.0 / y[0]);
    };
    const double step = std::numbers::ln10 / static_cast<double>(steps_per_decade);
    const Trajectory tr = rk_integrate(rhs, y0, static_cast<double>(last) * std::numbers::ln10, step);

    std::vector<FarFieldPoint> out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::size_t k = decades[i] * steps_per_decade;
        const double t = ts[i];
        const double pv = tr.state(k)[0];
        const double pd = tr.state(k)[1];
        const double t23 = std::cbrt(t * t);
        out.push_back({t, pv / t23, -0.5 * t23 * t23 * (pd - two_thirds * pv)});
    }
    return out;
}

HProfile::HProfile(const Quadrature& q, double max_offset)
    : table_([](double d) { return std::sqrt((1.0 + d) / d); }, max_offset, q)
{
}

ProfileJet HProfile::operator()(double s) const
{
    if (!std::isfinite(s)) {
        throw DomainError("h profile evaluated at a non-finite point");
    }
    if (s == 0.0) {
        return {1.0, 0.0, 1.0};
    }
    const double d = table_.inverse(std::numbers::sqrt2 * std::abs(s));
    const double h = 1.0 + d;
    return {h, std::copysign(std::sqrt(2.0 * d / h), s), 1.0 / (h * h)};
}

const HProfile& h_profile()
{
    static const HProfile profile;
    return profile;
}

PlanarSolution w_eval(const SingularProfile& p, double x1, double x2)
{
    const double a1 = std::abs(x1), a2 = std::abs(x2);
    const double major = std::max(a1, a2);
    PlanarSolution out;
    if (major == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.w.u = 0.0;
        out.w.gradient = {0.0, 0.0};
        out.w.hessian = {nan, nan, nan};
        out.classical = false;
        return out;
    }
    const double minor = std::min(a1, a2);
    const double t = minor / major;
    const Jet g = p.g(t);
    const double m13 = std::cbrt(major);
    const double m43 = major * m13;
    const double mm23 = 1.0 / (m13 * m13);

    const double w_minor = m13 * g.d1;
    const double w_major = m13 * (4.0 / 3.0 * g.v - t * g.d1);
    const double w_mm = mm23 * g.d2;
    const double w_MM = mm23 * (t * t * g.d2 - two_thirds * t * g.d1 + four_ninths * g.v);
    const double w_mM = mm23 * (g.d1 / 3.0 - t * g.d2);

    const double s1 = std::copysign(1.0, x1);
    const double s2 = std::copysign(1.0, x2);
    out.w.u = m43 * g.v;
    if (a2 >= a1) {
        out.w.gradient = {s1 * w_minor, s2 * w_major};
        out.w.hessian = {w_mm, s1 * s2 * w_mM, w_MM};
    } else {
        out.w.gradient = {s1 * w_major, s2 * w_minor};
        out.w.hessian = {w_MM, s1 * s2 * w_mM, w_mm};
    }
    out.classical = a1 != a2;
    return out;
}

SpaceSolution u3d(const SingularProfile& p, const HProfile& h, double x1, double x2, double x3)
{
    const PlanarSolution w = w_eval(p, x1, x2);
    const ProfileJet hj = h(x3);
    SpaceSolution out;
    out.u = w.w.u * hj.value;
    out.classical = w.classical;
    if (!w.classical) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.u11 = out.u22 = out.u33 = nan;
        return out;
    }
    out.u11 = w.w.hessian.h11 * hj.value;
    out.u22 = w.w.hessian.h22 * hj.value;
    out.u33 = w.w.u * hj.d2;
    return out;
}

std::vector<std::array<double, 3>> singular_lattice()
{
    std::vector<std::array<double, 3>> pts;
    pts.reserve(25 * 20 * 21);
    for (int k = 0; k <= 20; ++k) {
        for (int j = 0; j < 20; ++j) {
            for (int i = 0; i < 25; ++i) {
                pts.push_back({-2.0 + 4.0 * (i + 0.5) / 25.0, -2.0 + 4.0 * (j + 0.25) / 20.0, -3.0 + 6.0 * k / 20.0});
            }
        }
    }
    return pts;
}

} // namespace hessprod
