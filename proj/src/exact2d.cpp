#include "hessprod/exact2d.hpp"

#include "hessprod/errors.hpp"
#include "hessprod/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hessprod {

namespace {

// Densities in terms of the offset d from the singular endpoint.
double h_density(double d) { return 1.0 / std::sqrt(std::log1p(d)); }          // x = 1 + d
double gbox_density(double d) { return 1.0 / std::sqrt(-2.0 * std::log1p(-d)); } // x = -1 + d

} // namespace

EntireProfile::EntireProfile(const Quadrature& q, double max_offset)
    : table_(h_density, max_offset, q)
{
}

double EntireProfile::max_abs_s() const noexcept { return table_.total() / std::numbers::sqrt2; }

ProfileJet EntireProfile::operator()(double s) const
{
    if (!std::isfinite(s)) {
        throw DomainError("entire profile evaluated at a non-finite point");
    }
    if (s == 0.0) {
        return {1.0, 0.0, 1.0};
    }
    const double d = table_.inverse(std::numbers::sqrt2 * std::abs(s));
    const double f = 1.0 + d;
    const double slope = std::sqrt(2.0 * std::log1p(d));
    return {f, std::copysign(slope, s), 1.0 / f};
}

BoxProfile::BoxProfile(const Quadrature& q)
    : table_(gbox_density, 1.0, q), lambda0_(table_.total())
{
}

ProfileJet BoxProfile::operator()(double x) const
{
    if (!(std::abs(x) <= 1.0)) {
        std::ostringstream msg;
        msg << "box profile evaluated at " << x << " outside [-1, 1]";
        throw DomainError(msg.str());
    }
    if (x == 0.0) {
        return {-1.0 / lambda0_, 0.0, lambda0_};
    }
    const double d = std::abs(x) == 1.0 ? 1.0 : table_.inverse(lambda0_ * std::abs(x));
    const double g = (d - 1.0) / lambda0_;
    const double slope = std::sqrt(-2.0 * std::log1p(-d));
    const double curvature = g == 0.0 ? -std::numeric_limits<double>::infinity() : -1.0 / g;
    return {g, std::copysign(slope, x), curvature};
}

const EntireProfile& entire_profile()
{
    static const EntireProfile profile;
    return profile;
}

const BoxProfile& box_profile()
{
    static const BoxProfile profile;
    return profile;
}

PointSolution entire_solution(const EntireProfile& f, double x1, double x2)
{
    const ProfileJet a = f(x1);
    const ProfileJet b = f(x2);
    PointSolution out;
    out.u = a.value * b.value;
    out.gradient = {a.d1 * b.value, a.value * b.d1};
    out.hessian = {a.d2 * b.value, a.d1 * b.d1, a.value * b.d2};
    return out;
}

PointSolution box_solution(const BoxProfile& g, double x1, double x2)
{
    if (!(std::abs(x1) <= 1.0) || !(std::abs(x2) <= 1.0)) {
        std::ostringstream msg;
        msg << "point (" << x1 << ", " << x2 << ") outside the box [-1, 1]^2";
        throw DomainError(msg.str());
    }
    const ProfileJet a = g(x1);
    const ProfileJet b = g(x2);
    PointSolution out;
    out.u = -a.value * b.value;
    out.gradient = {-a.d1 * b.value, -a.value * b.d1};
    out.hessian = {-a.d2 * b.value, -a.d1 * b.d1, -a.value * b.d2};
    return out;
}

PointSolution strict_convexity_barrier(double lambda, double x1, double x2)
{
    if (!(lambda > 0.0)) {
        throw DomainError("barrier needs lambda > 0");
    }
    if (!(x1 > 0.0 && x1 < 0.25) || !(std::abs(x2) <= 0.5)) {
        std::ostringstream msg;
        msg << "barrier evaluated at (" << x1 << ", " << x2 << ") outside (0, 1/4) x [-1/2, 1/2]";
        throw DomainError(msg.str());
    }
    // phi(x1) = x1 sqrt(L), L = log(1/x1).
    const double L = -std::log(x1);
    const double rootL = std::sqrt(L);
    const double phi = x1 * rootL;
    const double dphi = rootL - 0.5 / rootL;
    const double ddphi = -(2.0 * L + 1.0) / (4.0 * x1 * L * rootL);
    const double q = 4.0 * x2 * x2 - 1.0;

    PointSolution out;
    out.u = lambda * phi * q + x1 / lambda;
    out.gradient = {lambda * dphi * q + 1.0 / lambda, 8.0 * lambda * phi * x2};
    out.hessian = {lambda * ddphi * q, 8.0 * lambda * dphi * x2, 8.0 * lambda * phi};
    return out;
}

PogorelovReport pogorelov_monitor(const ScalarField2D& u, double sigma, std::optional<double> A)
{
    const Grid2D& g = u.grid();
    if (g.n1() < 5 || g.n2() < 5) {
        throw InvalidGrid("monitor needs at least 5 nodes per axis");
    }
    const ScalarField2D u1 = d1_axis(u, 1);
    const ScalarField2D u2 = d1_axis(u, 2);
    const ScalarField2D u11 = d2_axis(u, 1);

    const std::size_t ci = (g.n1() - 1) / 2, cj = (g.n2() - 1) / 2;
    const std::size_t center = g.index(ci, cj);
    const double xc = g.x1(ci);
    const double u2c = u2[center];

    auto radius2 = [&](std::size_t i, std::size_t j) {
        const double dx = g.x1(i) - xc;
        const double du = u2.at(i, j) - u2c;
        return dx * dx + du * du;
    };

    double a = 0.0;
    if (A) {
        a = *A;
    } else {
        // eta < 0 on the ring i in {1, n1-2} or j in {1, n2-2}.
        double ring_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            ring_min = std::min({ring_min, radius2(i, 1), radius2(i, g.n2() - 2)});
        }
        for (std::size_t j = 1; j + 1 < g.n2(); ++j) {
            ring_min = std::min({ring_min, radius2(1, j), radius2(g.n1() - 2, j)});
        }
        if (!(ring_min > 0.0)) {
            throw NumericalError("cannot choose the cutoff constant: x1^2 + u2^2 vanishes on the ring");
        }
        a = 2.2 / ring_min;
    }
    if (!(a > 0.0)) {
        throw ConfigError("cutoff constant A must be positive");
    }

    PogorelovReport rep{ScalarField2D(g, std::numeric_limits<double>::quiet_NaN()),
                        ScalarField2D(g, std::numeric_limits<double>::quiet_NaN()),
                        std::vector<std::uint8_t>(g.size(), 0),
                        a,
                        sigma,
                        0.0,
                        -std::numeric_limits<double>::infinity(),
                        center};

    auto eta_at = [&](std::size_t i, std::size_t j) { return 1.0 - a * radius2(i, j) / 2.0; };
    if (!(eta_at(ci, cj) > 0.0)) {
        throw NumericalError("cutoff is not positive at the central node");
    }

    // Flood fill over interior nodes, 4-connectivity, fixed visiting order.
    std::vector<std::size_t> stack{center};
    rep.inside[center] = 1;
    while (!stack.empty()) {
        const std::size_t k = stack.back();
        stack.pop_back();
        const std::size_t i = g.col(k), j = g.row(k);
        const std::size_t nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (const auto& n : nbr) {
            if (n[0] < 1 || n[1] < 1 || n[0] + 1 >= g.n1() || n[1] + 1 >= g.n2()) continue;
            const std::size_t kn = g.index(n[0], n[1]);
            if (rep.inside[kn] || !(eta_at(n[0], n[1]) > 0.0)) continue;
            rep.inside[kn] = 1;
            stack.push_back(kn);
        }
    }

    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!rep.inside[k]) continue;
        const double eta = eta_at(g.col(k), g.row(k));
        const double second = u11[k];
        if (!(second > 0.0)) {
            std::ostringstream msg;
            msg << "u11 = " << second << " <= 0 at node " << k << " inside the monitored component";
            throw NumericalError(msg.str());
        }
        rep.eta[k] = eta;
        rep.M[k] = std::log(second) + 0.5 * sigma * u1[k] * u1[k] + std::log(eta);
        rep.sup_eta2_u11sq = std::max(rep.sup_eta2_u11sq, eta * eta * second * second);
        if (rep.M[k] > rep.max_M) {
            rep.max_M = rep.M[k];
            rep.argmax_M = k;
        }
    }
    return rep;
}

} // namespace hessprod
