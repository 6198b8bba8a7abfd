#include "hessprod/verify.hpp"

#include "hessprod/dirichlet.hpp"
#include "hessprod/errors.hpp"
#include "hessprod/kernels.hpp"
#include "hessprod/singular3d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hessprod {

namespace {

std::string fmt(const char* key, double v)
{
    std::ostringstream s;
    s.precision(6);
    s << key << '=' << v;
    return s.str();
}

double entire_u(double x1, double x2) { return entire_solution(x1, x2).u; }

std::vector<CheckResult> profiles_suite()
{
    std::vector<CheckResult> out;
    const EntireProfile& f = entire_profile();
    double ent = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const ProfileJet j = f(-20.0 + 40.0 * k / 999.0);
        ent = std::max(ent, std::abs(j.value * j.d2 - 1.0));
    }
    out.push_back(make_check("entire_residual", ent, 1e-8, Polarity::at_most, "sup |f f'' - 1| on 1000 points of [-20, 20]"));

    const BoxProfile& g = box_profile();
    double box = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const ProfileJet j = g(-0.999 + 1.998 * k / 999.0);
        box = std::max(box, std::abs(j.value * j.d2 + 1.0));
    }
    out.push_back(make_check("box_residual", box, 1e-8, Polarity::at_most, "sup |g g'' + 1| on 1000 points of [-0.999, 0.999]"));
    out.push_back(make_check("box_endpoints", std::max(std::abs(g(1.0).value), std::abs(g(-1.0).value)), 1e-8,
                             Polarity::at_most, "|g(+-1)|"));
    const double gamma_oracle = std::tgamma(0.5) / std::numbers::sqrt2;
    out.push_back(make_check("box_lambda0", std::abs(g.lambda0() - gamma_oracle), 1e-8, Polarity::at_most,
                             "|lambda0 - Gamma(1/2)/sqrt(2)|"));
    return out;
}

std::vector<CheckResult> residual_suite()
{
    std::vector<CheckResult> out;
    const Grid2D grid = Grid2D::square(-1.0, 1.0, 65);
    auto sup_interior = [](const ScalarField2D& f) { return norms(f, Region::interior()).sup; };
    out.push_back(make_check("residual_quadratic",
                             sup_interior(residual_product(sample(grid, [](double x, double y) { return (x * x + y * y) / 2; }))),
                             1e-12, Polarity::at_most, "u = |x|^2 / 2"));
    out.push_back(make_check("residual_anisotropic",
                             sup_interior(residual_product(sample(grid, [](double x, double y) { return x * x + y * y / 4; }))),
                             1e-12, Polarity::at_most, "u = a x1^2 / 2 + x2^2 / (2a), a = 2"));
    const double coarse = sup_interior(residual_product(sample(Grid2D::square(-1.0, 1.0, 33), entire_u)));
    const double fine = sup_interior(residual_product(sample(grid, entire_u)));
    out.push_back(make_check("residual_entire_refinement", coarse / fine, 3.0, Polarity::at_least,
                             fmt("sup33", coarse) + " " + fmt("sup65", fine)));
    return out;
}

std::vector<CheckResult> linearized_suite(std::uint64_t seed)
{
    const AnalyticSolution u = [](double x1, double x2) { return entire_solution(x1, x2); };
    std::vector<CheckResult> out;
    const LinearizedProbe at11 = linearized_probe(u, {1.0, 1.0});
    out.push_back(make_check("diff_once_at_1_1", std::max(std::abs(at11.diff_once_1), std::abs(at11.diff_once_2)), 1e-6,
                             Polarity::at_most, "|L(u_k)| at (1, 1), h3 = 1e-4", seed));
    auto rest = check_linearized_identities(u, probe_points(100, 1.0, seed), 1e-4, 1e-5, 1e-5, seed);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

std::vector<CheckResult> scaling_suite(std::uint64_t seed)
{
    const AnalyticSolution u = [](double x1, double x2) { return entire_solution(x1, x2); };
    const auto pts = probe_points(100, 1.0, seed);
    std::vector<CheckResult> out;
    for (double lambda : {1.0, 2.0, 10.0, -1.0}) out.push_back(check_scaling_invariance(u, lambda, pts, seed));
    return out;
}

std::vector<CheckResult> shear_suite()
{
    const Grid2D grid = Grid2D::square(-1.0, 1.0, 65);
    const Bounds b{-1.0, 1.0, -1.0, 1.0};
    constexpr double a = 0.7;
    const SolveResult base = solve_rectangle(b, entire_u, grid);
    const SolveResult sheared = solve_rectangle(b, [](double x, double y) { return entire_u(x, y) + a * x * y; }, grid);
    double dev = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double shear = a * grid.x1(grid.col(k)) * grid.x2(grid.row(k));
        dev = std::max(dev, std::abs(sheared.u[k] - base.u[k] - shear));
    }
    return {make_check("shear_invariance", dev, 1e-10, Polarity::at_most, "max |u(phi + a x1 x2) - u(phi) - a x1 x2|, a = 0.7, 65^2")};
}

std::vector<CheckResult> comparison_suite()
{
    const Grid2D grid = Grid2D::square(-1.0, 1.0, 65);
    const Bounds b{-1.0, 1.0, -1.0, 1.0};
    const SolveResult lower = solve_rectangle(b, entire_u, grid);
    const SolveResult upper = solve_rectangle(b, [](double x, double y) {
        const double bump = std::max(x, 0.0);
        return entire_u(x, y) + 0.2 * bump * bump;
    }, grid);
    const SolveResult shifted = solve_rectangle(b, [](double x, double y) { return entire_u(x, y) + 1.0; }, grid);
    return {comparison_probe(lower.u, upper.u), shift_probe(lower.u, shifted.u, 1.0)};
}

std::vector<CheckResult> barrier_suite()
{
    return {barrier_bound_check(0.1), barrier_bound_check(0.01)};
}

std::vector<CheckResult> singular_suite()
{
    std::vector<CheckResult> out;
    const SingularProfile p = SingularProfile::build();
    out.push_back(make_check("h1_at_zero", std::abs(p.h1_at_zero() + 2.0 / 3.0), 1e-12, Polarity::at_most, "|h1(0) + 2/3|"));
    const Jet g1 = p.g(1.0);
    out.push_back(make_check("diagonal_matching", std::abs(g1.d1 - 2.0 / 3.0 * g1.v), 1e-8, Polarity::at_most,
                             fmt("lambda0", p.lambda0())));
    out.push_back(make_check("gluing_identity", gluing_defect(p), 1e-6, Polarity::at_most, "sup |g(t) - t^{4/3} g(1/t)| on [1, 100]"));
    out.push_back(make_check("linearized_analytic", linearized_residual(p.trajectory(), p.lambda0()), 1e-6,
                             Polarity::at_most, "h1'' from implicit g1'''"));
    const double fine = linearized_residual_fd(p.trajectory(), p.lambda0(), 50);
    const double coarse = linearized_residual_fd(solve_g1(100.0, 2e-4), p.lambda0(), 50);
    out.push_back(make_check("linearized_fd", fine, 1e-6, Polarity::at_most, "h1'' by 5-point differences, step 1e-4, stride 50"));
    out.push_back(make_check("linearized_halving", coarse / fine, 4.0, Polarity::at_least,
                             fmt("coarse", coarse) + " " + fmt("fine", fine)));
    double lattice = 0.0;
    for (const auto& x : singular_lattice()) {
        const SpaceSolution s = u3d(p, h_profile(), x[0], x[1], x[2]);
        lattice = std::max(lattice, std::abs(s.product() - 1.0));
    }
    out.push_back(make_check("lattice_residual", lattice, 1e-6, Polarity::at_most, "sup |u11 u22 u33 - 1| on 10500 off-diagonal points"));
    double hom = 0.0;
    for (const Vec2& x : probe_points(100, 2.0)) {
        const double w1 = w_eval(p, x.x1, x.x2).w.u;
        const double w2 = w_eval(p, 2.0 * x.x1, 2.0 * x.x2).w.u;
        hom = std::max(hom, std::abs(w2 - std::pow(2.0, 4.0 / 3.0) * w1));
    }
    out.push_back(make_check("homogeneity", hom, 1e-10, Polarity::at_most, "max |w(2x) - 2^{4/3} w(x)|"));
    return out;
}

} // namespace

CheckResult make_check(std::string name, double measured, double threshold, Polarity polarity, std::string note,
                       std::uint64_t seed)
{
    const bool pass = polarity == Polarity::at_most ? measured <= threshold : measured >= threshold;
    return {std::move(name), pass, measured, threshold, polarity, seed, std::move(note)};
}

ScalarField2D residual_product(const ScalarField2D& u)
{
    const ScalarField2D u11 = d2_axis(u, 1);
    const ScalarField2D u22 = d2_axis(u, 2);
    ScalarField2D out(u.grid());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = u11[k] * u22[k] - 1.0;
    out.set_boundary_extrapolated(true);
    return out;
}

std::vector<Vec2> probe_points(std::size_t n, double radius, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Vec2> pts;
    pts.reserve(n);
    while (pts.size() < n) {
        const double x = 2.0 * unit() - 1.0;
        const double y = 2.0 * unit() - 1.0;
        if (x * x + y * y < 1.0) pts.push_back({radius * x, radius * y});
    }
    return pts;
}

LinearizedProbe linearized_probe(const AnalyticSolution& u, Vec2 x, double h3)
{
    const Hessian2 c = u(x.x1, x.x2).hessian;
    const Hessian2 e = u(x.x1 + h3, x.x2).hessian, w = u(x.x1 - h3, x.x2).hessian;
    const Hessian2 n = u(x.x1, x.x2 + h3).hessian, s = u(x.x1, x.x2 - h3).hessian;
    if (!(c.h11 > 0.0) || !(c.h22 > 0.0)) throw DomainError("probe needs u11, u22 > 0");

    const double u111 = (e.h11 - w.h11) / (2.0 * h3);
    const double u122 = (e.h22 - w.h22) / (2.0 * h3);
    const double u112 = (n.h11 - s.h11) / (2.0 * h3);
    const double u222 = (n.h22 - s.h22) / (2.0 * h3);
    const double u1111 = (e.h11 - 2.0 * c.h11 + w.h11) / (h3 * h3);
    const double u1122 = (n.h11 - 2.0 * c.h11 + s.h11) / (h3 * h3);

    LinearizedProbe out;
    out.diff_once_1 = u111 / c.h11 + u122 / c.h22;
    out.diff_once_2 = u112 / c.h11 + u222 / c.h22;
    out.diff_twice_lhs = u1111 / c.h11 + u1122 / c.h22;
    out.diff_twice_rhs = u111 * u111 / (c.h11 * c.h11) + c.h11 * c.h11 * u122 * u122;
    return out;
}

std::vector<CheckResult> check_linearized_identities(const AnalyticSolution& u, const std::vector<Vec2>& points,
                                                     double h3, double once_tol, double twice_tol,
                                                     std::uint64_t seed)
{
    double once = 0.0, twice = 0.0;
    for (const Vec2& x : points) {
        const LinearizedProbe p = linearized_probe(u, x, h3);
        once = std::max({once, std::abs(p.diff_once_1), std::abs(p.diff_once_2)});
        twice = std::max(twice, std::abs(p.diff_twice_lhs - p.diff_twice_rhs));
    }
    const std::string where = std::to_string(points.size()) + " points, h3 = " + fmt("", h3).substr(1);
    return {make_check("diff_once", once, once_tol, Polarity::at_most, "max |L(u_k)| over " + where, seed),
            make_check("diff_twice", twice, twice_tol, Polarity::at_most, "max |L(u11) - rhs| over " + where, seed)};
}

CheckResult check_scaling_invariance(const AnalyticSolution& u, double lambda, const std::vector<Vec2>& points,
                                     std::uint64_t seed)
{
    if (lambda == 0.0) throw ConfigError("scaling needs lambda != 0");
    double dev = 0.0;
    for (const Vec2& x : points) {
        // v(x) = u(lambda x1, x2 / lambda): v11 = lambda^2 u11, v22 = u22 / lambda^2.
        const Hessian2 h = u(lambda * x.x1, x.x2 / lambda).hessian;
        const double v11 = lambda * lambda * h.h11;
        const double v22 = h.h22 / (lambda * lambda);
        dev = std::max(dev, std::abs(v11 * v22 - 1.0));
    }
    return make_check("scaling_lambda_" + fmt("", lambda).substr(1), dev, 1e-8, Polarity::at_most,
                      "max |v11 v22 - 1| over " + std::to_string(points.size()) + " points", seed);
}

CheckResult comparison_probe(const ScalarField2D& u, const ScalarField2D& v, double tol)
{
    if (!(u.grid() == v.grid())) throw ConfigError("comparison needs fields on one grid");
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, u[k] - v[k]);
    return make_check("comparison", m, tol, Polarity::at_most, "max (u - v) for ordered boundary data");
}

CheckResult shift_probe(const ScalarField2D& u, const ScalarField2D& v, double shift, double tol)
{
    if (!(u.grid() == v.grid())) throw ConfigError("shift probe needs fields on one grid");
    double m = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, std::abs(v[k] - u[k] - shift));
    return make_check("constant_shift", m, tol, Polarity::at_most, fmt("shift", shift));
}

CheckResult barrier_bound_check(double lambda, std::size_t n)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double x2 = -0.5 + (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x1 = 0.25 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            const double p = strict_convexity_barrier(lambda, x1, x2).hessian.product();
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    }
    const double violation = std::max(hi - 6.0 * lambda, -lo);
    return make_check("barrier_lambda_" + fmt("", lambda).substr(1), violation, 1e-12, Polarity::at_most,
                      fmt("min", lo) + " " + fmt("max", hi) + " " + fmt("max_over_6lambda", hi / (6.0 * lambda)));
}

std::vector<std::string> suite_names()
{
    return {"profiles", "residual", "linearized", "scaling", "shear", "comparison", "barrier", "singular3d"};
}

std::vector<CheckResult> run_suite(const std::string& selector, std::uint64_t seed)
{
    const auto names = suite_names();
    if (selector != "default" && std::find(names.begin(), names.end(), selector) == names.end()) {
        throw ConfigError("unknown verify selector '" + selector + "'", "selector");
    }
    std::vector<CheckResult> out;
    auto add = [&](const std::vector<CheckResult>& r) { out.insert(out.end(), r.begin(), r.end()); };
    auto want = [&](const char* name) { return selector == "default" || selector == name; };
    if (want("profiles")) add(profiles_suite());
    if (want("residual")) add(residual_suite());
    if (want("linearized")) add(linearized_suite(seed));
    if (want("scaling")) add(scaling_suite(seed));
    if (want("shear")) add(shear_suite());
    if (want("comparison")) add(comparison_suite());
    if (want("barrier")) add(barrier_suite());
    if (want("singular3d")) add(singular_suite());
    return out;
}

} // namespace hessprod
