// One line per acceptance criterion. Exit status is nonzero if any fails.

#include "oracles.hpp"

#include "hessprod/cli.hpp"
#include "hessprod/dirichlet.hpp"
#include "hessprod/exact2d.hpp"
#include "hessprod/singular3d.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace hessprod;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double interior_sup_error(const ScalarField2D& u, const PointFunction& exact)
{
    const Grid2D& g = u.grid();
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.is_boundary(k)) continue;
        e = std::max(e, std::abs(u[k] - exact(g.x1(g.col(k)), g.x2(g.row(k)))));
    }
    return e;
}

double entire_value(double x, double y) { return entire_solution(x, y).u; }

Outcome entire_profile_criterion()
{
    const EntireProfile& f = entire_profile();
    double sup = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double s = -20.0 + 40.0 * k / 999.0;
        const ProfileJet j = f(s);
        sup = std::max(sup, std::abs(j.value * j.d2 - 1.0));
    }
    const ProfileJet o = f(0.0);
    auto ratio = [&](double s) { return f(s).value / (std::sqrt(2.0) * s * std::sqrt(std::log(s))); };
    const double r6 = ratio(1e6), r9 = ratio(1e9);
    const bool pass = sup <= 1e-8 && o.value == 1.0 && o.d1 == 0.0 && std::abs(r6 - 1.0) <= 0.1
                      && std::abs(r9 - 1.0) < std::abs(r6 - 1.0);
    return {pass, fmt("sup|ff''-1|=%.2e f(0)=%g f'(0)=%g ratio(1e6)=%.6f ratio(1e9)=%.6f", sup, o.value, o.d1, r6, r9)};
}

Outcome box_profile_criterion()
{
    const BoxProfile& g = box_profile();
    double sup = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const ProfileJet j = g(-0.999 + 1.998 * k / 999.0);
        sup = std::max(sup, std::abs(j.value * j.d2 + 1.0));
    }
    const double ends = std::max(std::abs(g(-1.0).value), std::abs(g(1.0).value));
    const double lam = std::abs(g.lambda0() - std::tgamma(0.5) / std::sqrt(2.0));
    return {sup <= 1e-8 && ends <= 1e-8 && lam <= 1e-8,
            fmt("sup|gg''+1|=%.2e |g(+-1)|=%.2e |lambda0-Gamma(1/2)/sqrt2|=%.2e", sup, ends, lam)};
}

Outcome singular_criterion()
{
    const SingularProfile p = SingularProfile::build();
    const double h1 = std::abs(p.h1_at_zero() + 2.0 / 3.0);
    const Jet g1 = p.g(1.0);
    const double match = std::abs(g1.d1 - 2.0 / 3.0 * g1.v);

    double glue = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        const double t = 1.0 + 99.0 * k / 10000.0;
        glue = std::max(glue, std::abs(p.g(t).v - std::pow(t, 4.0 / 3.0) * p.g(1.0 / t).v));
    }
    const double lin = linearized_residual(p.trajectory(), p.lambda0());
    const double coarse = linearized_residual_fd(p.trajectory(), p.lambda0(), 100);
    const double fine = linearized_residual_fd(p.trajectory(), p.lambda0(), 50);

    const HProfile& h = h_profile();
    double lattice = 0.0;
    std::size_t points = 0;
    for (const auto& x : singular_lattice()) {
        const SpaceSolution s = u3d(p, h, x[0], x[1], x[2]);
        if (!s.classical) continue;
        ++points;
        lattice = std::max(lattice, std::abs(s.product() - 1.0));
    }
    double homog = 0.0;
    for (const auto& [a, b] : oracle::disk_points(200, 2.0, 0x5EED)) {
        if (std::abs(std::abs(a) - std::abs(b)) < 1e-6) continue;
        homog = std::max(homog, std::abs(w_eval(p, 2 * a, 2 * b).w.u - std::pow(2.0, 4.0 / 3.0) * w_eval(p, a, b).w.u));
    }
    const bool pass = h1 <= 1e-12 && match <= 1e-8 && glue <= 1e-6 && lin <= 1e-6 && coarse / fine >= 4.0
                      && points >= 10000 && lattice <= 1e-6 && homog <= 1e-10;
    return {pass, fmt("|h1(0)+2/3|=%.1e diag=%.1e glue=%.1e lin=%.1e halving=%.1f lattice(%zu)=%.1e homog=%.1e", h1,
                      match, glue, lin, coarse / fine, points, lattice, homog)};
}

Outcome quadratics_criterion()
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 65);
    struct Case {
        double a, b;
    };
    double worst = 0.0;
    std::string detail;
    auto run = [&](const std::string& name, const PointFunction& q) {
        const double e = interior_sup_error(solve_rectangle({-1, 1, -1, 1}, q, g).u, q);
        worst = std::max(worst, e);
        detail += fmt("%s:%.1e ", name.c_str(), e);
    };
    run("|x|^2/2", [](double x, double y) { return 0.5 * (x * x + y * y); });
    for (const Case c : {Case{2, 0}, Case{1, 3}}) {
        run(fmt("(a,b)=(%g,%g)", c.a, c.b),
            [c](double x, double y) { return c.a * x * x / 2 + y * y / (2 * c.a) + c.b * x * y; });
    }
    return {worst <= 1e-9, detail};
}

Outcome entire_convergence_criterion()
{
    std::vector<double> err;
    for (std::size_t n : {33, 65, 129}) {
        const Grid2D g = Grid2D::square(-1.0, 1.0, n);
        err.push_back(interior_sup_error(solve_rectangle({-1, 1, -1, 1}, entire_value, g).u, entire_value));
    }
    const double r1 = err[0] / err[1], r2 = err[1] / err[2];
    return {r1 >= 3.0 && r1 <= 5.0 && r2 >= 3.0 && r2 <= 5.0,
            fmt("errors %.3e %.3e %.3e ratios %.3f %.3f", err[0], err[1], err[2], r1, r2)};
}

Outcome box_convergence_criterion()
{
    std::vector<double> err, probe;
    auto exact = [](double x, double y) { return box_solution(x, y).u; };
    for (std::size_t n : {33, 65, 129}) {
        const Grid2D g = Grid2D::square(-1.0, 1.0, n);
        const SolveResult r = solve_rectangle({-1, 1, -1, 1}, [](double, double) { return 0.0; }, g);
        err.push_back(interior_sup_error(r.u, exact));
        probe.push_back(convexity_probe(r.u));
    }
    const bool pass = err[1] < err[0] && err[2] < err[1] && probe[0] > 0 && probe[1] > 0 && probe[2] > 0;
    return {pass, fmt("errors %.3e %.3e %.3e probes %.4f %.4f %.4f", err[0], err[1], err[2], probe[0], probe[1],
                      probe[2])};
}

Outcome disk_criterion()
{
    // phi = |x|^2 / 2 - 0.01 (|x|^2 - 1): equals the solution |x|^2 / 2 on the circle only.
    const Polynomial2 phi({0.01, 0, 0, 0.49, 0, 0.49});
    auto q = [](double x, double y) { return 0.5 * (x * x + y * y); };
    std::vector<double> err;
    std::vector<EpsilonRecord> seq;
    for (std::size_t n : {65, 129}) {
        const double h = 2.5 / static_cast<double>(n - 1);
        const DomainSpec d = DomainSpec::disk(1.0, phi, 4.0 * h);
        const Grid2D g = domain_grid(d, n, n);
        const SolveResult r = continuation_solve(d, g);
        double e = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double x = g.x1(g.col(k)), y = g.x2(g.row(k));
            if (x * x + y * y < 1.0) e = std::max(e, std::abs(r.u[k] - q(x, y)));
        }
        err.push_back(e);
        seq = r.report.epsilons;
    }
    bool decreasing = true;
    std::string s;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        if (k > 0 && !(seq[k].phi_minus_u < seq[k - 1].phi_minus_u)) decreasing = false;
        s += fmt("%.2e ", seq[k].phi_minus_u);
    }
    return {decreasing && err[1] <= 5e-3 && err[1] < err[0],
            fmt("(phi-u)+ along eps: %s| interior error 65^2=%.3e 129^2=%.3e", s.c_str(), err[0], err[1])};
}

Outcome invariance_criterion()
{
    const Grid2D g = Grid2D::square(-1.0, 1.0, 65);
    const Bounds b{-1, 1, -1, 1};
    const double a = 0.7;
    const SolveResult base = solve_rectangle(b, entire_value, g);
    const SolveResult shear = solve_rectangle(b, [a](double x, double y) { return entire_value(x, y) + a * x * y; }, g);
    const SolveResult upper = solve_rectangle(b, [](double x, double y) {
        return entire_value(x, y) + 0.2 * std::pow(std::max(x, 0.0), 2);
    }, g);
    const SolveResult shifted = solve_rectangle(b, [](double x, double y) { return entire_value(x, y) + 1.0; }, g);
    double dshear = 0.0, order = -1e300, gap = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.x1(g.col(k)), y = g.x2(g.row(k));
        dshear = std::max(dshear, std::abs(shear.u[k] - base.u[k] - a * x * y));
        order = std::max(order, base.u[k] - upper.u[k]);
        gap = std::max(gap, std::abs(shifted.u[k] - base.u[k] - 1.0));
    }
    // Scaling: v(x) = u(lambda x1, x2 / lambda), Hessian by the chain rule.
    double scale = 0.0;
    for (double lam : {2.0, 10.0}) {
        for (const auto& [x, y] : oracle::disk_points(100, 1.0, 0x5EED)) {
            const Hessian2 H = entire_solution(lam * x, y / lam).hessian;
            scale = std::max(scale, std::abs(lam * lam * H.h11 * H.h22 / (lam * lam) - 1.0));
        }
    }
    const bool pass = dshear <= 1e-10 && scale <= 1e-8 && order <= 1e-9 && gap <= 1e-9;
    return {pass, fmt("shear=%.1e scaling=%.1e max(u-v)=%.1e shift gap=%.1e", dshear, scale, order, gap)};
}

Outcome barrier_criterion()
{
    bool pass = true;
    std::string s;
    for (double lam : {0.1, 0.01}) {
        double lo = 1e300, hi = -1e300;
        const int n = 1000;
        for (int j = 0; j < n; ++j) {
            const double x2 = -0.5 + (j + 0.5) / n;
            for (int i = 0; i < n; ++i) {
                const double x1 = 0.25 * (i + 0.5) / n;
                const double p = strict_convexity_barrier(lam, x1, x2).hessian.product();
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
        }
        pass = pass && lo >= -1e-12 && hi <= 6.0 * lam + 1e-12;
        s += fmt("lambda=%g: [%.3e, %.3e] vs [0, %g]; ", lam, lo, hi, 6.0 * lam);
    }
    return {pass, s};
}

Outcome linearized_criterion()
{
    const double e = 1e-4;
    auto H = [](double x, double y) { return entire_solution(x, y).hessian; };
    double once = 0.0, twice = 0.0;
    for (const auto& [x, y] : oracle::disk_points(100, 1.0, 0x5EED)) {
        const Hessian2 c = H(x, y), xp = H(x + e, y), xm = H(x - e, y), yp = H(x, y + e), ym = H(x, y - e);
        const double u111 = (xp.h11 - xm.h11) / (2 * e), u112 = (yp.h11 - ym.h11) / (2 * e);
        const double u122 = (xp.h22 - xm.h22) / (2 * e), u222 = (yp.h22 - ym.h22) / (2 * e);
        // v = u1: v11 = u111, v22 = u122; v = u2: v11 = u112, v22 = u222
        once = std::max(once, std::abs(u111 / c.h11 + u122 / c.h22));
        once = std::max(once, std::abs(u112 / c.h11 + u222 / c.h22));
        const double u1111 = (xp.h11 - 2 * c.h11 + xm.h11) / (e * e);
        const double u1122 = (yp.h11 - 2 * c.h11 + ym.h11) / (e * e);
        const double lhs = u1111 / c.h11 + u1122 / c.h22;
        const double rhs = u111 * u111 / (c.h11 * c.h11) + c.h11 * c.h11 * u122 * u122;
        twice = std::max(twice, std::abs(lhs - rhs));
    }
    return {once <= 1e-5 && twice <= 1e-5, fmt("DiffOnce=%.2e DiffTwice=%.2e at 100 points", once, twice)};
}

Outcome determinism_criterion()
{
    struct Run {
        std::string command;
        cli::Options opts;
    };
    std::vector<Run> runs;
    runs.push_back({"entire", {}});
    runs.push_back({"box", {}});
    cli::Options b;
    b.samples = 41;
    runs.push_back({"barrier", b});
    cli::Options s;
    s.config = HESSPROD_TEST_DATA "/disk_quadratic.cfg";
    runs.push_back({"solve", s});
    s.config = HESSPROD_TEST_DATA "/quartic.cfg";
    runs.push_back({"solve", s});
    cli::Options v;
    v.selector = "linearized";
    runs.push_back({"verify", v});

    // Runs on 4 threads and on 1: reductions must not depend on the team size.
    bool pass = true;
    std::string detail;
    const int saved = omp_get_max_threads();
    const int threads = 4;
    for (const Run& r : runs) {
        std::ostringstream a, b2, ea, eb;
        omp_set_num_threads(threads);
        const int ca = cli::run(r.command, r.opts, a, ea);
        omp_set_num_threads(1);
        const int cb = cli::run(r.command, r.opts, b2, eb);
        omp_set_num_threads(saved);
        const bool same = ca == 0 && cb == 0 && a.str() == b2.str() && !a.str().empty();
        pass = pass && same;
        detail += r.command + (same ? ":identical " : ":DIFFERENT ");
    }
    return {pass, detail + fmt("(threads %d vs 1)", threads)};
}

} // namespace

int main()
{
    struct Criterion {
        std::string name;
        std::function<Outcome()> run;
        double budget; // seconds; infinite where none is stated
    };
    const double none = std::numeric_limits<double>::infinity();
    const std::vector<Criterion> criteria = {
        {"entire solution profile", entire_profile_criterion, 10.0},
        {"box solution profile", box_profile_criterion, 10.0},
        {"singular 3-D pipeline", singular_criterion, 120.0},
        {"rectangle, manufactured quadratics", quadratics_criterion, 30.0},
        {"rectangle, entire-product convergence", entire_convergence_criterion, 300.0},
        {"rectangle, zero boundary data", box_convergence_criterion, none},
        {"penalized disk", disk_criterion, none},
        {"invariance suite", invariance_criterion, none},
        {"barrier bound", barrier_criterion, none},
        {"linearized identities", linearized_criterion, none},
        {"determinism", determinism_criterion, none},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (sec >= criteria[k].budget) {
            o.pass = false;
            o.detail += fmt(" over budget %.0fs", criteria[k].budget);
        }
        failures += !o.pass;
        std::printf("criterion %2zu %s: %s (%.1fs) %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].name.c_str(),
                    sec, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
