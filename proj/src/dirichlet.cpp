#include "hessprod/dirichlet.hpp"

#include "hessprod/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace hessprod {

namespace {

constexpr double g_margin = 1.05;
constexpr double doubling_cap = 1073741824.0; // 2^30

struct Workspace {
    std::vector<double> F, A1, A2, rhs_log;
    explicit Workspace(std::size_t n) : F(n), A1(n), A2(n), rhs_log(n, 0.0) {}
};

void fill_rhs_log(const Grid2D& grid, const ScalarField2D& g_field, double t, std::vector<double>& rhs_log)
{
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < n; ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        rhs_log[k] = t == 1.0 ? 0.0 : std::log(t + (1.0 - t) * g_field[k]);
    }
}

PositivityProbe evaluate(const PenalizedProblem& p, std::span<const double> u, double eps, Workspace& ws)
{
    LogResidualInput in{u, p.phi.values(), p.penalized ? p.rho.values() : std::span<const double>{}, ws.rhs_log,
                        1.0 / eps};
    return kernels::omp::log_residual(p.grid, in, {ws.F, ws.A1, ws.A2});
}

// Smallest A_i over interior nodes, NaN-aware: a NaN argument counts as -inf.
PositivityProbe worst_argument(const Grid2D& grid, const Workspace& ws)
{
    PositivityProbe probe{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.is_boundary(k)) continue;
        double m = std::min(ws.A1[k], ws.A2[k]);
        if (std::isnan(ws.A1[k]) || std::isnan(ws.A2[k])) m = -std::numeric_limits<double>::infinity();
        if (m < probe.min_arg) probe = {m, k};
    }
    return probe;
}

FivePointMatrix assemble_jacobian(const PenalizedProblem& p, double eps, const Workspace& ws)
{
    const Grid2D& g = p.grid;
    FivePointMatrix J(g.n1(), g.n2());
    const double ih1 = 1.0 / (g.h1() * g.h1());
    const double ih2 = 1.0 / (g.h2() * g.h2());
    const double eps_inv = 1.0 / eps;
    const auto n = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < n; ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        if (g.is_boundary(k)) continue;
        const double a1 = 1.0 / ws.A1[k];
        const double a2 = 1.0 / ws.A2[k];
        const double pen = p.penalized ? eps_inv * p.rho[k] : 0.0;
        J.west[k] = J.east[k] = a1 * ih1;
        J.south[k] = J.north[k] = a2 * ih2;
        J.center[k] = -2.0 * a1 * ih1 - 2.0 * a2 * ih2 - pen * (a1 + a2);
    }
    return J;
}

std::string stage_label(double eps, double t)
{
    std::ostringstream s;
    s.precision(17);
    s << "eps=" << eps << ",t=" << t;
    return s.str();
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

} // namespace

std::vector<double> ContinuationConfig::t_schedule() const
{
    std::vector<double> t(t_steps);
    for (std::size_t k = 0; k < t_steps; ++k) {
        t[k] = static_cast<double>(k) / static_cast<double>(t_steps - 1);
    }
    return t;
}

void ContinuationConfig::validate() const
{
    if (epsilon.empty()) throw ConfigError("epsilon schedule is empty", "schedule.epsilon");
    for (std::size_t k = 0; k < epsilon.size(); ++k) {
        if (!(epsilon[k] > 0.0) || !std::isfinite(epsilon[k])) {
            throw ConfigError("epsilon values must be positive and finite", "schedule.epsilon");
        }
        if (k > 0 && !(epsilon[k] < epsilon[k - 1])) {
            throw ConfigError("epsilon schedule must be strictly decreasing", "schedule.epsilon");
        }
    }
    if (t_steps < 2) throw ConfigError("t schedule needs at least 2 nodes", "schedule.t_steps");
    if (!(newton_tol > 0.0)) throw ConfigError("newton tolerance must be positive", "newton.tol");
    if (max_newton < 1) throw ConfigError("newton iteration cap must be positive", "newton.max_iter");
    if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("damping factor must lie in (0, 1)");
    if (!(theta > 0.0)) throw ConfigError("positivity floor must be positive");
}

PenalizedProblem PenalizedProblem::from_spec(const DomainSpec& spec, const Grid2D& grid)
{
    if (!near(grid.xmin(), spec.box[0]) || !near(grid.xmax(), spec.box[1]) || !near(grid.ymin(), spec.box[2])
        || !near(grid.ymax(), spec.box[3])) {
        throw ConfigError("grid does not cover the domain's box", "box.bounds");
    }
    if (spec.kind == DomainKind::rectangle) {
        const Polynomial2 phi = spec.phi;
        return rectangle(grid, [phi](double x1, double x2) { return phi(x1, x2); });
    }
    PenalizedProblem p{grid,
                       sample(grid, [&](double x1, double x2) { return spec.phi(x1, x2); }),
                       build_penalty(spec, grid),
                       sample(grid, [&](double x1, double x2) { return spec.w(x1, x2); }),
                       ScalarField2D(grid),
                       true};
    return p;
}

PenalizedProblem PenalizedProblem::rectangle(const Grid2D& grid, const PointFunction& phi)
{
    const std::size_t n1 = grid.n1(), n2 = grid.n2();
    ScalarField2D trace(grid);
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) {
            if (!grid.is_boundary(i, j)) continue;
            const double v = phi(grid.x1(i), grid.x2(j));
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "boundary data not finite at node (" << i << ", " << j << ")";
                throw SamplingError(msg.str());
            }
            trace.at(i, j) = v;
        }
    }
    // Coons patch of the boundary trace.
    ScalarField2D coons(grid);
    const double c00 = trace.at(0, 0), c10 = trace.at(n1 - 1, 0);
    const double c01 = trace.at(0, n2 - 1), c11 = trace.at(n1 - 1, n2 - 1);
    for (std::size_t j = 0; j < n2; ++j) {
        const double r = static_cast<double>(j) / static_cast<double>(n2 - 1);
        for (std::size_t i = 0; i < n1; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(n1 - 1);
            const double edges = (1 - s) * trace.at(0, j) + s * trace.at(n1 - 1, j) + (1 - r) * trace.at(i, 0)
                               + r * trace.at(i, n2 - 1);
            const double corners = (1 - s) * (1 - r) * c00 + s * (1 - r) * c10 + (1 - s) * r * c01 + s * r * c11;
            coons.at(i, j) = grid.is_boundary(i, j) ? trace.at(i, j) : edges - corners;
        }
    }
    const double a = grid.xmin(), b = grid.xmax(), c = grid.ymin(), d = grid.ymax();
    PenalizedProblem p{grid,
                       coons,
                       ScalarField2D(grid),
                       sample(grid, [=](double x1, double x2) { return (x1 - a) * (x1 - b) + (x2 - c) * (x2 - d); }),
                       coons,
                       false};
    return p;
}

ResidualFields penalized_residual(const ScalarField2D& u, const PenalizedProblem& p, double eps, double t,
                                  const ScalarField2D& g_field, double theta)
{
    if (!(u.grid() == p.grid) || !(g_field.grid() == p.grid)) throw ConfigError("fields live on different grids");
    Workspace ws(p.grid.size());
    fill_rhs_log(p.grid, g_field, t, ws.rhs_log);
    evaluate(p, u.values(), eps, ws);
    const PositivityProbe probe = worst_argument(p.grid, ws);
    if (!(probe.min_arg > theta)) {
        std::ostringstream msg;
        msg << "residual argument " << probe.min_arg << " <= " << theta << " at node " << probe.node << " ("
            << p.grid.x1(p.grid.col(probe.node)) << ", " << p.grid.x2(p.grid.row(probe.node)) << ")";
        throw PositivityError(msg.str(), probe.node);
    }
    return {ScalarField2D(p.grid, std::move(ws.F)), ScalarField2D(p.grid, std::move(ws.A1)),
            ScalarField2D(p.grid, std::move(ws.A2))};
}

GField build_g_field(const PenalizedProblem& p, double eps)
{
    const Grid2D& grid = p.grid;
    Workspace ws(grid.size());
    GField out{ScalarField2D(grid), ScalarField2D(grid), 1.0, p.penalized ? 1.0 : 0.0};
    while (true) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            out.seed[k] = grid.is_boundary(k) ? p.phi[k] : p.base[k] + out.C0 * p.barrier[k] - out.K0;
        }
        evaluate(p, out.seed.values(), eps, ws);
        // Worst violation of A1, A2 > 0 and A1 A2 >= g_margin, first in index order.
        bool ok = true;
        double worst = std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (grid.is_boundary(k)) {
                out.g[k] = 1.0;
                continue;
            }
            const double a1 = ws.A1[k], a2 = ws.A2[k];
            out.g[k] = a1 * a2;
            if (a1 > 0.0 && a2 > 0.0 && a1 * a2 >= g_margin) continue;
            ok = false;
            const double m = std::isnan(a1) || std::isnan(a2) ? -std::numeric_limits<double>::infinity()
                                                              : std::min({a1, a2, a1 * a2 - g_margin});
            if (m < worst) {
                worst = m;
                at = k;
            }
        }
        if (ok) return out;
        if (p.penalized && p.rho[at] > 0.0) {
            out.K0 *= 2.0;
        } else {
            out.C0 *= 2.0;
        }
        if (out.C0 > doubling_cap || out.K0 > doubling_cap) {
            std::ostringstream msg;
            msg << "no barrier constants up to 2^30 make g >= " << g_margin << " (worst node " << at << ")";
            throw ConfigError(msg.str());
        }
    }
}

NewtonResult newton_stage(ScalarField2D& u, const PenalizedProblem& p, double eps, double t,
                          const ScalarField2D& g_field, const ContinuationConfig& cfg)
{
    namespace K = kernels::omp;
    const Grid2D& grid = p.grid;
    const std::size_t n = grid.size();
    Workspace ws(n), trial(n);
    fill_rhs_log(grid, g_field, t, ws.rhs_log);
    trial.rhs_log = ws.rhs_log;
    const std::string label = stage_label(eps, t);

    NewtonResult res;
    auto fail = [&](const std::string& why) {
        throw StageFailure("newton stage " + label + " failed: " + why, label, res);
    };

    evaluate(p, u.values(), eps, ws);
    if (!(worst_argument(grid, ws).min_arg > cfg.theta)) fail("start point outside the coordinate-convex cone");
    double r = K::sup_abs(ws.F);
    if (!std::isfinite(r)) fail("non-finite residual at the start point");

    std::vector<double> rhs(n), step(n), u_try(n);
    while (true) {
        res.history.push_back(r);
        res.residual = r;
        if (r <= cfg.newton_tol) break;
        if (res.iterations >= cfg.max_newton) fail("iteration cap reached");

        const FivePointMatrix J = assemble_jacobian(p, eps, ws);
        for (std::size_t k = 0; k < n; ++k) rhs[k] = -ws.F[k];
        std::fill(step.begin(), step.end(), 0.0);
        res.linear_iterations += bicgstab(J, rhs, step, cfg.linear).iterations;

        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= cfg.max_halvings; ++h) {
            std::copy(u.values().begin(), u.values().end(), u_try.begin());
            K::axpby(lambda, step, 1.0, u_try);
            evaluate(p, u_try, eps, trial);
            const double r_try = K::sup_abs(trial.F);
            if (std::isfinite(r_try) && r_try < r && worst_argument(grid, trial).min_arg > cfg.theta) {
                std::copy(u_try.begin(), u_try.end(), u.values().begin());
                std::swap(ws.F, trial.F);
                std::swap(ws.A1, trial.A1);
                std::swap(ws.A2, trial.A2);
                r = r_try;
                accepted = true;
                break;
            }
            lambda *= cfg.damping;
        }
        if (!accepted) fail("no acceptable step after the maximum number of halvings");
        ++res.iterations;
    }
    return res;
}

double convexity_probe(const ScalarField2D& u)
{
    const Grid2D& g = u.grid();
    auto node = [&](double x1, double x2) -> std::optional<std::size_t> {
        const std::size_t k = g.nearest(x1, x2);
        if (std::abs(g.x1(g.col(k)) - x1) > 1e-12 || std::abs(g.x2(g.row(k)) - x2) > 1e-12) return std::nullopt;
        return k;
    };
    const auto up = node(0.0, 0.5), down = node(0.0, -0.5), mid = node(0.0, 0.0);
    if (!up || !down || !mid) return std::numeric_limits<double>::quiet_NaN();
    return u[*up] + u[*down] - 2.0 * u[*mid];
}

SolveResult continuation_solve(const PenalizedProblem& p, const ContinuationConfig& cfg)
{
    cfg.validate();
    const Grid2D& grid = p.grid;
    const std::vector<double> eps_list = p.penalized ? cfg.epsilon : std::vector<double>{1.0};
    const std::vector<double> ts = cfg.t_schedule();

    SolveReport report;
    ScalarField2D u(grid);
    ScalarField2D g(grid);
    Workspace ws(grid.size());

    auto run_stage = [&](double eps, double t) {
        const NewtonResult r = newton_stage(u, p, eps, t, g, cfg);
        report.stages.push_back({eps, t, r.iterations, r.residual});
        report.newton_iterations += static_cast<std::size_t>(r.iterations);
        report.linear_iterations += r.linear_iterations;
    };

    // Advance from t = a to t = b, bisecting the step on failure.
    auto advance = [&](auto& self, double eps, double a, double b, int depth) -> void {
        const ScalarField2D saved = u;
        try {
            run_stage(eps, b);
        } catch (const StageFailure& e) {
            if (depth >= cfg.max_t_bisections) {
                report.failed_stage = e.stage();
                throw SolveFailure(e.what(), report);
            }
            u = saved;
            const double mid = 0.5 * (a + b);
            self(self, eps, a, mid, depth + 1);
            self(self, eps, mid, b, depth + 1);
        }
    };

    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double eps = eps_list[e];
        bool fresh = e == 0;
        if (!fresh) {
            std::fill(ws.rhs_log.begin(), ws.rhs_log.end(), 0.0);
            evaluate(p, u.values(), eps, ws);
            if (worst_argument(grid, ws).min_arg > cfg.theta) {
                for (std::size_t k = 0; k < grid.size(); ++k) g[k] = grid.is_boundary(k) ? 1.0 : ws.A1[k] * ws.A2[k];
            } else {
                fresh = true;
            }
        }
        if (fresh) {
            try {
                GField gf = build_g_field(p, eps);
                u = std::move(gf.seed);
                g = std::move(gf.g);
                report.C0 = gf.C0;
                report.K0 = gf.K0;
            } catch (const ConfigError& err) {
                report.failed_stage = stage_label(eps, 0.0);
                throw SolveFailure(err.what(), report);
            }
        }
        try {
            run_stage(eps, 0.0);
        } catch (const StageFailure& err) {
            report.failed_stage = err.stage();
            throw SolveFailure(err.what(), report);
        }
        for (std::size_t k = 1; k < ts.size(); ++k) advance(advance, eps, ts[k - 1], ts[k], 0);

        EpsilonRecord rec{eps, 0.0, 0.0, fresh};
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (!(p.rho[k] > 0.0)) continue;
            rec.phi_minus_u = std::max(rec.phi_minus_u, p.phi[k] - u[k]);
            rec.u_minus_phi = std::max(rec.u_minus_phi, u[k] - p.phi[k]);
        }
        report.epsilons.push_back(rec);
    }

    std::fill(ws.rhs_log.begin(), ws.rhs_log.end(), 0.0);
    evaluate(p, u.values(), eps_list.back(), ws);
    report.final_residual = kernels::omp::sup_abs(ws.F);
    report.min_argument = worst_argument(grid, ws).min_arg;
    report.phi_minus_u = report.epsilons.back().phi_minus_u;
    report.convexity_probe = convexity_probe(u);
    const ScalarField2D u11 = d2_axis(u, 1), u22 = d2_axis(u, 2);
    double d2sup = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.is_boundary(k) || p.rho[k] > 0.0) continue;
        d2sup = std::max({d2sup, u11[k], u22[k]});
    }
    report.interior_d2_sup = d2sup;
    return {std::move(u), std::move(report)};
}

SolveResult continuation_solve(const DomainSpec& spec, const Grid2D& grid, const ContinuationConfig& cfg)
{
    return continuation_solve(PenalizedProblem::from_spec(spec, grid), cfg);
}

SolveResult solve_rectangle(const Bounds& bounds, const PointFunction& phi, const Grid2D& grid,
                            const ContinuationConfig& cfg)
{
    if (!near(grid.xmin(), bounds[0]) || !near(grid.xmax(), bounds[1]) || !near(grid.ymin(), bounds[2])
        || !near(grid.ymax(), bounds[3])) {
        throw ConfigError("rectangle must coincide with the grid's bounds", "box.bounds");
    }
    return continuation_solve(PenalizedProblem::rectangle(grid, phi), cfg);
}

} // namespace hessprod
