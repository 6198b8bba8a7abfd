#include "hessprod/cli.hpp"

#include "hessprod/config.hpp"
#include "hessprod/dirichlet.hpp"
#include "hessprod/errors.hpp"
#include "hessprod/exact2d.hpp"
#include "hessprod/singular3d.hpp"
#include "hessprod/verify.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

namespace hessprod::cli {

namespace {

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    CsvWriter& header(std::initializer_list<const char*> cols)
    {
        bool first = true;
        for (const char* c : cols) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
        return *this;
    }
    CsvWriter& row(std::initializer_list<double> vals)
    {
        bool first = true;
        for (double v : vals) {
            if (!first) out_ << ',';
            out_ << format_real(v);
            first = false;
        }
        out_ << '\n';
        return *this;
    }

private:
    std::ostream& out_;
};

void kv(std::ostream& out, const std::string& key, double v) { out << key << '=' << format_real(v) << '\n'; }
void kv(std::ostream& out, const std::string& key, const std::string& v) { out << key << '=' << v << '\n'; }

std::ofstream open_out(const std::string& dir, const std::string& name)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message(), "--out");
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'", "--out");
    return f;
}

// Writes through `body` to DIR/name when --out is set, else to `fallback`.
void emit(const Options& opts, const std::string& name, std::ostream& fallback,
          const std::function<void(std::ostream&)>& body)
{
    if (opts.out) {
        std::ofstream f = open_out(*opts.out, name);
        body(f);
        if (!f) throw ConfigError("write to '" + name + "' failed", "--out");
    } else {
        body(fallback);
    }
}

std::size_t samples_or(const Options& opts, std::size_t fallback, std::size_t min = 2)
{
    const std::size_t n = opts.samples.value_or(fallback);
    if (n < min) throw ConfigError("--samples must be at least " + std::to_string(min), "--samples");
    return n;
}

double lerp(double a, double b, std::size_t k, std::size_t n)
{
    return k + 1 == n ? b : a + (b - a) * (static_cast<double>(k) / static_cast<double>(n - 1));
}

} // namespace

std::pair<double, double> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("--range must be A:B", "--range");
    const double a = parse_real(text.substr(0, colon), "--range");
    const double b = parse_real(text.substr(colon + 1), "--range");
    if (!(a < b)) throw ConfigError("--range needs A < B", "--range");
    return {a, b};
}

std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int run_entire(const Options& opts, std::ostream& out)
{
    const std::size_t n = samples_or(opts, 1001);
    const auto [a, b] = opts.range.value_or(std::pair{-20.0, 20.0});
    const EntireProfile& f = entire_profile();
    emit(opts, "entire.csv", out, [&](std::ostream& os) {
        CsvWriter csv(os);
        csv.header({"s", "f", "f1", "f2", "residual"});
        for (std::size_t k = 0; k < n; ++k) {
            const double s = lerp(a, b, k, n);
            const ProfileJet j = f(s);
            csv.row({s, j.value, j.d1, j.d2, j.value * j.d2 - 1.0});
        }
    });
    return exit_ok;
}

int run_box(const Options& opts, std::ostream& out)
{
    const std::size_t n = samples_or(opts, 1001);
    const auto [a, b] = opts.range.value_or(std::pair{-1.0, 1.0});
    if (a < -1.0 || b > 1.0) throw ConfigError("box profile range must lie in [-1, 1]", "--range");
    const BoxProfile& g = box_profile();
    emit(opts, "box.csv", out, [&](std::ostream& os) {
        CsvWriter csv(os);
        csv.header({"x", "g", "g1", "g2", "residual"});
        for (std::size_t k = 0; k < n; ++k) {
            const double x = lerp(a, b, k, n);
            const ProfileJet j = g(x);
            csv.row({x, j.value, j.d1, j.d2, j.value * j.d2 + 1.0});
        }
    });
    return exit_ok;
}

int run_barrier(const Options& opts, std::ostream& out)
{
    const std::size_t n = samples_or(opts, 101, 1);
    if (!(opts.lambda > 0.0) || !std::isfinite(opts.lambda)) throw ConfigError("--lambda must be positive", "--lambda");
    emit(opts, "barrier.csv", out, [&](std::ostream& os) {
        CsvWriter csv(os);
        csv.header({"x1", "x2", "g", "g11", "g12", "g22", "product"});
        for (std::size_t j = 0; j < n; ++j) {
            const double x2 = -0.5 + (static_cast<double>(j) + 0.5) / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double x1 = 0.25 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
                const PointSolution s = strict_convexity_barrier(opts.lambda, x1, x2);
                csv.row({x1, x2, s.u, s.hessian.h11, s.hessian.h12, s.hessian.h22, s.hessian.product()});
            }
        }
    });
    return exit_ok;
}

int run_singular3d(const Options& opts, std::ostream& out)
{
    const std::size_t n = samples_or(opts, 1001);
    const SingularProfile p = SingularProfile::build();
    const HProfile& h = h_profile();

    double lattice_sup = 0.0;
    std::size_t classical = 0;
    const auto lattice = singular_lattice();
    for (const auto& x : lattice) {
        const SpaceSolution s = u3d(p, h, x[0], x[1], x[2]);
        if (!s.classical) continue;
        ++classical;
        lattice_sup = std::max(lattice_sup, std::abs(s.product() - 1.0));
    }
    const Jet g1 = p.g(1.0);
    const auto far = far_field(p, {100.0, 1000.0, 10000.0});

    auto summary = [&](std::ostream& os) {
        kv(os, "lambda0", p.lambda0());
        kv(os, "h1_at_zero", p.h1_at_zero());
        kv(os, "g_at_zero", p.g(0.0).v);
        kv(os, "diagonal_matching", g1.d1 - 2.0 / 3.0 * g1.v);
        kv(os, "gluing_sup", gluing_defect(p));
        kv(os, "linearized_sup", linearized_residual(p.trajectory(), p.lambda0()));
        kv(os, "lattice_points", static_cast<double>(classical));
        kv(os, "lattice_residual_sup", lattice_sup);
        for (const FarFieldPoint& f : far) {
            const std::string t = format_real(f.t);
            kv(os, "far_field_a_t" + t, f.a);
            kv(os, "far_field_b_t" + t, f.b);
        }
    };
    if (!opts.out) {
        summary(out);
        return exit_ok;
    }
    emit(opts, "singular3d_summary.txt", out, summary);
    emit(opts, "singular3d_profile.csv", out, [&](std::ostream& os) {
        CsvWriter csv(os);
        csv.header({"t", "g", "g1", "g2", "residual"});
        for (std::size_t k = 0; k < n; ++k) {
            const double t = lerp(0.0, 1.0, k, n);
            const Jet j = p.g(t);
            csv.row({t, j.v, j.d1, j.d2, profile_poly(j.v, j.d1, j.d2, t)});
        }
    });
    emit(opts, "singular3d_lattice.csv", out, [&](std::ostream& os) {
        CsvWriter csv(os);
        csv.header({"x1", "x2", "x3", "u", "u11", "u22", "u33", "product"});
        for (const auto& x : lattice) {
            const SpaceSolution s = u3d(p, h, x[0], x[1], x[2]);
            csv.row({x[0], x[1], x[2], s.u, s.u11, s.u22, s.u33, s.product()});
        }
    });
    return exit_ok;
}

int run_solve(const Options& opts, std::ostream& out, std::ostream& err)
{
    if (!opts.config) throw ConfigError("solve needs --config", "--config");
    const SolveConfig cfg = load_solve_config(*opts.config);
    Options o = opts;
    if (!o.out && !cfg.output_dir.empty()) o.out = cfg.output_dir;

    const Grid2D grid = domain_grid(cfg.spec, cfg.n1, cfg.n2);
    const PenalizedProblem problem = PenalizedProblem::from_spec(cfg.spec, grid);
    const SolveResult res = [&] {
        try {
            return continuation_solve(problem, cfg.continuation);
        } catch (const SolveFailure& f) {
            err << "stage=" << f.report().failed_stage << '\n';
            throw;
        }
    }();
    const ScalarField2D u11 = d2_axis(res.u, 1), u22 = d2_axis(res.u, 2);
    const double last_eps = problem.penalized ? cfg.continuation.epsilon.back() : 1.0;
    const ResidualFields F = penalized_residual(res.u, problem, last_eps, 1.0, ScalarField2D(grid, 1.0), 0.0);

    double max_error = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.is_boundary(k) || problem.rho[k] > 0.0) continue;
        max_error = std::max(max_error, std::abs(res.u[k] - problem.phi[k]));
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    emit(o, "solve_field.csv", out, [&](std::ostream& os) {
        CsvWriter csv(os);
        csv.header({"x1", "x2", "u", "u11", "u22", "residual"});
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const bool b = grid.is_boundary(k);
            csv.row({grid.x1(grid.col(k)), grid.x2(grid.row(k)), res.u[k], b ? nan : u11[k], b ? nan : u22[k], F.F[k]});
        }
    });
    const SolveReport& r = res.report;
    auto report = [&](std::ostream& os) {
        kv(os, "status", "ok");
        kv(os, "domain", to_string(cfg.spec.kind));
        kv(os, "n1", static_cast<double>(cfg.n1));
        kv(os, "n2", static_cast<double>(cfg.n2));
        kv(os, "seed", std::to_string(cfg.seed));
        kv(os, "penalty_delta", problem.penalized ? cfg.spec.delta : nan);
        kv(os, "max_error", max_error);
        kv(os, "final_residual", r.final_residual);
        kv(os, "min_argument", r.min_argument);
        kv(os, "phi_minus_u", r.phi_minus_u);
        kv(os, "convexity_probe", r.convexity_probe);
        kv(os, "interior_d2_sup", r.interior_d2_sup);
        kv(os, "C0", r.C0);
        kv(os, "K0", r.K0);
        kv(os, "stages", static_cast<double>(r.stages.size()));
        kv(os, "newton_iterations", static_cast<double>(r.newton_iterations));
        kv(os, "linear_iterations", static_cast<double>(r.linear_iterations));
        for (std::size_t e = 0; e < r.epsilons.size(); ++e) {
            const std::string s = std::to_string(e);
            kv(os, "eps_" + s, r.epsilons[e].eps);
            kv(os, "eps_" + s + "_phi_minus_u", r.epsilons[e].phi_minus_u);
            kv(os, "eps_" + s + "_u_minus_phi", r.epsilons[e].u_minus_phi);
            kv(os, "eps_" + s + "_fresh_seed", r.epsilons[e].fresh_seed ? 1.0 : 0.0);
        }
    };
    if (o.out) {
        emit(o, "solve_report.txt", out, report);
        report(out);
    } else {
        report(err);
    }
    return exit_ok;
}

int run_verify(const Options& opts, std::ostream& out)
{
    const auto results = run_suite(opts.selector, opts.seed);
    bool all = true;
    emit(opts, "verify.txt", out, [&](std::ostream& os) {
        for (const CheckResult& c : results) {
            all = all && c.pass;
            os << "check=" << c.name << " pass=" << (c.pass ? 1 : 0) << " measured=" << format_real(c.measured)
               << " threshold=" << format_real(c.threshold)
               << " polarity=" << (c.polarity == Polarity::at_most ? "at_most" : "at_least") << " seed=" << c.seed
               << " note=\"" << c.note << "\"\n";
        }
    });
    return all ? exit_ok : exit_numerical;
}

int run(const std::string& command, const Options& opts, std::ostream& out, std::ostream& err)
{
    try {
        if (command == "entire") return run_entire(opts, out);
        if (command == "box") return run_box(opts, out);
        if (command == "barrier") return run_barrier(opts, out);
        if (command == "singular3d") return run_singular3d(opts, out);
        if (command == "solve") return run_solve(opts, out, err);
        if (command == "verify") return run_verify(opts, out);
        err << "error: unknown command '" << command << "'\n";
        return exit_config;
    } catch (const ConfigError& e) {
        err << "error: " << e.what();
        if (!e.key().empty()) err << " [key: " << e.key() << "]";
        err << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace hessprod::cli
