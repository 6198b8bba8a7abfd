#include "hessprod/kernels.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hessprod {

namespace {

// Shared per-node arithmetic, so the serial and OpenMP kernels agree bit for bit.

struct Spacing {
    std::size_t stride;
    double inv_h2;
    double inv_2h;
};

Spacing spacing(const Grid2D& g, int axis)
{
    if (axis == 1) {
        return {1, 1.0 / (g.h1() * g.h1()), 0.5 / g.h1()};
    }
    if (axis == 2) {
        return {g.n1(), 1.0 / (g.h2() * g.h2()), 0.5 / g.h2()};
    }
    throw ConfigError("axis must be 1 or 2");
}

inline double second_difference(const double* f, std::size_t k, std::size_t stride, double inv_h2)
{
    return (f[k - stride] - 2.0 * f[k] + f[k + stride]) * inv_h2;
}

inline double cross_difference(const double* f, std::size_t k, std::size_t n1, double inv_4h1h2)
{
    return ((f[k + 1 + n1] - f[k + 1 - n1]) - (f[k - 1 + n1] - f[k - 1 - n1])) * inv_4h1h2;
}

inline double first_difference(const double* f, std::size_t k, std::size_t stride, double inv_2h)
{
    return (f[k + stride] - f[k - stride]) * inv_2h;
}

// Boundary nodes copy the nearest interior node.
void fill_boundary(const Grid2D& g, std::span<double> out)
{
    const std::size_t n1 = g.n1(), n2 = g.n2();
    auto clamp_i = [n1](std::size_t i) { return std::clamp<std::size_t>(i, 1, n1 - 2); };
    auto clamp_j = [n2](std::size_t j) { return std::clamp<std::size_t>(j, 1, n2 - 2); };
    for (std::size_t i = 0; i < n1; ++i) {
        out[g.index(i, 0)] = out[g.index(clamp_i(i), 1)];
        out[g.index(i, n2 - 1)] = out[g.index(clamp_i(i), n2 - 2)];
    }
    for (std::size_t j = 1; j + 1 < n2; ++j) {
        out[g.index(0, j)] = out[g.index(1, clamp_j(j))];
        out[g.index(n1 - 1, j)] = out[g.index(n1 - 2, clamp_j(j))];
    }
}

inline void log_residual_node(const Grid2D& g, const LogResidualInput& in, const LogResidualOutput& out,
                              std::size_t k, double inv_h11, double inv_h22)
{
    const double* u = in.u.data();
    const double d11 = second_difference(u, k, 1, inv_h11);
    const double d22 = second_difference(u, k, g.n1(), inv_h22);
    const double pen = in.rho.empty() ? 0.0 : in.eps_inv * (u[k] - in.phi[k]) * in.rho[k];
    const double a1 = d11 - pen;
    const double a2 = d22 - pen;
    out.A1[k] = a1;
    out.A2[k] = a2;
    if (a1 > 0.0 && a2 > 0.0) {
        out.F[k] = std::log(a1) + std::log(a2) - in.rhs_log[k];
    } else {
        out.F[k] = std::numeric_limits<double>::quiet_NaN();
    }
}

inline void log_residual_boundary(const LogResidualInput& in, const LogResidualOutput& out, std::size_t k)
{
    out.F[k] = in.u[k] - in.phi[k];
    out.A1[k] = 1.0;
    out.A2[k] = 1.0;
}

inline double apply_row(const FivePointMatrix& a, const double* x, std::size_t k, std::size_t i, std::size_t j)
{
    double y = a.center[k] * x[k];
    if (i > 0) y += a.west[k] * x[k - 1];
    if (i + 1 < a.n1) y += a.east[k] * x[k + 1];
    if (j > 0) y += a.south[k] * x[k - a.n1];
    if (j + 1 < a.n2) y += a.north[k] * x[k + a.n1];
    return y;
}

std::size_t chunk_count(std::size_t n)
{
    return (n + kernels::reduction_chunk - 1) / kernels::reduction_chunk;
}

} // namespace

namespace kernels::serial {

void d2_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out)
{
    const Spacing s = spacing(g, axis);
    for (std::size_t j = 1; j + 1 < g.n2(); ++j) {
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            const std::size_t k = g.index(i, j);
            out[k] = second_difference(f.data(), k, s.stride, s.inv_h2);
        }
    }
    fill_boundary(g, out);
}

void d2_mixed(const Grid2D& g, std::span<const double> f, std::span<double> out)
{
    const double c = 0.25 / (g.h1() * g.h2());
    for (std::size_t j = 1; j + 1 < g.n2(); ++j) {
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            const std::size_t k = g.index(i, j);
            out[k] = cross_difference(f.data(), k, g.n1(), c);
        }
    }
    fill_boundary(g, out);
}

void d1_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out)
{
    const Spacing s = spacing(g, axis);
    for (std::size_t j = 1; j + 1 < g.n2(); ++j) {
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            const std::size_t k = g.index(i, j);
            out[k] = first_difference(f.data(), k, s.stride, s.inv_2h);
        }
    }
    fill_boundary(g, out);
}

void apply(const FivePointMatrix& a, std::span<const double> x, std::span<double> y)
{
    for (std::size_t j = 0; j < a.n2; ++j) {
        for (std::size_t i = 0; i < a.n1; ++i) {
            const std::size_t k = i + a.n1 * j;
            y[k] = apply_row(a, x.data(), k, i, j);
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double sup_abs(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a) {
        if (std::isnan(v)) return v;
        m = std::max(m, std::abs(v));
    }
    return m;
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y)
{
    for (std::size_t k = 0; k < y.size(); ++k) {
        y[k] = alpha * x[k] + beta * y[k];
    }
}

PositivityProbe log_residual(const Grid2D& g, const LogResidualInput& in, const LogResidualOutput& out)
{
    const double inv_h11 = 1.0 / (g.h1() * g.h1());
    const double inv_h22 = 1.0 / (g.h2() * g.h2());
    PositivityProbe probe{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t j = 0; j < g.n2(); ++j) {
        for (std::size_t i = 0; i < g.n1(); ++i) {
            const std::size_t k = g.index(i, j);
            if (g.is_boundary(i, j)) {
                log_residual_boundary(in, out, k);
                continue;
            }
            log_residual_node(g, in, out, k, inv_h11, inv_h22);
            const double m = std::min(out.A1[k], out.A2[k]);
            if (m < probe.min_arg) {
                probe = {m, k};
            }
        }
    }
    return probe;
}

} // namespace kernels::serial

namespace kernels::omp {

void d2_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out)
{
    const Spacing s = spacing(g, axis);
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(g.n2()) - 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < rows; ++j) {
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            const std::size_t k = g.index(i, static_cast<std::size_t>(j));
            out[k] = second_difference(f.data(), k, s.stride, s.inv_h2);
        }
    }
    fill_boundary(g, out);
}

void d2_mixed(const Grid2D& g, std::span<const double> f, std::span<double> out)
{
    const double c = 0.25 / (g.h1() * g.h2());
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(g.n2()) - 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < rows; ++j) {
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            const std::size_t k = g.index(i, static_cast<std::size_t>(j));
            out[k] = cross_difference(f.data(), k, g.n1(), c);
        }
    }
    fill_boundary(g, out);
}

void d1_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out)
{
    const Spacing s = spacing(g, axis);
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(g.n2()) - 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < rows; ++j) {
        for (std::size_t i = 1; i + 1 < g.n1(); ++i) {
            const std::size_t k = g.index(i, static_cast<std::size_t>(j));
            out[k] = first_difference(f.data(), k, s.stride, s.inv_2h);
        }
    }
    fill_boundary(g, out);
}

void apply(const FivePointMatrix& a, std::span<const double> x, std::span<double> y)
{
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.n2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < rows; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        for (std::size_t i = 0; i < a.n1; ++i) {
            const std::size_t k = i + a.n1 * j;
            y[k] = apply_row(a, x.data(), k, i, j);
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = a.size();
    const std::size_t chunks = chunk_count(n);
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            s += a[k] * b[k];
        }
        partial[static_cast<std::size_t>(c)] = s;
    }
    double s = 0.0;
    for (double p : partial) {
        s += p;
    }
    return s;
}

double sup_abs(std::span<const double> a)
{
    const std::size_t n = a.size();
    const std::size_t chunks = chunk_count(n);
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        double m = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            if (std::isnan(a[k])) {
                m = a[k];
                break;
            }
            m = std::max(m, std::abs(a[k]));
        }
        partial[static_cast<std::size_t>(c)] = m;
    }
    double m = 0.0;
    for (double p : partial) {
        if (std::isnan(p)) return p;
        m = std::max(m, p);
    }
    return m;
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y)
{
    const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        y[k] = alpha * x[k] + beta * y[k];
    }
}

PositivityProbe log_residual(const Grid2D& g, const LogResidualInput& in, const LogResidualOutput& out)
{
    const double inv_h11 = 1.0 / (g.h1() * g.h1());
    const double inv_h22 = 1.0 / (g.h2() * g.h2());
    const std::size_t n2 = g.n2();
    std::vector<PositivityProbe> row_probe(n2, {std::numeric_limits<double>::infinity(), 0});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n2); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        PositivityProbe probe{std::numeric_limits<double>::infinity(), 0};
        for (std::size_t i = 0; i < g.n1(); ++i) {
            const std::size_t k = g.index(i, j);
            if (g.is_boundary(i, j)) {
                log_residual_boundary(in, out, k);
                continue;
            }
            log_residual_node(g, in, out, k, inv_h11, inv_h22);
            const double m = std::min(out.A1[k], out.A2[k]);
            if (m < probe.min_arg) {
                probe = {m, k};
            }
        }
        row_probe[j] = probe;
    }
    PositivityProbe probe{std::numeric_limits<double>::infinity(), 0};
    for (const auto& p : row_probe) {
        if (p.min_arg < probe.min_arg) {
            probe = p;
        }
    }
    return probe;
}

} // namespace kernels::omp

ScalarField2D d2_axis(const ScalarField2D& f, int axis)
{
    ScalarField2D out(f.grid());
    kernels::omp::d2_axis(f.grid(), f.values(), axis, out.values());
    out.set_boundary_extrapolated(true);
    return out;
}

ScalarField2D d2_mixed(const ScalarField2D& f)
{
    ScalarField2D out(f.grid());
    kernels::omp::d2_mixed(f.grid(), f.values(), out.values());
    out.set_boundary_extrapolated(true);
    return out;
}

ScalarField2D d1_axis(const ScalarField2D& f, int axis)
{
    ScalarField2D out(f.grid());
    kernels::omp::d1_axis(f.grid(), f.values(), axis, out.values());
    out.set_boundary_extrapolated(true);
    return out;
}

} // namespace hessprod
