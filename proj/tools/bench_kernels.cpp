// Times the serial reference kernels against their OpenMP versions.

#include "hessprod/grid.hpp"
#include "hessprod/kernels.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

namespace {

double seconds_per_call(const std::function<void()>& f, int reps)
{
    f(); // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, std::size_t n, double serial, double omp)
{
    std::printf("%-14s n=%-5zu serial=%10.3e s  omp=%10.3e s  speedup=%6.2f\n", name, n, serial, omp, serial / omp);
}

} // namespace

int main(int argc, char** argv)
{
    namespace k = hessprod::kernels;
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1025;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
    std::printf("threads=%d reps=%d\n", omp_get_max_threads(), reps);

    const hessprod::Grid2D g = hessprod::Grid2D::square(-1.0, 1.0, n);
    std::vector<double> u(g.size()), phi(g.size()), rho(g.size(), 0.0), rhs(g.size(), 0.0);
    std::vector<double> out(g.size()), a1(g.size()), a2(g.size()), y(g.size());
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double x1 = g.x1(g.col(idx)), x2 = g.x2(g.row(idx));
        u[idx] = 0.5 * (x1 * x1 + x2 * x2) + 0.1 * std::sin(3.0 * x1) * x2;
        phi[idx] = 0.5 * (x1 * x1 + x2 * x2);
        rho[idx] = x1 * x1 + x2 * x2 > 0.8 ? 1.0 : 0.0;
    }
    hessprod::FivePointMatrix a(n, n);
    const double h2 = g.h1() * g.h1();
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.is_boundary(idx)) continue;
        a.center[idx] = -4.0 / h2 - 1.0;
        a.west[idx] = a.east[idx] = a.south[idx] = a.north[idx] = 1.0 / h2;
    }
    const hessprod::LogResidualInput in{u, phi, rho, rhs, 10.0};
    const hessprod::LogResidualOutput res{out, a1, a2};

    report("d2_axis", n, seconds_per_call([&] { k::serial::d2_axis(g, u, 1, out); }, reps),
           seconds_per_call([&] { k::omp::d2_axis(g, u, 1, out); }, reps));
    report("d2_mixed", n, seconds_per_call([&] { k::serial::d2_mixed(g, u, out); }, reps),
           seconds_per_call([&] { k::omp::d2_mixed(g, u, out); }, reps));
    report("apply", n, seconds_per_call([&] { k::serial::apply(a, u, y); }, reps),
           seconds_per_call([&] { k::omp::apply(a, u, y); }, reps));
    volatile double sink = 0.0;
    report("dot", n, seconds_per_call([&] { sink = k::serial::dot(u, phi); }, reps),
           seconds_per_call([&] { sink = k::omp::dot(u, phi); }, reps));
    report("axpby", n, seconds_per_call([&] { k::serial::axpby(1e-9, u, 1.0, y); }, reps),
           seconds_per_call([&] { k::omp::axpby(1e-9, u, 1.0, y); }, reps));
    report("log_residual", n, seconds_per_call([&] { k::serial::log_residual(g, in, res); }, reps),
           seconds_per_call([&] { k::omp::log_residual(g, in, res); }, reps));
    (void)sink;
    return 0;
}
