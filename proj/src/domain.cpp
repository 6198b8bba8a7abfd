#include "hessprod/domain.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hessprod {

DomainKind parse_domain_kind(const std::string& name)
{
    if (name == "disk") return DomainKind::disk;
    if (name == "quartic") return DomainKind::quartic;
    if (name == "rectangle") return DomainKind::rectangle;
    if (name == "custom") return DomainKind::custom;
    throw ConfigError("unknown domain kind '" + name + "'", "domain.kind");
}

std::string to_string(DomainKind kind)
{
    switch (kind) {
    case DomainKind::disk: return "disk";
    case DomainKind::quartic: return "quartic";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::custom: return "custom";
    }
    return "unknown";
}

DomainSpec DomainSpec::disk(double radius, Polynomial2 phi, double delta)
{
    if (!(radius > 0.0)) throw ConfigError("disk radius must be positive", "domain.params");
    DomainSpec s;
    s.kind = DomainKind::disk;
    s.w = Polynomial2({-radius * radius, 0, 0, 1, 0, 1});
    s.phi = std::move(phi);
    const double r = 1.25 * radius;
    s.box = {-r, r, -r, r};
    s.delta = delta;
    s.seed_point = {0.0, 0.0};
    return s;
}

DomainSpec DomainSpec::quartic(Polynomial2 phi, double delta)
{
    DomainSpec s;
    s.kind = DomainKind::quartic;
    std::vector<double> c(Polynomial2::slot(0, 4) + 1, 0.0);
    c[Polynomial2::slot(2, 0)] = 1.0;
    c[Polynomial2::slot(0, 2)] = 1.0;
    c[Polynomial2::slot(1, 1)] = -4.0;
    c[Polynomial2::slot(4, 0)] = 1.0;
    c[Polynomial2::slot(2, 2)] = 2.0;
    c[Polynomial2::slot(0, 4)] = 1.0;
    s.w = Polynomial2(std::move(c));
    s.phi = std::move(phi);
    s.box = {0.0, 1.25, 0.0, 1.25};
    s.delta = delta;
    s.seed_point = {0.5, 0.5};
    return s;
}

DomainSpec DomainSpec::rectangle(const Bounds& box, Polynomial2 phi)
{
    DomainSpec s;
    s.kind = DomainKind::rectangle;
    s.phi = std::move(phi);
    s.box = box;
    s.seed_point = {0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3])};
    return s;
}

DomainSpec DomainSpec::custom(Polynomial2 w, Polynomial2 phi, const Bounds& box, Vec2 seed, double delta)
{
    DomainSpec s;
    s.kind = DomainKind::custom;
    s.w = std::move(w);
    s.phi = std::move(phi);
    s.box = box;
    s.seed_point = seed;
    s.delta = delta;
    return s;
}

Grid2D domain_grid(const DomainSpec& spec, std::size_t n1, std::size_t n2)
{
    return Grid2D(spec.box[0], spec.box[1], spec.box[2], spec.box[3], n1, n2);
}

double coordinate_convexity(const DomainSpec& spec, const Grid2D& grid)
{
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const Hessian2 h = spec.w.jet(grid.x1(i), grid.x2(j)).hessian;
            c = std::min({c, h.h11, h.h22});
        }
    }
    if (!(c > 0.0)) {
        std::ostringstream msg;
        msg << "defining function is not uniformly coordinate-convex on the box (min w_ii = " << c << ")";
        throw DomainError(msg.str());
    }
    return c;
}

std::vector<std::uint8_t> selected_component(const DomainSpec& spec, const Grid2D& grid)
{
    std::vector<double> w(grid.size());
    std::size_t negative = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        w[k] = spec.w(grid.x1(grid.col(k)), grid.x2(grid.row(k)));
        if (w[k] < 0.0) ++negative;
    }
    if (negative == 0) throw DomainError("{w < 0} contains no grid node of the box");

    const std::size_t seed = grid.nearest(spec.seed_point.x1, spec.seed_point.x2);
    if (!(w[seed] < 0.0)) throw DomainError("seed point is not inside {w < 0}");

    std::vector<std::uint8_t> in(grid.size(), 0);
    std::vector<std::size_t> stack{seed};
    in[seed] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t k = stack.back();
        stack.pop_back();
        const std::size_t i = grid.col(k), j = grid.row(k);
        const std::size_t nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (const auto& n : nbr) {
            if (n[0] >= grid.n1() || n[1] >= grid.n2()) continue; // wraps below zero
            const std::size_t kn = grid.index(n[0], n[1]);
            if (in[kn] || !(w[kn] < 0.0)) continue;
            in[kn] = 1;
            ++reached;
            stack.push_back(kn);
        }
    }
    if (reached != negative) {
        std::ostringstream msg;
        msg << "{w < 0} meets the box in more than one component (" << negative - reached
            << " nodes not connected to the seed)";
        throw DomainError(msg.str());
    }
    return in;
}

double smoothstep_penalty(double w, double delta)
{
    if (!(w > 0.0)) return 0.0;
    if (w >= delta) return 1.0;
    const double r = w / delta;
    return r * r * (3.0 - 2.0 * r);
}

ScalarField2D build_penalty(const DomainSpec& spec, const Grid2D& grid)
{
    if (spec.kind == DomainKind::rectangle) {
        throw ConfigError("rectangles are solved without a penalty", "domain.kind");
    }
    if (!(spec.delta > 0.0)) throw ConfigError("penalty width must be positive", "penalty.delta");
    coordinate_convexity(spec, grid);
    selected_component(spec, grid);
    ScalarField2D rho(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        rho[k] = smoothstep_penalty(spec.w(grid.x1(grid.col(k)), grid.x2(grid.row(k))), spec.delta);
    }
    return rho;
}

} // namespace hessprod
