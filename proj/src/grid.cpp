#include "hessprod/grid.hpp"

#include "hessprod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hessprod {

namespace {

double lerp_node(double lo, double hi, std::size_t k, std::size_t n)
{
    if (k + 1 == n) {
        return hi;
    }
    return lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(n - 1));
}

} // namespace

Grid2D::Grid2D(double xmin, double xmax, double ymin, double ymax, std::size_t n1, std::size_t n2)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), n1_(n1), n2_(n2)
{
    if (n1 < 3 || n2 < 3) {
        throw InvalidGrid("grid needs at least 3 nodes per axis", "grid.n1");
    }
    if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(ymin) || !std::isfinite(ymax)) {
        throw InvalidGrid("grid bounds must be finite", "box.bounds");
    }
    h1_ = (xmax - xmin) / static_cast<double>(n1 - 1);
    h2_ = (ymax - ymin) / static_cast<double>(n2 - 1);
    if (!(h1_ > 0.0) || !(h2_ > 0.0)) {
        throw InvalidGrid("grid bounds must satisfy min < max", "box.bounds");
    }
}

double Grid2D::x1(std::size_t i) const noexcept { return lerp_node(xmin_, xmax_, i, n1_); }
double Grid2D::x2(std::size_t j) const noexcept { return lerp_node(ymin_, ymax_, j, n2_); }

std::size_t Grid2D::nearest(double x1, double x2) const noexcept
{
    auto snap = [](double x, double lo, double h, std::size_t n) {
        const double r = std::round((x - lo) / h);
        if (!(r > 0.0)) {
            return std::size_t{0};
        }
        return std::min(static_cast<std::size_t>(r), n - 1);
    };
    return index(snap(x1, xmin_, h1_, n1_), snap(x2, ymin_, h2_, n2_));
}

bool Grid2D::operator==(const Grid2D& other) const noexcept
{
    return xmin_ == other.xmin_ && xmax_ == other.xmax_ && ymin_ == other.ymin_ && ymax_ == other.ymax_
        && n1_ == other.n1_ && n2_ == other.n2_;
}

ScalarField2D::ScalarField2D(Grid2D grid, double fill)
    : grid_(grid), values_(grid.size(), fill)
{
}

ScalarField2D::ScalarField2D(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size()) {
        throw InvalidGrid("field length does not match grid");
    }
}

ScalarField2D sample(const Grid2D& grid, const PointFunction& fn)
{
    ScalarField2D out(grid);
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double y = grid.x2(j);
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const double v = fn(grid.x1(i), y);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "non-finite sample at node (" << i << ", " << j << ") = (" << grid.x1(i) << ", " << y
                    << ")";
                throw SamplingError(msg.str());
            }
            out.at(i, j) = v;
        }
    }
    return out;
}

Norms norms(const ScalarField2D& f, Region region)
{
    const Grid2D& g = f.grid();
    std::size_t i0 = 0, i1 = g.n1() - 1, j0 = 0, j1 = g.n2() - 1;
    switch (region.kind) {
    case Region::Kind::all:
        if (f.boundary_extrapolated()) {
            throw StateError("whole-grid norm requested on a field with extrapolated boundary values");
        }
        break;
    case Region::Kind::interior:
        i0 = 1, i1 = g.n1() - 2, j0 = 1, j1 = g.n2() - 2;
        break;
    case Region::Kind::sub_rectangle:
        if (region.i0 > region.i1 || region.j0 > region.j1 || region.i1 >= g.n1() || region.j1 >= g.n2()) {
            throw ConfigError("sub-rectangle outside the grid");
        }
        i0 = region.i0, i1 = region.i1, j0 = region.j0, j1 = region.j1;
        if (f.boundary_extrapolated() && (i0 == 0 || j0 == 0 || i1 + 1 == g.n1() || j1 + 1 == g.n2())) {
            throw StateError("sub-rectangle touches extrapolated boundary values");
        }
        break;
    }
    Norms out;
    double total = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) {
        double row_sum = 0.0;
        for (std::size_t i = i0; i <= i1; ++i) {
            const double a = std::abs(f.at(i, j));
            out.sup = std::max(out.sup, a);
            row_sum += a;
        }
        total += row_sum;
    }
    out.mean_abs = total / static_cast<double>((i1 - i0 + 1) * (j1 - j0 + 1));
    return out;
}

ScalarField2D difference(const ScalarField2D& a, const ScalarField2D& b)
{
    if (!(a.grid() == b.grid())) {
        throw InvalidGrid("fields live on different grids");
    }
    ScalarField2D out(a.grid());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] = a[k] - b[k];
    }
    out.set_boundary_extrapolated(a.boundary_extrapolated() || b.boundary_extrapolated());
    return out;
}

} // namespace hessprod
