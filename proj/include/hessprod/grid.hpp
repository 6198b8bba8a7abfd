#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hessprod {

/// Uniform tensor grid on [xmin, xmax] x [ymin, ymax].
///
/// Nodes are stored row-major with the x1 index fastest: node (i, j) has
/// linear index i + n1 * j. Node coordinates are computed from the index
/// alone, so two grids with equal bounds and counts agree bit for bit.
class Grid2D {
public:
    Grid2D(double xmin, double xmax, double ymin, double ymax, std::size_t n1, std::size_t n2);

    /// Square grid [lo, hi]^2 with n nodes per axis.
    static Grid2D square(double lo, double hi, std::size_t n) { return {lo, hi, lo, hi, n, n}; }

    double xmin() const noexcept { return xmin_; }
    double xmax() const noexcept { return xmax_; }
    double ymin() const noexcept { return ymin_; }
    double ymax() const noexcept { return ymax_; }
    std::size_t n1() const noexcept { return n1_; }
    std::size_t n2() const noexcept { return n2_; }
    std::size_t size() const noexcept { return n1_ * n2_; }
    double h1() const noexcept { return h1_; }
    double h2() const noexcept { return h2_; }

    double x1(std::size_t i) const noexcept;
    double x2(std::size_t j) const noexcept;

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i + n1_ * j; }
    std::size_t col(std::size_t k) const noexcept { return k % n1_; }
    std::size_t row(std::size_t k) const noexcept { return k / n1_; }

    bool is_boundary(std::size_t i, std::size_t j) const noexcept
    {
        return i == 0 || j == 0 || i + 1 == n1_ || j + 1 == n2_;
    }
    bool is_boundary(std::size_t k) const noexcept { return is_boundary(col(k), row(k)); }

    /// Index of the node nearest to (x1, x2), clamped to the grid.
    std::size_t nearest(double x1, double x2) const noexcept;

    bool operator==(const Grid2D& other) const noexcept;

private:
    double xmin_, xmax_, ymin_, ymax_;
    std::size_t n1_, n2_;
    double h1_, h2_;
};

/// Node-indexed real values on a Grid2D.
///
/// Fields produced by finite-difference operators carry copies of the
/// adjacent interior value on boundary nodes; `boundary_extrapolated()` marks
/// such fields, and whole-grid norms refuse them.
class ScalarField2D {
public:
    explicit ScalarField2D(Grid2D grid, double fill = 0.0);
    ScalarField2D(Grid2D grid, std::vector<double> values);

    const Grid2D& grid() const noexcept { return grid_; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& at(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }
    double at(std::size_t i, std::size_t j) const noexcept { return values_[grid_.index(i, j)]; }

    bool boundary_extrapolated() const noexcept { return extrapolated_; }
    void set_boundary_extrapolated(bool flag) noexcept { extrapolated_ = flag; }

private:
    Grid2D grid_;
    std::vector<double> values_;
    bool extrapolated_ = false;
};

using PointFunction = std::function<double(double, double)>;

/// Samples `fn` at every node. Throws SamplingError naming the first
/// node where the value is not finite.
ScalarField2D sample(const Grid2D& grid, const PointFunction& fn);

struct Region {
    enum class Kind { all, interior, sub_rectangle };
    Kind kind = Kind::all;
    // Inclusive index bounds, used for sub_rectangle only.
    std::size_t i0 = 0, i1 = 0, j0 = 0, j1 = 0;

    static Region all() { return {}; }
    static Region interior() { return {Kind::interior}; }
    static Region sub(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1)
    {
        return {Kind::sub_rectangle, i0, i1, j0, j1};
    }
};

struct Norms {
    double sup = 0.0;
    double mean_abs = 0.0;
};

/// Sup and mean absolute value over a region. Summation order is fixed
/// (row by row), so results do not depend on the thread count.
Norms norms(const ScalarField2D& f, Region region = Region::all());

/// Pointwise a - b; both fields must live on the same grid.
ScalarField2D difference(const ScalarField2D& a, const ScalarField2D& b);

} // namespace hessprod
