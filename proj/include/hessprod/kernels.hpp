#pragma once

// Grid kernels. Every kernel exists twice: a plain serial loop kept as the
// reference, and an OpenMP version used by the library. Pointwise kernels
// produce bit-identical output in both versions; reductions in the OpenMP
// version sum fixed-size chunks in index order, so their result does not
// depend on the thread count.

#include "hessprod/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hessprod {

/// Five-point operator on a Grid2D, one coefficient set per node:
/// (A x)_k = center_k x_k + west_k x_{k-1} + east_k x_{k+1}
///         + south_k x_{k-n1} + north_k x_{k+n1}.
/// Boundary rows are identity rows.
struct FivePointMatrix {
    std::size_t n1 = 0, n2 = 0;
    std::vector<double> center, west, east, south, north;

    FivePointMatrix() = default;
    FivePointMatrix(std::size_t n1_, std::size_t n2_)
        : n1(n1_), n2(n2_), center(n1_ * n2_, 1.0), west(n1_ * n2_, 0.0), east(n1_ * n2_, 0.0),
          south(n1_ * n2_, 0.0), north(n1_ * n2_, 0.0)
    {
    }
    std::size_t size() const noexcept { return n1 * n2; }
};

/// Inputs of the log-form residual
///   F = log A1 + log A2 - rhs_log,   A_i = D_ii u - eps_inv (u - phi) rho
/// at interior nodes and F = u - phi at boundary nodes.
struct LogResidualInput {
    std::span<const double> u;
    std::span<const double> phi;
    std::span<const double> rho;     // empty means rho == 0
    std::span<const double> rhs_log; // log of the right-hand side, interior nodes
    double eps_inv = 0.0;
};

struct LogResidualOutput {
    std::span<double> F;
    std::span<double> A1;
    std::span<double> A2;
};

/// Smallest argument A_i over interior nodes and where it occurs.
struct PositivityProbe {
    double min_arg;
    std::size_t node;
};

namespace kernels {

inline constexpr std::size_t reduction_chunk = 4096;

namespace serial {
void d2_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out);
void d2_mixed(const Grid2D& g, std::span<const double> f, std::span<double> out);
void d1_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out);
void apply(const FivePointMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
double sup_abs(std::span<const double> a);
void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y);
PositivityProbe log_residual(const Grid2D& g, const LogResidualInput& in, const LogResidualOutput& out);
} // namespace serial

namespace omp {
void d2_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out);
void d2_mixed(const Grid2D& g, std::span<const double> f, std::span<double> out);
void d1_axis(const Grid2D& g, std::span<const double> f, int axis, std::span<double> out);
void apply(const FivePointMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
double sup_abs(std::span<const double> a);
void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y);
PositivityProbe log_residual(const Grid2D& g, const LogResidualInput& in, const LogResidualOutput& out);
} // namespace omp

} // namespace kernels

/// Centered second difference along `axis` (1 or 2) at interior nodes;
/// boundary nodes copy the adjacent interior value and the result is flagged
/// as boundary-extrapolated.
ScalarField2D d2_axis(const ScalarField2D& f, int axis);

/// Four-point centered cross difference; boundary handled as in d2_axis.
ScalarField2D d2_mixed(const ScalarField2D& f);

/// Centered first difference; boundary handled as in d2_axis.
ScalarField2D d1_axis(const ScalarField2D& f, int axis);

} // namespace hessprod
